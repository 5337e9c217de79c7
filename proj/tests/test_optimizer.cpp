// test_optimizer.cpp - Record buffer editing, the pass harness, the four
// rewrites, and the optimize pipeline.

#include <doctest.h>

#include "muskia/corpus.hpp"
#include "muskia/inline_stack.hpp"
#include "muskia/optimizer.hpp"
#include "muskia/raster.hpp"
#include "support.hpp"

using namespace muskia;
using test::premul;

namespace {

Paint solid(Color c, BlendMode b = BlendMode::SrcOver, ColorFilter f = ColorFilter::Id) {
    return make_paint(Fill::solid(c), b, f);
}

Paint opaque_layer() { return solid(premul(1, 0, 0, 0)); }
Paint dstin_layer() { return solid(Color{}, BlendMode::DstIn); }

std::vector<Command::Op> ops_of(const Program& p) {
    std::vector<Command::Op> out;
    for (const Command& c : p.commands) out.push_back(c.op);
    return out;
}

}  // namespace

TEST_CASE("inline stack spills past its inline capacity") {
    InlineStack<int, 4> st;
    for (int i = 0; i < 20; ++i) st.push(i);
    CHECK(st.size() == 20);
    CHECK(st.back() == 19);
    CHECK(st[3] == 3);
    CHECK(st[10] == 10);
    for (int i = 19; i >= 0; --i) {
        CHECK(st.back() == i);
        st.pop();
    }
    CHECK(st.empty());
}

TEST_CASE("merge_insertions") {
    Program p;
    p.commands = {Command::save(), Command::clip(Shape::full()),
                  Command::draw(Shape::full(), Paint{}), Command::restore()};
    RecordBuffer buf(p);

    SUBCASE("no insertions is a no-op") {
        buf.merge_insertions();
        CHECK(buf.to_program(true) == p);
    }

    SUBCASE("head and tail insertions in one scan") {
        buf.queue_insert(0, {Command::save(), Command::clip(Shape::empty())});
        buf.queue_insert(4, {Command::restore()});
        buf.merge_insertions();
        REQUIRE(buf.size() == 7);
        CHECK(buf.at(0).op == Command::Op::Save);
        CHECK(buf.at(1).op == Command::Op::Clip);
        CHECK(buf.at(1).shape == Shape::empty());
        CHECK(buf.at(2).op == Command::Op::Save);
        CHECK(buf.at(6).op == Command::Op::Restore);
    }

    SUBCASE("equal indices preserve queue order") {
        buf.queue_insert(2, {Command::clip(Shape::rect(0, 0, 1, 1))});
        buf.queue_insert(2, {Command::clip(Shape::rect(0, 0, 2, 2))});
        buf.merge_insertions();
        CHECK(buf.at(2).shape == Shape::rect(0, 0, 1, 1));
        CHECK(buf.at(3).shape == Shape::rect(0, 0, 2, 2));
    }

    SUBCASE("out of range throws") {
        buf.queue_insert(99, {Command::save()});
        CHECK_THROWS_AS(buf.merge_insertions(), std::out_of_range);
    }
}

TEST_CASE("transform visits every record exactly once") {
    test::Rng rng(81);
    for (int iter = 0; iter < 20; ++iter) {
        const Program p = test::random_program(rng);
        RecordBuffer buf(p);
        for (const char* pass : kPipeline) {
            PassResult r = transform(pass, buf);
            CHECK(r.callbacks == buf.size());
            buf.merge_insertions();
        }
    }
}

TEST_CASE("frame stack spills past eight nested layers") {
    // Twelve nested rewritable layers: the harness frame stack leaves its
    // inline storage. Only the innermost can fire per scan (each push moves
    // its parent to Ignore), so full flattening takes one iteration per
    // nesting level.
    Program p;
    for (int i = 0; i < 12; ++i) p.commands.push_back(Command::save_layer(opaque_layer()));
    p.commands.push_back(
        Command::draw(Shape::rect(0, 0, 4, 4), solid(premul(1, 1, 1, 0))));
    for (int i = 0; i < 12; ++i) p.commands.push_back(Command::restore());
    RecordBuffer buf(p);
    const PassResult r = transform(kPassSrcOverSaveLayer, buf);
    REQUIRE(r.firings.size() == 1);
    CHECK(r.firings[0].anchor == 11);  // the innermost layer

    const OptimizeResult capped = optimize(p);  // default 4-iteration cap
    CHECK(capped.firings.at(kPassSrcOverSaveLayer) == 4);

    OptimizeConfig deep;
    deep.max_iterations = 12;
    const OptimizeResult full = optimize(p, deep);
    CHECK(full.firings.at(kPassSrcOverSaveLayer) == 12);
    for (const Command& c : full.program.commands)
        CHECK(c.op != Command::Op::SaveLayer);
}

TEST_CASE("transform rejects unbalanced buffers") {
    Program p;
    p.commands = {Command::restore()};
    RecordBuffer buf(p);
    CHECK_THROWS_AS(transform(kPassSrcOverSaveLayer, buf), std::invalid_argument);
}

TEST_CASE("srcover layer rewrite") {
    SUBCASE("the minimal pattern fires") {
        Program p;
        p.commands = {Command::save_layer(opaque_layer()),
                      Command::draw(Shape::rect(0, 0, 5, 5), solid(premul(1, 0, 1, 0))),
                      Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassSrcOverSaveLayer, buf);
        REQUIRE(r.firings.size() == 1);
        CHECK(r.firings[0].anchor == 0);
        CHECK(buf.at(0).op == Command::Op::Save);
        CHECK(buf.at(2).op == Command::Op::Restore);
    }

    SUBCASE("a multiply draw in the body blocks it") {
        Program p;
        p.commands = {
            Command::save_layer(opaque_layer()),
            Command::draw(Shape::rect(0, 0, 5, 5),
                          solid(premul(1, 0, 1, 0), BlendMode::Multiply)),
            Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassSrcOverSaveLayer, buf).firings.empty());
        CHECK(buf.to_program(true) == p);
    }

    SUBCASE("an inner layer defers the outer to the next scan") {
        Program p;
        p.commands = {Command::save_layer(opaque_layer()),
                      Command::save_layer(opaque_layer()),
                      Command::draw(Shape::rect(0, 0, 5, 5), solid(premul(1, 0, 1, 0))),
                      Command::restore(),
                      Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassSrcOverSaveLayer, buf);
        // Only the inner fires this scan.
        REQUIRE(r.firings.size() == 1);
        CHECK(r.firings[0].anchor == 1);
        CHECK(buf.at(0).op == Command::Op::SaveLayer);
        CHECK(buf.at(1).op == Command::Op::Save);
        // A second scan picks up the outer.
        const PassResult r2 = transform(kPassSrcOverSaveLayer, buf);
        REQUIRE(r2.firings.size() == 1);
        CHECK(r2.firings[0].anchor == 0);
    }

    SUBCASE("plain save/restore and clips in the body are fine") {
        Program p;
        p.commands = {Command::save_layer(opaque_layer()),
                      Command::save(),
                      Command::clip(Shape::rect(0, 0, 3, 3)),
                      Command::draw(Shape::full(), solid(premul(0.5, 1, 1, 1))),
                      Command::restore(),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassSrcOverSaveLayer, buf).firings.size() == 1);
    }
}

TEST_CASE("dstin to clip rewrite") {
    const Shape g = Shape::rect(10, 10, 40, 40);

    SUBCASE("suffix mask at the top level") {
        Program p;
        p.commands = {
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassDstInToClip, buf);
        REQUIRE(r.firings.size() == 1);
        buf.merge_insertions();
        const Program out = buf.to_program(false);
        CHECK(ops_of(out) == std::vector<Command::Op>{
                                 Command::Op::Save, Command::Op::Clip, Command::Op::Draw,
                                 Command::Op::Restore});
        CHECK(out.commands[1].shape == g);
    }

    SUBCASE("mask body clips are hoisted after the mask clip") {
        const Shape c1 = Shape::rect(0, 0, 30, 30);
        Program p;
        p.commands = {
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::clip(c1),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        REQUIRE(transform(kPassDstInToClip, buf).firings.size() == 1);
        buf.merge_insertions();
        buf.compact();
        const Program out = buf.to_program(true);
        REQUIRE(out.commands.size() == 6);
        CHECK(out.commands[0].op == Command::Op::Save);
        CHECK(out.commands[1].shape == g);
        CHECK(out.commands[2].shape == c1);   // hoisted copy
        CHECK(out.commands[3].op == Command::Op::Draw);
        CHECK(out.commands[4].op == Command::Op::Clip);  // original, now inert
        CHECK(out.commands[5].op == Command::Op::Restore);
    }

    SUBCASE("non-opaque mask color blocks it") {
        Program p;
        p.commands = {
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(0.5, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassDstInToClip, buf).firings.empty());
    }

    SUBCASE("a layer in the prefix blocks it") {
        Program p;
        p.commands = {
            Command::save_layer(solid(Color{}, BlendMode::Multiply)),
            Command::draw(Shape::full(), solid(premul(1, 1, 0, 0))),
            Command::restore(),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassDstInToClip, buf).firings.empty());
    }

    SUBCASE("a persisting prefix clip blocks it") {
        Program p;
        p.commands = {
            Command::clip(Shape::rect(0, 0, 50, 50)),
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassDstInToClip, buf).firings.empty());
    }

    SUBCASE("a bracketed prefix clip is fine") {
        Program p;
        p.commands = {
            Command::save(),
            Command::clip(Shape::rect(0, 0, 50, 50)),
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::restore(),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassDstInToClip, buf).firings.size() == 1);
    }

    SUBCASE("content after the mask blocks it") {
        Program p;
        p.commands = {
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore(),
            Command::draw(Shape::rect(0, 0, 5, 5), solid(premul(1, 0, 0, 1)))};
        RecordBuffer buf(p);
        CHECK(transform(kPassDstInToClip, buf).firings.empty());
    }

    SUBCASE("fires inside an enclosing layer body") {
        Program p;
        p.commands = {
            Command::save_layer(solid(Color{}, BlendMode::Multiply)),
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore(),
            Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassDstInToClip, buf);
        REQUIRE(r.firings.size() == 1);
        buf.merge_insertions();
        const Program out = buf.to_program(false);
        CHECK(ops_of(out) ==
              std::vector<Command::Op>{Command::Op::SaveLayer, Command::Op::Save,
                                       Command::Op::Clip, Command::Op::Draw,
                                       Command::Op::Restore, Command::Op::Restore});
    }

    SUBCASE("two sibling scopes fire in one scan") {
        Program p;
        p.commands = {
            // scope 1
            Command::save_layer(solid(Color{}, BlendMode::Multiply)),
            Command::draw(Shape::rect(0, 0, 60, 60), solid(premul(1, 1, 0, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(g, solid(premul(1, 1, 1, 1))),
            Command::restore(),
            Command::restore(),
            // scope 2
            Command::save_layer(solid(Color{}, BlendMode::SrcOut)),
            Command::draw(Shape::rect(0, 0, 30, 30), solid(premul(1, 0, 1, 0))),
            Command::save_layer(dstin_layer()),
            Command::draw(Shape::rect(5, 5, 20, 20), solid(premul(1, 1, 1, 1))),
            Command::restore(),
            Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassDstInToClip, buf);
        CHECK(r.firings.size() == 2);
        buf.merge_insertions();
        CHECK_FALSE(check_balanced(buf.to_program(true)).has_value());
    }
}

TEST_CASE("subsume luma rewrite") {
    const Shape m = Shape::rect(5, 5, 25, 25);
    const Color c = premul(1, 0.2, 0.8, 0.4);

    SUBCASE("one draw fires and bakes the luminance") {
        Program p;
        p.commands = {Command::save_layer(dstin_layer()),
                      Command::save_layer(solid(Color{}, BlendMode::SrcOver,
                                                ColorFilter::Luma)),
                      Command::draw(m, solid(c)),
                      Command::restore(),
                      Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassSubsumeLuma, buf);
        REQUIRE(r.firings.size() == 1);
        CHECK(r.firings[0].anchor == 1);
        buf.merge_insertions();
        const Program out = buf.to_program(false);
        REQUIRE(out.commands.size() == 3);
        CHECK(out.commands[0].op == Command::Op::SaveLayer);
        CHECK(out.commands[1].op == Command::Op::Draw);
        CHECK(out.commands[1].paint.fill.solid_color() ==
              apply_filter(ColorFilter::Luma, c));
        CHECK(out.commands[1].paint.filter == ColorFilter::Id);
        CHECK(out.commands[2].op == Command::Op::Restore);
    }

    SUBCASE("two draws block it") {
        Program p;
        p.commands = {Command::save_layer(dstin_layer()),
                      Command::save_layer(solid(Color{}, BlendMode::SrcOver,
                                                ColorFilter::Luma)),
                      Command::draw(m, solid(c)),
                      Command::draw(Shape::rect(0, 0, 9, 9), solid(c)),
                      Command::restore(),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassSubsumeLuma, buf).firings.empty());
        CHECK(buf.to_program(true) == p);
    }

    SUBCASE("a record between the layers blocks it") {
        Program p;
        p.commands = {Command::save_layer(dstin_layer()),
                      Command::clip(Shape::rect(0, 0, 50, 50)),
                      Command::save_layer(solid(Color{}, BlendMode::SrcOver,
                                                ColorFilter::Luma)),
                      Command::draw(m, solid(c)),
                      Command::restore(),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassSubsumeLuma, buf).firings.empty());
    }
}

TEST_CASE("gradient mask rewrite") {
    const Shape s = Shape::rect(10, 10, 50, 50);
    auto opaque_grad = [] {
        return Fill::linear_gradient({0, 0}, {40, 0},
                                     {{0.0, premul(1, 0, 0, 0)}, {1.0, premul(1, 1, 1, 1)}});
    };

    SUBCASE("the four-record pattern fires") {
        Program p;
        p.commands = {Command::draw(s, solid(premul(1, 1, 0, 0))),
                      Command::save_layer(dstin_layer()),
                      Command::draw(s, make_paint(opaque_grad())),
                      Command::restore()};
        RecordBuffer buf(p);
        const PassResult r = transform(kPassGradientMask, buf);
        REQUIRE(r.firings.size() == 1);
        buf.merge_insertions();
        const Program out = buf.to_program(false);
        REQUIRE(out.commands.size() == 1);
        CHECK(out.commands[0].op == Command::Op::Draw);
        CHECK(out.commands[0].shape == s);
    }

    SUBCASE("a non-opaque stop blocks it") {
        auto leaky = Fill::linear_gradient(
            {0, 0}, {40, 0}, {{0.0, premul(0.9, 1, 1, 1)}, {1.0, premul(1, 1, 1, 1)}});
        Program p;
        p.commands = {Command::draw(s, solid(premul(1, 1, 0, 0))),
                      Command::save_layer(dstin_layer()),
                      Command::draw(s, make_paint(leaky)),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassGradientMask, buf).firings.empty());
    }

    SUBCASE("differing shapes block it") {
        Program p;
        p.commands = {Command::draw(s, solid(premul(1, 1, 0, 0))),
                      Command::save_layer(dstin_layer()),
                      Command::draw(Shape::rect(10, 10, 50, 51),
                                    make_paint(opaque_grad())),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassGradientMask, buf).firings.empty());
    }

    SUBCASE("a record between the draw and the mask blocks it") {
        Program p;
        p.commands = {Command::draw(s, solid(premul(1, 1, 0, 0))),
                      Command::clip(Shape::full()),
                      Command::save_layer(dstin_layer()),
                      Command::draw(s, make_paint(opaque_grad())),
                      Command::restore()};
        RecordBuffer buf(p);
        CHECK(transform(kPassGradientMask, buf).firings.empty());
    }
}

TEST_CASE("optimize pipeline") {
    SUBCASE("no layers means no edits and no trace") {
        Program p;
        p.commands = {Command::draw(Shape::rect(0, 0, 5, 5), solid(premul(1, 0, 1, 1))),
                      Command::clip(Shape::rect(0, 0, 9, 9))};
        const OptimizeResult r = optimize(p);
        CHECK(r.program == p);
        CHECK(r.trace.empty());
        CHECK(r.edit_iterations == 0);
    }

    SUBCASE("cascade: luma, then dstin, then srcover across iterations") {
        const Program p = cascade_nest_program(5);
        const OptimizeResult r = optimize(p);
        CHECK(r.edit_iterations >= 2);
        CHECK(r.firings.at(kPassSubsumeLuma) == 1);
        CHECK(r.firings.at(kPassDstInToClip) == 1);
        CHECK(r.firings.at(kPassSrcOverSaveLayer) == 1);
        for (const Command& c : r.program.commands)
            CHECK(c.op != Command::Op::SaveLayer);
        CHECK_FALSE(check_balanced(r.program).has_value());
    }

    SUBCASE("max-iters 1 stops the cascade early") {
        const Program p = cascade_nest_program(5);
        OptimizeConfig cfg;
        cfg.max_iterations = 1;
        const OptimizeResult r = optimize(p, cfg);
        int total = 0;
        for (const auto& [name, n] : r.firings) total += n;
        CHECK(total == 1);  // only the luma rewrite fits in one iteration
    }

    SUBCASE("pass selection restricts the pipeline") {
        const Program p = cascade_nest_program(5);
        OptimizeConfig cfg;
        cfg.passes = {kPassSubsumeLuma};
        const OptimizeResult r = optimize(p, cfg);
        CHECK(r.firings.count(kPassSubsumeLuma) == 1);
        CHECK(r.firings.size() == 1);
    }

    SUBCASE("trace replay reproduces every snapshot") {
        test::Rng rng(85);
        const auto entries = generate_corpus(123, 30, CorpusMix::standard());
        for (const auto& e : entries) {
            const OptimizeResult r = optimize(e.program);
            for (const TraceEntry& te : r.trace.entries) {
                const Program replayed =
                    apply_entry(r.trace.snapshots[te.before_snapshot], te);
                CHECK(replayed == r.trace.snapshots[te.after_snapshot]);
            }
            CHECK_FALSE(check_balanced(r.program).has_value());
        }
        (void)rng;
    }

    SUBCASE("corpus annotations match actual firings") {
        const auto entries = generate_corpus(2024, 120, CorpusMix::standard());
        for (const auto& e : entries) {
            const OptimizeResult r = optimize(e.program);
            CAPTURE(e.name);
            CHECK(r.firings == e.expected_firings);
        }
    }
}

TEST_CASE("cost metrics") {
    CHECK(cost_metrics(Program{}, 100, 100) == CostMetrics{});

    Program layered;
    layered.commands = {Command::save_layer(opaque_layer()),
                        Command::draw(Shape::full(), solid(premul(1, 0, 0, 1))),
                        Command::restore()};
    const CostMetrics before = cost_metrics(layered, 100, 100);
    CHECK(before.savelayer_count == 1);
    CHECK(before.draw_count == 1);
    CHECK(before.est_pixel_ops == 30000.0);  // 2*wh for the layer + wh draw

    const OptimizeResult r = optimize(layered);
    const CostMetrics after = cost_metrics(r.program, 100, 100);
    CHECK(after.savelayer_count == 0);
    CHECK(after.est_pixel_ops == 10000.0);
}

TEST_CASE("metrics do not regress under any pass on the corpus") {
    const auto entries = generate_corpus(31337, 60, CorpusMix::standard());
    for (const auto& e : entries) {
        RecordBuffer buf(e.program);
        for (const char* pass : kPipeline) {
            const CostMetrics before = cost_metrics(buf.to_program(false), 256, 256);
            transform(pass, buf);
            buf.merge_insertions();
            const CostMetrics after = cost_metrics(buf.to_program(false), 256, 256);
            CAPTURE(e.name);
            CAPTURE(pass);
            CHECK(after.est_pixel_ops <= before.est_pixel_ops);
            CHECK(after.savelayer_count <= before.savelayer_count);
            CHECK(after.draw_count <= before.draw_count);
        }
        buf.compact();
    }
}

TEST_CASE("optimizing hostile random programs preserves rendering exactly") {
    // Pattern-shaped fragments in random contexts: nested brackets, masks in
    // masks, mismatched shapes. Anything that fires must render identically.
    test::Rng rng(0xF5);
    int fired = 0;
    for (int iter = 0; iter < 150; ++iter) {
        Program p;
        const int fragments = test::uniform_int(rng, 1, 4);
        for (int f = 0; f < fragments; ++f) {
            switch (test::uniform_int(rng, 0, 4)) {
            case 0: {  // srcover layer, sometimes poisoned
                p.commands.push_back(Command::save_layer(
                    solid(test::uniform_int(rng, 0, 1) ? test::random_opaque(rng)
                                                       : test::random_color(rng))));
                const int draws = test::uniform_int(rng, 1, 3);
                for (int i = 0; i < draws; ++i)
                    p.commands.push_back(Command::draw(
                        test::random_shape(rng),
                        make_paint(test::random_fill(rng),
                                   test::uniform_int(rng, 0, 3) ? BlendMode::SrcOver
                                                                : BlendMode::Multiply)));
                p.commands.push_back(Command::restore());
                break;
            }
            case 1: {  // dstin mask, sometimes non-opaque or trailed
                p.commands.push_back(Command::draw(test::random_rect(rng),
                                                   make_paint(test::random_fill(rng))));
                p.commands.push_back(
                    Command::save_layer(solid(Color{}, BlendMode::DstIn)));
                if (test::uniform_int(rng, 0, 1))
                    p.commands.push_back(Command::clip(test::random_rect(rng)));
                p.commands.push_back(Command::draw(
                    test::random_shape(rng),
                    solid(test::uniform_int(rng, 0, 3) ? test::random_opaque(rng)
                                                       : test::random_color(rng))));
                p.commands.push_back(Command::restore());
                if (test::uniform_int(rng, 0, 2) == 0)
                    p.commands.push_back(Command::draw(test::random_rect(rng),
                                                       make_paint(test::random_fill(rng))));
                break;
            }
            case 2: {  // luma nest with one or two draws
                p.commands.push_back(
                    Command::save_layer(solid(Color{}, BlendMode::DstIn)));
                p.commands.push_back(Command::save_layer(
                    solid(Color{}, BlendMode::SrcOver, ColorFilter::Luma)));
                const int draws = test::uniform_int(rng, 1, 2);
                for (int i = 0; i < draws; ++i)
                    p.commands.push_back(Command::draw(test::random_rect(rng),
                                                       solid(test::random_color(rng))));
                p.commands.push_back(Command::restore());
                p.commands.push_back(Command::restore());
                break;
            }
            case 3: {  // gradient mask, sometimes mismatched
                const Shape s = test::random_shape(rng);
                p.commands.push_back(Command::draw(s, make_paint(test::random_fill(rng))));
                p.commands.push_back(
                    Command::save_layer(solid(Color{}, BlendMode::DstIn)));
                p.commands.push_back(Command::draw(
                    test::uniform_int(rng, 0, 2) ? s : test::random_shape(rng),
                    make_paint(Fill::linear_gradient(
                        {0, 0}, {40, 40},
                        {{0.0, test::random_opaque(rng)}, {1.0, test::random_opaque(rng)}}))));
                p.commands.push_back(Command::restore());
                break;
            }
            default:
                for (const Command& c : test::random_program(rng, 8).commands)
                    p.commands.push_back(c);
                break;
            }
        }
        REQUIRE_FALSE(check_balanced(p).has_value());

        const OptimizeResult r = optimize(p);
        int n = 0;
        for (const auto& [name, count] : r.firings) n += count;
        if (n == 0) continue;
        ++fired;
        const RasterImage a = rasterize(p, 64, 64);
        const RasterImage b = rasterize(r.program, 64, 64);
        const DiffReport d = image_diff_ae(a, b, 0.01);
        CAPTURE(iter);
        CHECK(d.differing_pixels == 0);
        CHECK(d.max_channel_delta <= 1e-6);
    }
    CHECK(fired > 20);  // the generator must actually exercise the passes
}

TEST_CASE("near-miss corpus is untouched by every pass") {
    const auto entries = generate_corpus(404, 80, CorpusMix::near_miss());
    for (const auto& e : entries) {
        const OptimizeResult r = optimize(e.program);
        CAPTURE(e.name);
        CHECK(r.firings.empty());
        CHECK(r.program == e.program);
    }
}
