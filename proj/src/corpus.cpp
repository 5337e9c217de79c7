// corpus.cpp - Program builders for tests and benchmarks. Every entry's
// expected firing counts are exact by construction, so mismatches point at
// the optimizer (or at a builder accidentally containing a pattern).

#include "muskia/corpus.hpp"

#include <cassert>
#include <random>
#include <stdexcept>

#include "muskia/optimizer.hpp"

namespace muskia {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Color premul(double a, double r, double g, double b) {
    Color c;
    c.a = a;
    c.r = a * r;
    c.g = a * g;
    c.b = a * b;
    return c;
}

Color random_color(Rng& rng) {
    return premul(uniform(rng, 0.2, 1.0), uniform(rng, 0.0, 1.0),
                  uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
}

Color random_opaque(Rng& rng) {
    return premul(1.0, uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0),
                  uniform(rng, 0.0, 1.0));
}

// Mid-range alpha and channels: luminance stays clearly below the opacity
// threshold.
Color random_midtone(Rng& rng) {
    return premul(uniform(rng, 0.3, 0.9), uniform(rng, 0.0, 0.9),
                  uniform(rng, 0.0, 0.9), uniform(rng, 0.0, 0.9));
}

Shape random_rect(Rng& rng) {
    const double l = uniform(rng, 0.0, 200.0);
    const double t = uniform(rng, 0.0, 200.0);
    return Shape::rect(l, t, l + uniform(rng, 8.0, 56.0), t + uniform(rng, 8.0, 56.0));
}

Shape random_shape(Rng& rng) {
    if (uniform_int(rng, 0, 2) == 0) {
        return Shape::circle({uniform(rng, 30.0, 226.0), uniform(rng, 30.0, 226.0)},
                             uniform(rng, 6.0, 30.0));
    }
    return random_rect(rng);
}

std::vector<GradientStop> random_opaque_stops(Rng& rng) {
    const int n = uniform_int(rng, 2, 4);
    std::vector<GradientStop> stops;
    stops.reserve(n);
    for (int i = 0; i < n; ++i) {
        GradientStop s;
        s.offset = i == 0 ? 0.0 : (i == n - 1 ? 1.0 : uniform(rng, 0.3, 0.7));
        s.color = random_opaque(rng);
        stops.push_back(s);
    }
    if (n == 4 && stops[1].offset > stops[2].offset)
        std::swap(stops[1].offset, stops[2].offset);
    return stops;
}

Fill random_gradient(Rng& rng, bool all_opaque) {
    auto stops = random_opaque_stops(rng);
    if (!all_opaque) {
        // Re-premultiply one stop at alpha 0.9 (its channels are straight
        // values since the stop was opaque).
        GradientStop& s = stops[uniform_int(rng, 0, (int)stops.size() - 1)];
        s.color = premul(0.9, s.color.r, s.color.g, s.color.b);
    }
    if (uniform_int(rng, 0, 1) == 0) {
        const Point p0{uniform(rng, 0.0, 100.0), uniform(rng, 0.0, 100.0)};
        return Fill::linear_gradient(
            p0, {p0.x + uniform(rng, 20.0, 120.0), p0.y + uniform(rng, 20.0, 120.0)},
            std::move(stops));
    }
    return Fill::radial_gradient({uniform(rng, 60.0, 200.0), uniform(rng, 60.0, 200.0)},
                                 uniform(rng, 20.0, 90.0), std::move(stops));
}

Fill random_fill(Rng& rng) {
    const int pick = uniform_int(rng, 0, 3);
    if (pick == 0) return random_gradient(rng, true);
    return Fill::solid(random_color(rng));
}

Command srcover_draw(Rng& rng) {
    return Command::draw(random_shape(rng), make_paint(random_fill(rng)));
}

void append_srcover_draws(Rng& rng, Program& p, int lo, int hi) {
    const int n = uniform_int(rng, lo, hi);
    for (int i = 0; i < n; ++i) p.commands.push_back(srcover_draw(rng));
}

// ---- family builders -------------------------------------------------------

Program build_srcover_layer(Rng& rng, std::map<std::string, int>& expect) {
    Program p;
    append_srcover_draws(rng, p, 0, 2);
    Fill fill = uniform_int(rng, 0, 3) == 0 ? random_gradient(rng, true)
                                            : Fill::solid(random_opaque(rng));
    p.commands.push_back(Command::save_layer(make_paint(std::move(fill))));
    append_srcover_draws(rng, p, 1, 3);
    if (uniform_int(rng, 0, 1) == 0) {
        p.commands.push_back(Command::save());
        p.commands.push_back(Command::clip(random_rect(rng)));
        p.commands.push_back(srcover_draw(rng));
        p.commands.push_back(Command::restore());
    }
    if (uniform_int(rng, 0, 2) == 0)
        p.commands.push_back(Command::clip(random_rect(rng)));
    p.commands.push_back(Command::restore());
    append_srcover_draws(rng, p, 0, 1);
    expect[kPassSrcOverSaveLayer] = 1;
    return p;
}

Program build_dstin_clip(Rng& rng, std::map<std::string, int>& expect) {
    Program p;
    const bool wrapped = uniform_int(rng, 0, 1) == 0;
    if (wrapped)
        p.commands.push_back(Command::save_layer(
            make_paint(Fill::solid(random_color(rng)), BlendMode::Multiply)));
    append_srcover_draws(rng, p, 1, 3);
    if (uniform_int(rng, 0, 1) == 0) {
        // A bracketed clip in the prefix is fine; it does not persist.
        p.commands.push_back(Command::save());
        p.commands.push_back(Command::clip(random_rect(rng)));
        p.commands.push_back(srcover_draw(rng));
        p.commands.push_back(Command::restore());
    }
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    const int clips = uniform_int(rng, 0, 2);
    for (int i = 0; i < clips; ++i)
        p.commands.push_back(Command::clip(random_rect(rng)));
    p.commands.push_back(
        Command::draw(random_shape(rng), make_paint(Fill::solid(random_opaque(rng)))));
    p.commands.push_back(Command::restore());
    if (wrapped) p.commands.push_back(Command::restore());
    expect[kPassDstInToClip] = 1;
    return p;
}

Program build_subsume_luma(Rng& rng, std::map<std::string, int>& expect) {
    Program p;
    append_srcover_draws(rng, p, 1, 2);
    const bool cascade = uniform_int(rng, 0, 1) == 0;
    const Color mask_color = cascade ? premul(1.0, 1.0, 1.0, 1.0) : random_midtone(rng);
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    p.commands.push_back(Command::save_layer(make_paint(
        Fill::solid(random_color(rng)), BlendMode::SrcOver, ColorFilter::Luma)));
    p.commands.push_back(
        Command::draw(random_shape(rng), make_paint(Fill::solid(mask_color))));
    p.commands.push_back(Command::restore());
    p.commands.push_back(Command::restore());
    expect[kPassSubsumeLuma] = 1;
    // Once the luminance is baked in, the mask layer itself is removable
    // exactly when the baked color is opaque.
    if (is_opaque(apply_filter(ColorFilter::Luma, mask_color)))
        expect[kPassDstInToClip] = 1;
    return p;
}

Program build_gradient_mask(Rng& rng, std::map<std::string, int>& expect) {
    // The anchor draw carries the scope's first content; the DstIn mask wipes
    // everything outside its shape, so nothing may be drawn before it. The
    // captured pages show this pattern either at the top of a program or at
    // the top of a layer body.
    Program p;
    const bool wrapped = uniform_int(rng, 0, 1) == 0;
    if (wrapped)
        p.commands.push_back(Command::save_layer(
            make_paint(Fill::solid(random_color(rng)), BlendMode::Multiply)));
    if (uniform_int(rng, 0, 2) == 0)
        p.commands.push_back(Command::clip(random_rect(rng)));
    const Shape s = random_shape(rng);
    p.commands.push_back(Command::draw(s, make_paint(random_fill(rng))));
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    p.commands.push_back(Command::draw(s, make_paint(random_gradient(rng, true))));
    p.commands.push_back(Command::restore());
    append_srcover_draws(rng, p, 0, 1);
    if (wrapped) p.commands.push_back(Command::restore());
    expect[kPassGradientMask] = 1;
    return p;
}

Program build_near_miss_srcover(Rng& rng, std::map<std::string, int>&) {
    Program p;
    append_srcover_draws(rng, p, 0, 1);
    const int variant = uniform_int(rng, 0, 2);
    Paint layer_paint = make_paint(Fill::solid(random_opaque(rng)));
    if (variant == 1) layer_paint.fill = Fill::solid(random_midtone(rng));
    if (variant == 2) layer_paint.filter = ColorFilter::Luma;
    p.commands.push_back(Command::save_layer(layer_paint));
    append_srcover_draws(rng, p, 0, 2);
    if (variant == 0) {
        p.commands.push_back(Command::draw(
            random_shape(rng), make_paint(Fill::solid(random_opaque(rng)),
                                          BlendMode::Multiply)));
    }
    append_srcover_draws(rng, p, 0, 1);
    p.commands.push_back(Command::restore());
    return p;
}

Program build_near_miss_dstin(Rng& rng, std::map<std::string, int>&) {
    Program p;
    const int variant = uniform_int(rng, 0, 3);
    append_srcover_draws(rng, p, 1, 2);
    if (variant == 1) {
        // A layer bracket inside the prefix.
        p.commands.push_back(Command::save_layer(
            make_paint(Fill::solid(random_color(rng)), BlendMode::Multiply)));
        p.commands.push_back(srcover_draw(rng));
        p.commands.push_back(Command::restore());
    }
    if (variant == 3) {
        // A clip that persists to the mask draw.
        p.commands.push_back(Command::clip(random_rect(rng)));
        p.commands.push_back(srcover_draw(rng));
    }
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    Color mask = variant == 0 ? random_midtone(rng) : random_opaque(rng);
    p.commands.push_back(
        Command::draw(random_shape(rng), make_paint(Fill::solid(mask))));
    p.commands.push_back(Command::restore());
    if (variant == 2) p.commands.push_back(srcover_draw(rng));  // not the suffix
    return p;
}

Program build_near_miss_luma(Rng& rng, std::map<std::string, int>&) {
    Program p;
    append_srcover_draws(rng, p, 1, 2);
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    p.commands.push_back(Command::save_layer(make_paint(
        Fill::solid(random_color(rng)), BlendMode::SrcOver, ColorFilter::Luma)));
    // Two draws: luminance cannot be pre-computed per draw.
    p.commands.push_back(
        Command::draw(random_rect(rng), make_paint(Fill::solid(random_color(rng)))));
    p.commands.push_back(
        Command::draw(random_rect(rng), make_paint(Fill::solid(random_opaque(rng)))));
    p.commands.push_back(Command::restore());
    p.commands.push_back(Command::restore());
    return p;
}

Program build_near_miss_gradient(Rng& rng, std::map<std::string, int>&) {
    Program p;
    const bool shape_mismatch = uniform_int(rng, 0, 1) == 0;
    const Shape s = random_shape(rng);
    p.commands.push_back(Command::draw(s, make_paint(random_fill(rng))));
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    const Shape inner = shape_mismatch ? random_shape(rng) : s;
    p.commands.push_back(
        Command::draw(inner, make_paint(random_gradient(rng, shape_mismatch))));
    p.commands.push_back(Command::restore());
    return p;
}

Program build_unstructured(Rng& rng, std::map<std::string, int>&) {
    Program p;
    const int target = uniform_int(rng, 5, 40);
    int open = 0;
    while (static_cast<int>(p.commands.size()) < target) {
        switch (uniform_int(rng, 0, 9)) {
        case 0:
        case 1:
        case 2:
        case 3:
        case 4: {
            const BlendMode blends[4] = {BlendMode::SrcOver, BlendMode::DstIn,
                                         BlendMode::Multiply, BlendMode::SrcOut};
            Paint paint = make_paint(random_fill(rng), blends[uniform_int(rng, 0, 3)],
                                     uniform_int(rng, 0, 4) == 0 ? ColorFilter::Luma
                                                                 : ColorFilter::Id);
            p.commands.push_back(Command::draw(random_shape(rng), paint));
            break;
        }
        case 5:
            p.commands.push_back(Command::clip(random_rect(rng)));
            break;
        case 6:
            p.commands.push_back(Command::save());
            ++open;
            break;
        case 7: {
            // Layers stay unrewritable: never SrcOver/Id/opaque, never DstIn.
            Paint paint = make_paint(random_fill(rng),
                                     uniform_int(rng, 0, 1) == 0 ? BlendMode::Multiply
                                                                 : BlendMode::SrcOut);
            p.commands.push_back(Command::save_layer(paint));
            ++open;
            break;
        }
        default:
            if (open > 0) {
                p.commands.push_back(Command::restore());
                --open;
            } else {
                p.commands.push_back(srcover_draw(rng));
            }
            break;
        }
    }
    while (open-- > 0) p.commands.push_back(Command::restore());
    return p;
}

Program build_cascade_nest(Rng& rng, std::map<std::string, int>& expect) {
    Program p;
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(random_opaque(rng)))));
    append_srcover_draws(rng, p, 1, 2);
    p.commands.push_back(
        Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)));
    p.commands.push_back(Command::save_layer(make_paint(
        Fill::solid(random_color(rng)), BlendMode::SrcOver, ColorFilter::Luma)));
    p.commands.push_back(Command::draw(random_shape(rng),
                                       make_paint(Fill::solid(premul(1, 1, 1, 1)))));
    p.commands.push_back(Command::restore());
    p.commands.push_back(Command::restore());
    p.commands.push_back(Command::restore());
    expect[kPassSubsumeLuma] = 1;
    expect[kPassDstInToClip] = 1;
    expect[kPassSrcOverSaveLayer] = 1;
    return p;
}

Program build_family(CorpusFamily f, Rng& rng, std::map<std::string, int>& expect) {
    switch (f) {
    case CorpusFamily::SrcOverLayer: return build_srcover_layer(rng, expect);
    case CorpusFamily::DstInClip: return build_dstin_clip(rng, expect);
    case CorpusFamily::SubsumeLuma: return build_subsume_luma(rng, expect);
    case CorpusFamily::GradientMask: return build_gradient_mask(rng, expect);
    case CorpusFamily::NearMissSrcOver: return build_near_miss_srcover(rng, expect);
    case CorpusFamily::NearMissDstIn: return build_near_miss_dstin(rng, expect);
    case CorpusFamily::NearMissLuma: return build_near_miss_luma(rng, expect);
    case CorpusFamily::NearMissGradient: return build_near_miss_gradient(rng, expect);
    case CorpusFamily::Unstructured: return build_unstructured(rng, expect);
    case CorpusFamily::CascadeNest: return build_cascade_nest(rng, expect);
    }
    throw std::invalid_argument("unknown corpus family");
}

}  // namespace

const char* corpus_family_name(CorpusFamily f) {
    switch (f) {
    case CorpusFamily::SrcOverLayer: return "srcover_layer";
    case CorpusFamily::DstInClip: return "dstin_clip";
    case CorpusFamily::SubsumeLuma: return "subsume_luma";
    case CorpusFamily::GradientMask: return "gradient_mask";
    case CorpusFamily::NearMissSrcOver: return "near_miss_srcover";
    case CorpusFamily::NearMissDstIn: return "near_miss_dstin";
    case CorpusFamily::NearMissLuma: return "near_miss_luma";
    case CorpusFamily::NearMissGradient: return "near_miss_gradient";
    case CorpusFamily::Unstructured: return "unstructured";
    case CorpusFamily::CascadeNest: return "cascade_nest";
    }
    return "?";
}

CorpusMix CorpusMix::standard() {
    CorpusMix m;
    m.weights = {
        {CorpusFamily::SrcOverLayer, 2.0},   {CorpusFamily::DstInClip, 2.0},
        {CorpusFamily::SubsumeLuma, 2.0},    {CorpusFamily::GradientMask, 2.0},
        {CorpusFamily::NearMissSrcOver, 1.0},{CorpusFamily::NearMissDstIn, 1.0},
        {CorpusFamily::NearMissLuma, 1.0},   {CorpusFamily::NearMissGradient, 1.0},
        {CorpusFamily::Unstructured, 2.0},   {CorpusFamily::CascadeNest, 0.5},
    };
    return m;
}

CorpusMix CorpusMix::only(CorpusFamily f) {
    CorpusMix m;
    m.weights = {{f, 1.0}};
    return m;
}

CorpusMix CorpusMix::rewritable() {
    CorpusMix m;
    m.weights = {
        {CorpusFamily::SrcOverLayer, 1.0},
        {CorpusFamily::DstInClip, 1.0},
        {CorpusFamily::SubsumeLuma, 1.0},
        {CorpusFamily::GradientMask, 1.0},
    };
    return m;
}

CorpusMix CorpusMix::near_miss() {
    CorpusMix m;
    m.weights = {
        {CorpusFamily::NearMissSrcOver, 1.0},
        {CorpusFamily::NearMissDstIn, 1.0},
        {CorpusFamily::NearMissLuma, 1.0},
        {CorpusFamily::NearMissGradient, 1.0},
    };
    return m;
}

std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, int count,
                                         const CorpusMix& mix) {
    if (mix.weights.empty())
        throw std::invalid_argument("corpus mix must not be empty");
    double total = 0.0;
    for (const auto& [family, w] : mix.weights) {
        if (w < 0.0) throw std::invalid_argument("corpus mix weight must be >= 0");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("corpus mix has zero total weight");

    std::vector<CorpusEntry> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng rng(splitmix64(seed ^ (0x517cc1b727220a95ull * (i + 1))));
        double pick = uniform(rng, 0.0, total);
        CorpusFamily family = mix.weights.back().first;
        for (const auto& [f, w] : mix.weights) {
            if (pick < w) {
                family = f;
                break;
            }
            pick -= w;
        }
        CorpusEntry entry;
        entry.family = family;
        entry.name = std::string(corpus_family_name(family)) + "_" + std::to_string(i);
        entry.program = build_family(family, rng, entry.expected_firings);
        assert(!check_balanced(entry.program));
        out.push_back(std::move(entry));
    }
    return out;
}

Program cascade_nest_program(std::uint64_t seed) {
    Rng rng(splitmix64(seed));
    std::map<std::string, int> expect;
    return build_cascade_nest(rng, expect);
}

Program large_program(std::uint64_t seed, int records) {
    Rng rng(splitmix64(seed ^ 0xabcdef1234567890ull));
    Program p;
    p.commands.reserve(records);
    int open = 0;
    while (static_cast<int>(p.commands.size()) < records - open - 1) {
        const int roll = uniform_int(rng, 0, 19);
        if (roll < 12) {
            p.commands.push_back(srcover_draw(rng));
        } else if (roll < 14) {
            p.commands.push_back(Command::clip(random_rect(rng)));
        } else if (roll < 16) {
            p.commands.push_back(Command::save());
            ++open;
        } else if (roll == 16 && open < 6) {
            Paint paint = make_paint(random_fill(rng),
                                     uniform_int(rng, 0, 1) == 0 ? BlendMode::SrcOver
                                                                 : BlendMode::Multiply);
            p.commands.push_back(Command::save_layer(paint));
            ++open;
        } else if (open > 0) {
            p.commands.push_back(Command::restore());
            --open;
        } else {
            p.commands.push_back(srcover_draw(rng));
        }
    }
    while (open-- > 0) p.commands.push_back(Command::restore());
    while (static_cast<int>(p.commands.size()) < records)
        p.commands.push_back(srcover_draw(rng));
    return p;
}

NearMissForced near_miss_with_forced(const std::string& pass, std::uint64_t) {
    NearMissForced out;
    out.pass = pass;

    if (pass == kPassSrcOverSaveLayer) {
        // Isolation matters: a Multiply draw sees transparency inside the
        // layer but the existing content without it.
        const Shape r = Shape::rect(40, 40, 200, 200);
        const Paint red = make_paint(Fill::solid(premul(1, 1, 0, 0)));
        const Paint blue_mul =
            make_paint(Fill::solid(premul(1, 0, 0, 1)), BlendMode::Multiply);
        out.original.commands = {
            Command::draw(r, red),
            Command::save_layer(make_paint(Fill::solid(premul(1, 0, 0, 0)))),
            Command::draw(r, blue_mul),
            Command::restore(),
        };
        out.forced = out.original;
        out.forced.commands[1] = Command::save();
        return out;
    }

    if (pass == kPassDstInToClip) {
        // A half-transparent mask color attenuates; a clip keeps or drops.
        const Shape content = Shape::rect(20, 20, 220, 220);
        const Shape mask = Shape::rect(60, 60, 180, 180);
        out.original.commands = {
            Command::draw(content, make_paint(Fill::solid(premul(1, 1, 0, 0)))),
            Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)),
            Command::draw(mask, make_paint(Fill::solid(premul(0.5, 1, 1, 1)))),
            Command::restore(),
        };
        out.forced.commands = {
            Command::save(),
            Command::clip(mask),
            Command::draw(content, make_paint(Fill::solid(premul(1, 1, 0, 0)))),
            Command::restore(),
        };
        return out;
    }

    if (pass == kPassSubsumeLuma) {
        // Two overlapping draws: luminance of a blend is not the blend of
        // luminances unless the top color's alpha equals its luminance.
        const Shape a = Shape::rect(40, 40, 160, 160);
        const Shape b = Shape::rect(100, 100, 220, 220);
        const Color c1 = premul(0.5, 1, 0, 0);   // half red
        const Color c2 = premul(1.0, 0, 0, 1);   // opaque blue: alpha 1, luma 0.0722
        const Shape content = Shape::rect(0, 0, 256, 256);
        const Paint dstin = make_paint(Fill::solid(Color{}), BlendMode::DstIn);
        out.original.commands = {
            Command::draw(content, make_paint(Fill::solid(premul(1, 0.8, 0.8, 0.8)))),
            Command::save_layer(dstin),
            Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::SrcOver,
                                           ColorFilter::Luma)),
            Command::draw(a, make_paint(Fill::solid(c1))),
            Command::draw(b, make_paint(Fill::solid(c2))),
            Command::restore(),
            Command::restore(),
        };
        out.forced.commands = {
            out.original.commands[0],
            Command::save_layer(dstin),
            Command::draw(a, make_paint(Fill::solid(
                                 apply_filter(ColorFilter::Luma, c1)))),
            Command::draw(b, make_paint(Fill::solid(
                                 apply_filter(ColorFilter::Luma, c2)))),
            Command::restore(),
        };
        return out;
    }

    if (pass == kPassGradientMask) {
        // One stop below full opacity: the mask genuinely attenuates.
        const Shape s = Shape::rect(30, 30, 226, 226);
        std::vector<GradientStop> stops = {
            {0.0, premul(0.9, 1, 1, 1)},
            {1.0, premul(1.0, 1, 1, 1)},
        };
        Fill grad = Fill::linear_gradient({30, 30}, {226, 226}, std::move(stops));
        out.original.commands = {
            Command::draw(s, make_paint(Fill::solid(premul(1, 0.1, 0.4, 0.9)))),
            Command::save_layer(make_paint(Fill::solid(Color{}), BlendMode::DstIn)),
            Command::draw(s, make_paint(std::move(grad))),
            Command::restore(),
        };
        out.forced.commands = {out.original.commands[0]};
        return out;
    }

    throw std::invalid_argument("unknown pass: " + pass);
}

}  // namespace muskia
