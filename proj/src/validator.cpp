// validator.cpp - Independent re-verification of trace steps. The pattern
// checks here are deliberately a second implementation, written against the
// flat command list; they share no code with the optimizer's state machines.

#include "muskia/validator.hpp"

#include <sstream>

#include "muskia/format.hpp"

namespace muskia {

namespace {

struct Check {
    bool ok = true;
    std::string reason;

    static Check fail(std::string why) { return {false, std::move(why)}; }
    static Check pass() { return {}; }
};

bool is_noop(const Command& c) { return c.op == Command::Op::NoOp; }

// Index of the Restore closing the opener at `open`, or -1.
int matching_restore(const std::vector<Command>& cmds, int open) {
    int depth = 0;
    for (int i = open; i < static_cast<int>(cmds.size()); ++i) {
        switch (cmds[i].op) {
        case Command::Op::Save:
        case Command::Op::SaveLayer:
            ++depth;
            break;
        case Command::Op::Restore:
            if (--depth == 0) return i;
            break;
        default:
            break;
        }
    }
    return -1;
}

// Scope of the record at `index`: the body range of the nearest enclosing
// SaveLayer bracket, or the whole program. `end` is one past the last body
// record (the index of the closing Restore, or size()).
void enclosing_scope(const std::vector<Command>& cmds, int index, int* begin, int* end) {
    *begin = 0;
    *end = static_cast<int>(cmds.size());
    struct Open {
        int index;
        bool is_layer;
    };
    std::vector<Open> stack;
    for (int i = 0; i < index; ++i) {
        switch (cmds[i].op) {
        case Command::Op::Save:
            stack.push_back({i, false});
            break;
        case Command::Op::SaveLayer:
            stack.push_back({i, true});
            break;
        case Command::Op::Restore:
            if (!stack.empty()) stack.pop_back();
            break;
        default:
            break;
        }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        if (it->is_layer) {
            *begin = it->index + 1;
            const int r = matching_restore(cmds, it->index);
            *end = r < 0 ? static_cast<int>(cmds.size()) : r;
            return;
        }
    }
}

bool savelayer_opaque_srcover(const Paint& p) {
    return p.blend == BlendMode::SrcOver && p.filter == ColorFilter::Id &&
           fill_opaque(p.fill);
}

// ---- per-pass pattern checks ----------------------------------------------

Check check_srcover(const Program& before, const TraceEntry& e) {
    const auto& cmds = before.commands;
    const int s = e.fired_at;
    if (s < 0 || s >= static_cast<int>(cmds.size()) ||
        cmds[s].op != Command::Op::SaveLayer)
        return Check::fail("fired_at does not point at a saveLayer");
    if (!savelayer_opaque_srcover(cmds[s].paint))
        return Check::fail("saveLayer paint is not {srcOver, id, opaque fill}");
    const int r = matching_restore(cmds, s);
    if (r < 0) return Check::fail("saveLayer has no matching restore");
    for (int i = s + 1; i < r; ++i) {
        if (cmds[i].op == Command::Op::SaveLayer)
            return Check::fail("layer body contains an inner saveLayer");
        if (cmds[i].op == Command::Op::Draw &&
            cmds[i].paint.blend != BlendMode::SrcOver)
            return Check::fail("layer body contains a non-srcOver draw");
    }
    if (e.edits.size() != 1 || !e.inserted.empty())
        return Check::fail("unexpected edit shape for srcover_savelayer");
    if (e.edits[0].index != s || e.edits[0].after.op != Command::Op::Save)
        return Check::fail("edit does not turn the saveLayer into a save");
    return Check::pass();
}

Check check_dstin(const Program& before, const TraceEntry& e) {
    const auto& cmds = before.commands;
    const int m = e.fired_at;
    if (m < 0 || m >= static_cast<int>(cmds.size()) ||
        cmds[m].op != Command::Op::SaveLayer)
        return Check::fail("fired_at does not point at a saveLayer");
    const Paint& p1 = cmds[m].paint;
    if (p1.blend != BlendMode::DstIn || p1.filter != ColorFilter::Id)
        return Check::fail("mask saveLayer paint is not {dstIn, id}");
    const int r = matching_restore(cmds, m);
    if (r < 0) return Check::fail("mask saveLayer has no matching restore");

    // Body: clips, then exactly one solid srcOver draw.
    std::vector<int> clips;
    int draw = -1;
    for (int i = m + 1; i < r; ++i) {
        if (is_noop(cmds[i])) continue;
        if (cmds[i].op == Command::Op::Clip && draw < 0) {
            clips.push_back(i);
        } else if (cmds[i].op == Command::Op::Draw && draw < 0) {
            draw = i;
        } else {
            return Check::fail("mask body is not clips followed by one draw");
        }
    }
    if (draw < 0) return Check::fail("mask body has no draw");
    const Paint& p2 = cmds[draw].paint;
    if (p2.fill.kind() != Fill::Kind::Solid || p2.blend != BlendMode::SrcOver)
        return Check::fail("mask draw is not a solid srcOver draw");
    if (!is_opaque(apply_filter(p1.filter, apply_filter(p2.filter, p2.fill.solid_color()))))
        return Check::fail("mask color is not opaque after the color filters");

    int begin = 0, end = 0;
    enclosing_scope(cmds, m, &begin, &end);
    for (int i = r + 1; i < end; ++i)
        if (!is_noop(cmds[i]))
            return Check::fail("mask restore is not the scope's last record");

    // Prefix: no layers, all draws srcOver, no clip at the scope's own level.
    int depth = 0;
    for (int i = begin; i < m; ++i) {
        switch (cmds[i].op) {
        case Command::Op::SaveLayer:
            return Check::fail("scope prefix contains a saveLayer");
        case Command::Op::Save:
            ++depth;
            break;
        case Command::Op::Restore:
            --depth;
            break;
        case Command::Op::Draw:
            if (cmds[i].paint.blend != BlendMode::SrcOver)
                return Check::fail("scope prefix contains a non-srcOver draw");
            break;
        case Command::Op::Clip:
            if (depth == 0)
                return Check::fail("scope prefix clip persists to the mask draw");
            break;
        case Command::Op::NoOp:
            break;
        }
    }

    // Edits: the three tombstones; insertions: save+clips at scope begin,
    // restore at scope end.
    if (e.edits.size() != 3) return Check::fail("expected exactly three tombstones");
    bool saw_m = false, saw_draw = false, saw_r = false;
    for (const TraceEdit& ed : e.edits) {
        if (ed.after.op != Command::Op::NoOp)
            return Check::fail("dstin edits must be tombstones");
        if (ed.index == m) saw_m = true;
        else if (ed.index == draw) saw_draw = true;
        else if (ed.index == r) saw_r = true;
    }
    if (!saw_m || !saw_draw || !saw_r)
        return Check::fail("tombstones do not cover saveLayer, draw, restore");
    std::vector<TraceInsertion> expect;
    expect.push_back({begin, Command::save()});
    expect.push_back({begin, Command::clip(cmds[draw].shape)});
    for (int idx : clips) expect.push_back({begin, Command::clip(cmds[idx].shape)});
    expect.push_back({end, Command::restore()});
    if (e.inserted.size() != expect.size())
        return Check::fail("unexpected insertion count");
    for (size_t i = 0; i < expect.size(); ++i) {
        if (e.inserted[i].index != expect[i].index ||
            !(e.inserted[i].command == expect[i].command))
            return Check::fail("insertions do not rebuild save/clip/restore");
    }
    return Check::pass();
}

Check check_luma(const Program& before, const TraceEntry& e) {
    const auto& cmds = before.commands;
    const int i = e.fired_at;  // the inner (conversion) saveLayer
    const int n = static_cast<int>(cmds.size());
    if (i < 1 || i + 3 >= n) return Check::fail("pattern does not fit at fired_at");
    if (cmds[i - 1].op != Command::Op::SaveLayer ||
        cmds[i - 1].paint.blend != BlendMode::DstIn)
        return Check::fail("no enclosing dstIn saveLayer");
    if (cmds[i].op != Command::Op::SaveLayer ||
        cmds[i].paint.filter != ColorFilter::Luma ||
        cmds[i].paint.blend != BlendMode::SrcOver)
        return Check::fail("fired_at is not a {luma, srcOver} saveLayer");
    const Command& d = cmds[i + 1];
    if (d.op != Command::Op::Draw || d.paint.fill.kind() != Fill::Kind::Solid ||
        d.paint.blend != BlendMode::SrcOver || d.paint.filter != ColorFilter::Id)
        return Check::fail("conversion body is not one solid {srcOver, id} draw");
    if (cmds[i + 2].op != Command::Op::Restore || cmds[i + 3].op != Command::Op::Restore)
        return Check::fail("conversion layer is not immediately restored twice");

    if (e.edits.size() != 3 || !e.inserted.empty())
        return Check::fail("unexpected edit shape for subsume_luma");
    const Color baked = apply_filter(ColorFilter::Luma, d.paint.fill.solid_color());
    bool saw_sl = false, saw_restore = false, saw_draw = false;
    for (const TraceEdit& ed : e.edits) {
        if (ed.index == i && ed.after.op == Command::Op::NoOp) saw_sl = true;
        else if (ed.index == i + 2 && ed.after.op == Command::Op::NoOp) saw_restore = true;
        else if (ed.index == i + 1) {
            const Command& a = ed.after;
            if (a.op != Command::Op::Draw || !(a.shape == d.shape) ||
                a.paint.fill.kind() != Fill::Kind::Solid ||
                !(a.paint.fill.solid_color() == baked) ||
                a.paint.filter != ColorFilter::Id ||
                a.paint.blend != BlendMode::SrcOver)
                return Check::fail("replacement draw does not bake the luminance");
            saw_draw = true;
        }
    }
    if (!saw_sl || !saw_restore || !saw_draw)
        return Check::fail("edits do not cover saveLayer, restore, draw");
    return Check::pass();
}

Check check_gradient(const Program& before, const TraceEntry& e) {
    const auto& cmds = before.commands;
    const int s = e.fired_at;  // the mask saveLayer
    const int n = static_cast<int>(cmds.size());
    if (s < 1 || s + 2 >= n) return Check::fail("pattern does not fit at fired_at");
    const Command& anchor = cmds[s - 1];
    if (anchor.op != Command::Op::Draw || anchor.paint.blend != BlendMode::SrcOver)
        return Check::fail("no srcOver draw immediately before the mask");
    // The anchor must be the first content of its scope: the DstIn blend
    // erases everything outside the shape, so earlier content would change.
    {
        int begin = 0, end = 0;
        enclosing_scope(cmds, s - 1, &begin, &end);
        for (int i = begin; i < s - 1; ++i)
            if (cmds[i].op == Command::Op::Draw || cmds[i].op == Command::Op::SaveLayer)
                return Check::fail("content precedes the anchor draw in its scope");
    }
    if (cmds[s].op != Command::Op::SaveLayer ||
        cmds[s].paint.blend != BlendMode::DstIn ||
        cmds[s].paint.filter != ColorFilter::Id)
        return Check::fail("mask saveLayer paint is not {dstIn, id}");
    const Command& inner = cmds[s + 1];
    if (inner.op != Command::Op::Draw || !inner.paint.fill.is_gradient() ||
        inner.paint.blend != BlendMode::SrcOver || inner.paint.filter != ColorFilter::Id)
        return Check::fail("mask body is not one gradient {srcOver, id} draw");
    if (!(inner.shape == anchor.shape))
        return Check::fail("mask draw shape differs from the anchor draw");
    for (const GradientStop& st : inner.paint.fill.stops())
        if (!is_opaque(st.color))
            return Check::fail("gradient has a non-opaque stop");
    if (cmds[s + 2].op != Command::Op::Restore)
        return Check::fail("mask is not immediately restored");

    if (e.edits.size() != 3 || !e.inserted.empty())
        return Check::fail("unexpected edit shape for gradient_mask");
    bool saw[3] = {false, false, false};
    for (const TraceEdit& ed : e.edits) {
        if (ed.after.op != Command::Op::NoOp)
            return Check::fail("gradient_mask edits must be tombstones");
        for (int k = 0; k < 3; ++k)
            if (ed.index == s + k) saw[k] = true;
    }
    if (!saw[0] || !saw[1] || !saw[2])
        return Check::fail("tombstones do not cover saveLayer, draw, restore");
    return Check::pass();
}

Check sidecheck(const Program& before, const Program& after, const TraceEntry& e) {
    Check c;
    if (e.pass == "srcover_savelayer") c = check_srcover(before, e);
    else if (e.pass == "dstin_to_clip") c = check_dstin(before, e);
    else if (e.pass == "subsume_luma") c = check_luma(before, e);
    else if (e.pass == "gradient_mask") c = check_gradient(before, e);
    else return Check::fail("unknown pass '" + e.pass + "'");
    if (!c.ok) return c;

    try {
        if (!(apply_entry(before, e) == after))
            return Check::fail("replaying the edits does not reproduce the after snapshot");
    } catch (const std::exception& ex) {
        return Check::fail(std::string("replay failed: ") + ex.what());
    }
    return Check::pass();
}

}  // namespace

const char* overall_name(Verdict::Overall o) {
    switch (o) {
    case Verdict::Overall::Validated: return "validated";
    case Verdict::Overall::Refuted: return "refuted";
    case Verdict::Overall::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict validate_trace(const RewriteTrace& trace, const ValidatorConfig& cfg) {
    Verdict v;
    for (size_t k = 0; k < trace.entries.size(); ++k) {
        const TraceEntry& e = trace.entries[k];
        const Program& before = trace.snapshots[e.before_snapshot];
        const Program& after = trace.snapshots[e.after_snapshot];

        StepVerdict sv;
        sv.step = static_cast<int>(k);
        sv.pass = e.pass;

        const Check sc = sidecheck(before, after, e);
        sv.sidecheck_ok = sc.ok;
        sv.sidecheck_reason = sc.reason;

        const RasterImage img_before = rasterize(before, cfg.resolution, cfg.resolution);
        const RasterImage img_after = rasterize(after, cfg.resolution, cfg.resolution);
        sv.differential = image_diff_ae(img_before, img_after, cfg.fuzz);
        sv.differential_ok = sv.differential.differing_pixels == 0;

        EquivSampling sampling;
        sampling.random_points = cfg.samples;
        sampling.seed = cfg.seed;
        const EquivResult eq =
            layer_equiv_sampled(run(before), run(after), cfg.tol, sampling);
        sv.symbolic_ok = eq.equivalent;
        sv.symbolic_worst = eq.worst;
        sv.symbolic_delta = eq.max_delta;

        v.steps.push_back(std::move(sv));
    }

    for (const StepVerdict& sv : v.steps) {
        if (!sv.differential_ok || !sv.symbolic_ok) {
            v.overall = Verdict::Overall::Refuted;
            v.failed_step = sv.step;
            std::ostringstream os;
            if (!sv.differential_ok) {
                os << "images differ: " << sv.differential.differing_pixels
                   << " pixels beyond fuzz, max delta " << sv.differential.max_channel_delta
                   << " at (" << sv.differential.worst_x << ", " << sv.differential.worst_y
                   << ")";
            } else {
                os << "denotations differ by " << sv.symbolic_delta << " at ("
                   << sv.symbolic_worst.x << ", " << sv.symbolic_worst.y << ")";
            }
            v.reason = os.str();
            return v;
        }
    }
    for (const StepVerdict& sv : v.steps) {
        if (!sv.sidecheck_ok) {
            v.overall = Verdict::Overall::Inconclusive;
            v.failed_step = sv.step;
            v.reason = "sidecheck failed: " + sv.sidecheck_reason;
            return v;
        }
    }
    v.overall = Verdict::Overall::Validated;
    return v;
}

Verdict validate_trace_json(const nlohmann::json& doc, const ValidatorConfig& cfg) {
    RewriteTrace trace;
    try {
        trace = trace_from_json(doc);
    } catch (const std::exception& ex) {
        Verdict v;
        v.overall = Verdict::Overall::Inconclusive;
        v.failed_step = -1;
        v.reason = std::string("cannot decode trace: ") + ex.what();
        return v;
    }
    return validate_trace(trace, cfg);
}

nlohmann::json verdict_to_json(const Verdict& v) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["overall"] = overall_name(v.overall);
    if (v.overall != Verdict::Overall::Validated) {
        j["failed_step"] = v.failed_step;
        j["reason"] = v.reason;
    }
    nlohmann::json steps = nlohmann::json::array();
    for (const StepVerdict& sv : v.steps) {
        nlohmann::json js;
        js["step"] = sv.step;
        js["pass"] = sv.pass;
        js["sidecheck"] = sv.sidecheck_ok ? "pass" : "fail";
        if (!sv.sidecheck_ok) js["sidecheck_reason"] = sv.sidecheck_reason;
        js["differential"] = {
            {"differing_pixels", sv.differential.differing_pixels},
            {"max_channel_delta", sv.differential.max_channel_delta},
            {"total_pixels", sv.differential.total_pixels},
        };
        js["symbolic"] = sv.symbolic_ok ? "pass" : "fail";
        if (!sv.symbolic_ok) {
            js["symbolic_point"] = {sv.symbolic_worst.x, sv.symbolic_worst.y};
            js["symbolic_delta"] = sv.symbolic_delta;
        }
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    return j;
}

}  // namespace muskia
