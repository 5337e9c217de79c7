// optimizer.cpp - Record buffer editing, the optimize driver, cost metrics.

#include "muskia/optimizer.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace muskia {

void RecordBuffer::queue_insert(int index, std::vector<Command> cmds) {
    for (Command& c : cmds) pending_.push_back({index, std::move(c)});
}

void RecordBuffer::merge_insertions() {
    if (pending_.empty()) return;
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const TraceInsertion& a, const TraceInsertion& b) {
                         return a.index < b.index;
                     });
    if (pending_.back().index > size() || pending_.front().index < 0)
        throw std::out_of_range("insertion index outside the record buffer");
    std::vector<Command> merged;
    merged.reserve(records_.size() + pending_.size());
    size_t next = 0;
    const int n = size();
    for (int i = 0; i <= n; ++i) {
        while (next < pending_.size() && pending_[next].index == i)
            merged.push_back(std::move(pending_[next++].command));
        if (i < n) merged.push_back(std::move(records_[i]));
    }
    records_ = std::move(merged);
    pending_.clear();
}

void RecordBuffer::compact() {
    assert(pending_.empty());
    std::erase_if(records_, [](const Command& c) { return c.op == Command::Op::NoOp; });
}

Program RecordBuffer::to_program(bool keep_noops) const {
    Program p;
    p.commands.reserve(records_.size());
    for (const Command& c : records_) {
        if (!keep_noops && c.op == Command::Op::NoOp) continue;
        p.commands.push_back(c);
    }
    return p;
}

bool is_pass_name(std::string_view name) {
    for (const char* p : kPipeline)
        if (name == p) return true;
    return false;
}

OptimizeResult optimize(const Program& p, const OptimizeConfig& cfg) {
    if (auto err = check_balanced(p))
        throw std::invalid_argument("optimize: unbalanced program at index " +
                                    std::to_string(err->index));

    std::vector<std::string> pipeline;
    if (cfg.passes.empty()) {
        pipeline.assign(std::begin(kPipeline), std::end(kPipeline));
    } else {
        // Honor the canonical order regardless of how the subset was written.
        for (const char* name : kPipeline)
            for (const std::string& want : cfg.passes)
                if (want == name) pipeline.push_back(name);
        if (pipeline.size() != cfg.passes.size())
            throw std::invalid_argument("optimize: unknown or duplicate pass name");
    }

    RecordBuffer buf(p);
    OptimizeResult res;

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        bool edited = false;
        for (const std::string& name : pipeline) {
            Program pre;
            if (cfg.collect_trace) pre = buf.to_program(true);

            PassResult pr = transform(name, buf);

            if (!pr.firings.empty()) {
                edited = true;
                res.firings[name] += static_cast<int>(pr.firings.size());
                if (cfg.collect_trace) {
                    RewriteTrace& trace = res.trace;
                    if (trace.snapshots.empty() || !(trace.snapshots.back() == pre))
                        trace.snapshots.push_back(pre);
                    int before_id = static_cast<int>(trace.snapshots.size()) - 1;

                    // Earlier firings' insertions shift later indices once
                    // materialized; rebase each entry onto its own snapshot.
                    std::vector<int> insert_points;
                    auto rebase = [&insert_points](int scan_index) {
                        int shifted = scan_index;
                        for (int p : insert_points)
                            if (p <= scan_index) ++shifted;
                        return shifted;
                    };
                    for (const Firing& f : pr.firings) {
                        TraceEntry e;
                        e.pass = pr.pass;
                        e.fired_at = rebase(f.anchor);
                        for (const TraceEdit& ed : f.edits)
                            e.edits.push_back({rebase(ed.index), ed.before, ed.after});
                        for (const TraceInsertion& ins : f.inserted)
                            e.inserted.push_back({rebase(ins.index), ins.command});
                        e.before_snapshot = before_id;
                        trace.snapshots.push_back(
                            apply_entry(trace.snapshots[before_id], e));
                        e.after_snapshot = static_cast<int>(trace.snapshots.size()) - 1;
                        before_id = e.after_snapshot;
                        trace.entries.push_back(std::move(e));
                        for (const TraceInsertion& ins : f.inserted)
                            insert_points.push_back(ins.index);
                    }
                }
            }

            buf.merge_insertions();
#ifndef NDEBUG
            if (cfg.collect_trace && !res.trace.snapshots.empty() && !pr.firings.empty())
                assert(buf.to_program(true) == res.trace.snapshots.back());
#endif
        }
        buf.compact();
        if (!edited) break;
        ++res.edit_iterations;
    }

    res.program = buf.to_program(false);
    assert(!check_balanced(res.program));
    return res;
}

CostMetrics cost_metrics(const Program& p, int width, int height) {
    CostMetrics m;
    std::vector<Shape> clips{Shape::full()};
    for (const Command& c : p.commands) {
        switch (c.op) {
        case Command::Op::Draw: {
            ++m.draw_count;
            const Shape clipped = shape_intersect(c.shape, clips.back());
            m.est_pixel_ops += bounds_clipped_area(shape_bounds(clipped), width, height);
            break;
        }
        case Command::Op::Clip:
            ++m.clip_count;
            clips.back() = shape_intersect(clips.back(), c.shape);
            break;
        case Command::Op::Save:
            clips.push_back(clips.back());
            break;
        case Command::Op::SaveLayer:
            ++m.savelayer_count;
            clips.push_back(clips.back());
            // Layer allocation plus the final blend back down.
            m.est_pixel_ops += 2.0 * width * height;
            break;
        case Command::Op::Restore:
            if (clips.size() > 1) clips.pop_back();
            break;
        case Command::Op::NoOp:
            break;
        }
    }
    return m;
}

}  // namespace muskia
