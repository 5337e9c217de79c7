// trace.hpp - Optimization traces: one entry per rewrite firing, with
// positional program snapshots before and after each step.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "muskia/command.hpp"

namespace muskia {

struct TraceEdit {
    int index = 0;
    Command before;
    Command after;
};

struct TraceInsertion {
    int index = 0;  // new command goes before the record at this index
    Command command;
};

struct TraceEntry {
    std::string pass;
    int fired_at = 0;  // the rewritten SaveLayer, or the pattern anchor
    std::vector<TraceEdit> edits;
    std::vector<TraceInsertion> inserted;
    int before_snapshot = -1;
    int after_snapshot = -1;
};

// Snapshots keep NoOp tombstones so the indices in edits stay positional;
// replaying an entry's edits and insertions onto its before snapshot must
// reproduce its after snapshot exactly.
struct RewriteTrace {
    std::vector<Program> snapshots;
    std::vector<TraceEntry> entries;

    bool empty() const { return entries.empty(); }
};

// Replays one entry: in-place edits first (each must match the recorded
// before command), then insertions merged by index. Throws
// std::invalid_argument when the entry does not fit the program.
Program apply_entry(const Program& before, const TraceEntry& entry);

nlohmann::json trace_to_json(const RewriteTrace& trace);
RewriteTrace trace_from_json(const nlohmann::json& doc);  // FormatError on skew
RewriteTrace trace_from_text(std::string_view text);
RewriteTrace trace_from_file(const std::string& path);
void trace_to_file(const RewriteTrace& trace, const std::string& path);

}  // namespace muskia
