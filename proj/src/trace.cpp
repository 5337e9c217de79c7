// trace.cpp - Trace replay and JSON round-tripping.

#include "muskia/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "muskia/format.hpp"
#include "muskia/raster.hpp"

namespace muskia {

using nlohmann::json;

Program apply_entry(const Program& before, const TraceEntry& entry) {
    Program out = before;
    const int n = static_cast<int>(out.commands.size());
    for (const TraceEdit& e : entry.edits) {
        if (e.index < 0 || e.index >= n)
            throw std::invalid_argument("trace edit index out of range");
        if (!(out.commands[e.index] == e.before))
            throw std::invalid_argument("trace edit does not match the program");
        out.commands[e.index] = e.after;
    }
    // Stable merge: insertions land before the record at their index, in
    // queue order for equal indices.
    std::vector<TraceInsertion> ins = entry.inserted;
    std::stable_sort(ins.begin(), ins.end(),
                     [](const TraceInsertion& a, const TraceInsertion& b) {
                         return a.index < b.index;
                     });
    Program merged;
    merged.commands.reserve(out.commands.size() + ins.size());
    size_t next = 0;
    for (int i = 0; i <= n; ++i) {
        while (next < ins.size() && ins[next].index == i) {
            merged.commands.push_back(ins[next].command);
            ++next;
        }
        if (i < n) merged.commands.push_back(out.commands[i]);
    }
    if (next != ins.size())
        throw std::invalid_argument("trace insertion index out of range");
    return merged;
}

json trace_to_json(const RewriteTrace& trace) {
    json doc;
    doc["version"] = 1;
    json snaps = json::array();
    for (const Program& p : trace.snapshots)
        snaps.push_back(save_program_with_noops(p));
    doc["snapshots"] = std::move(snaps);
    json entries = json::array();
    for (const TraceEntry& e : trace.entries) {
        json je;
        je["pass"] = e.pass;
        je["fired_at"] = e.fired_at;
        json edits = json::array();
        for (const TraceEdit& ed : e.edits) {
            json jd;
            jd["index"] = ed.index;
            jd["before"] = command_to_json(ed.before);
            jd["after"] = command_to_json(ed.after);
            edits.push_back(std::move(jd));
        }
        je["edits"] = std::move(edits);
        json inserted = json::array();
        for (const TraceInsertion& ins : e.inserted) {
            json ji;
            ji["index"] = ins.index;
            ji["command"] = command_to_json(ins.command);
            inserted.push_back(std::move(ji));
        }
        je["inserted"] = std::move(inserted);
        je["before_snapshot"] = e.before_snapshot;
        je["after_snapshot"] = e.after_snapshot;
        entries.push_back(std::move(je));
    }
    doc["entries"] = std::move(entries);
    return doc;
}

namespace {

[[noreturn]] void skew(const std::string& where, const std::string& reason) {
    throw FormatError(FormatError::Kind::Schema, where, reason);
}

int get_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) skew(where, "expected an integer");
    return j.get<int>();
}

}  // namespace

RewriteTrace trace_from_json(const json& doc) {
    if (!doc.is_object()) skew("", "expected a top-level object");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != 1)
        skew("/version", "unsupported trace version (expected 1)");

    RewriteTrace trace;
    if (!doc.contains("snapshots") || !doc["snapshots"].is_array())
        skew("/snapshots", "expected an array");
    const json& snaps = doc["snapshots"];
    for (size_t i = 0; i < snaps.size(); ++i) trace.snapshots.push_back(load_program(snaps[i]));

    if (!doc.contains("entries") || !doc["entries"].is_array())
        skew("/entries", "expected an array");
    const json& entries = doc["entries"];
    for (size_t i = 0; i < entries.size(); ++i) {
        const std::string where = "/entries/" + std::to_string(i);
        const json& je = entries[i];
        if (!je.is_object()) skew(where, "expected an object");
        TraceEntry e;
        if (!je.contains("pass") || !je["pass"].is_string())
            skew(where + "/pass", "expected a string");
        e.pass = je["pass"].get<std::string>();
        e.fired_at = get_int(je.value("fired_at", json(0)), where + "/fired_at");
        if (je.contains("edits")) {
            if (!je["edits"].is_array()) skew(where + "/edits", "expected an array");
            for (size_t k = 0; k < je["edits"].size(); ++k) {
                const std::string ew = where + "/edits/" + std::to_string(k);
                const json& jd = je["edits"][k];
                TraceEdit ed;
                ed.index = get_int(jd.value("index", json()), ew + "/index");
                if (!jd.contains("before") || !jd.contains("after"))
                    skew(ew, "edit needs before and after commands");
                ed.before = command_from_json(jd["before"], ew + "/before");
                ed.after = command_from_json(jd["after"], ew + "/after");
                e.edits.push_back(std::move(ed));
            }
        }
        if (je.contains("inserted")) {
            if (!je["inserted"].is_array()) skew(where + "/inserted", "expected an array");
            for (size_t k = 0; k < je["inserted"].size(); ++k) {
                const std::string iw = where + "/inserted/" + std::to_string(k);
                const json& ji = je["inserted"][k];
                TraceInsertion ins;
                ins.index = get_int(ji.value("index", json()), iw + "/index");
                if (!ji.contains("command")) skew(iw, "insertion needs a command");
                ins.command = command_from_json(ji["command"], iw + "/command");
                e.inserted.push_back(std::move(ins));
            }
        }
        e.before_snapshot = get_int(je.value("before_snapshot", json(-1)),
                                    where + "/before_snapshot");
        e.after_snapshot = get_int(je.value("after_snapshot", json(-1)),
                                   where + "/after_snapshot");
        const int ns = static_cast<int>(trace.snapshots.size());
        if (e.before_snapshot < 0 || e.before_snapshot >= ns ||
            e.after_snapshot < 0 || e.after_snapshot >= ns)
            skew(where, "snapshot reference out of range");
        trace.entries.push_back(std::move(e));
    }
    return trace;
}

RewriteTrace trace_from_text(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) skew("", "invalid JSON");
    return trace_from_json(doc);
}

RewriteTrace trace_from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return trace_from_text(ss.str());
}

void trace_to_file(const RewriteTrace& trace, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << trace_to_json(trace).dump(2) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace muskia
