// format.hpp - skp-lite: the JSON serialization of programs.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "muskia/command.hpp"

namespace muskia {

// Loader/saver failures. Schema errors carry a JSON-pointer-ish path to the
// offending value; invariant and balance errors carry the command index.
class FormatError : public std::runtime_error {
public:
    enum class Kind { Schema, Invariant, Unbalanced };

    FormatError(Kind kind, std::string where, const std::string& reason,
                int index = -1)
        : std::runtime_error(format_message(kind, where, reason, index)),
          kind_(kind),
          where_(std::move(where)),
          index_(index) {}

    Kind kind() const { return kind_; }
    const std::string& where() const { return where_; }
    int index() const { return index_; }

private:
    static std::string format_message(Kind, const std::string&,
                                      const std::string&, int);
    Kind kind_;
    std::string where_;
    int index_;
};

// Parses, validates, and normalizes a document:
//   - colors arrive unpremultiplied and are premultiplied on load;
//   - gradient stop offsets are clamped to [0,1] and padded to cover 0..1;
//   - rect/rect intersections fold, zero-area shapes become empty;
//   - the command list must be bracket-balanced.
// The "noop" op is accepted (optimization-trace snapshots keep tombstones)
// even though save_program never emits it.
Program load_program(const nlohmann::json& doc);
Program load_program_text(std::string_view text);
Program load_program_file(const std::string& path);

// Serializes a program; colors are written back unpremultiplied and NoOp
// records are dropped. load(save(p)) == p for normalized programs.
nlohmann::json save_program(const Program& p);
std::string save_program_text(const Program& p);
void save_program_file(const Program& p, const std::string& path);

// Positional variant used by optimization traces: tombstones are kept so
// record indices stay meaningful.
nlohmann::json save_program_with_noops(const Program& p);

// Single-command codecs shared with the trace format.
nlohmann::json command_to_json(const Command& c);
Command command_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace muskia
