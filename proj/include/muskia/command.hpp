// command.hpp - Display-list commands, programs, and their execution.
#pragma once

#include <optional>
#include <vector>

#include "muskia/geometry.hpp"
#include "muskia/layer.hpp"
#include "muskia/paint.hpp"

namespace muskia {

// One display-list record. The flat tagged-record form is the canonical
// program representation; payload fields outside a record's tag are ignored.
struct Command {
    enum class Op { Draw, Clip, Save, SaveLayer, Restore, NoOp };

    Op op = Op::NoOp;
    Shape shape;  // Draw, Clip
    Paint paint;  // Draw, SaveLayer

    static Command draw(Shape s, Paint p);
    static Command clip(Shape s);
    static Command save();
    static Command save_layer(Paint p);
    static Command restore();
    static Command noop();

    friend bool operator==(const Command& a, const Command& b);
};

const char* op_name(Command::Op);

struct Program {
    std::vector<Command> commands;

    friend bool operator==(const Program&, const Program&) = default;
};

// Bracket discipline: every Save/SaveLayer needs a matching later Restore,
// properly nested, and no Restore may appear unmatched.
struct BalanceError {
    enum class Kind { UnmatchedRestore, UnclosedOpener };
    Kind kind = Kind::UnmatchedRestore;
    int index = 0;  // offending Restore, or the first opener left unclosed
};

std::optional<BalanceError> check_balanced(const std::vector<Command>& commands);
std::optional<BalanceError> check_balanced(const Program& p);

// Execution state: a stack of layers and a stack of clip shapes (tops at the
// back). The opener stack pairs each open bracket with its kind so a flat
// Restore record knows what it closes.
struct ExecState {
    std::vector<Layer> layers;
    std::vector<Shape> clips;

    struct Opener {
        bool is_layer = false;
        Paint paint;  // SaveLayer only
    };
    std::vector<Opener> openers;
};

// <[Empty], [Full]> with no open brackets.
ExecState initial_state();

// Single-step transition:
//   Draw(g, p)   top layer L becomes Draw(L, g intersect clip, p)
//   Clip(m)      top clip becomes clip intersect m
//   Save         duplicate top clip
//   SaveLayer(p) push empty layer and duplicate top clip
//   Restore      close the innermost opener; closing a SaveLayer blends the
//                popped layer into the one below with the opener's paint
//   NoOp         identity
// Throws std::logic_error on an unmatched Restore (callers check balance).
void step(const Command& cmd, ExecState& state);

// Executes a balanced program from the initial state and returns the single
// remaining layer. Throws std::invalid_argument when the program is not
// balanced (message carries the offending index).
Layer run(const Program& p);

}  // namespace muskia
