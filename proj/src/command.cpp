// command.cpp - Balance checking and the operational semantics.

#include "muskia/command.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace muskia {

Command Command::draw(Shape s, Paint p) {
    Command c;
    c.op = Op::Draw;
    c.shape = std::move(s);
    c.paint = std::move(p);
    return c;
}

Command Command::clip(Shape s) {
    Command c;
    c.op = Op::Clip;
    c.shape = std::move(s);
    return c;
}

Command Command::save() {
    Command c;
    c.op = Op::Save;
    return c;
}

Command Command::save_layer(Paint p) {
    Command c;
    c.op = Op::SaveLayer;
    c.paint = std::move(p);
    return c;
}

Command Command::restore() {
    Command c;
    c.op = Op::Restore;
    return c;
}

Command Command::noop() { return Command{}; }

bool operator==(const Command& a, const Command& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
    case Command::Op::Draw:
        return a.shape == b.shape && a.paint == b.paint;
    case Command::Op::Clip:
        return a.shape == b.shape;
    case Command::Op::SaveLayer:
        return a.paint == b.paint;
    case Command::Op::Save:
    case Command::Op::Restore:
    case Command::Op::NoOp:
        return true;
    }
    return false;
}

const char* op_name(Command::Op op) {
    switch (op) {
    case Command::Op::Draw: return "draw";
    case Command::Op::Clip: return "clip";
    case Command::Op::Save: return "save";
    case Command::Op::SaveLayer: return "saveLayer";
    case Command::Op::Restore: return "restore";
    case Command::Op::NoOp: return "noop";
    }
    return "?";
}

std::optional<BalanceError> check_balanced(const std::vector<Command>& commands) {
    std::vector<int> openers;
    for (int i = 0; i < static_cast<int>(commands.size()); ++i) {
        switch (commands[i].op) {
        case Command::Op::Save:
        case Command::Op::SaveLayer:
            openers.push_back(i);
            break;
        case Command::Op::Restore:
            if (openers.empty())
                return BalanceError{BalanceError::Kind::UnmatchedRestore, i};
            openers.pop_back();
            break;
        default:
            break;
        }
    }
    if (!openers.empty())
        return BalanceError{BalanceError::Kind::UnclosedOpener, openers.front()};
    return std::nullopt;
}

std::optional<BalanceError> check_balanced(const Program& p) {
    return check_balanced(p.commands);
}

ExecState initial_state() {
    ExecState st;
    st.layers.push_back(Layer::empty());
    st.clips.push_back(Shape::full());
    return st;
}

void step(const Command& cmd, ExecState& state) {
    assert(!state.layers.empty() && !state.clips.empty());
    switch (cmd.op) {
    case Command::Op::Draw: {
        Layer& top = state.layers.back();
        top = Layer::draw(top, shape_intersect(cmd.shape, state.clips.back()),
                          cmd.paint);
        break;
    }
    case Command::Op::Clip:
        state.clips.back() = shape_intersect(state.clips.back(), cmd.shape);
        break;
    case Command::Op::Save:
        state.clips.push_back(state.clips.back());
        state.openers.push_back({false, Paint{}});
        break;
    case Command::Op::SaveLayer:
        state.layers.push_back(Layer::empty());
        state.clips.push_back(state.clips.back());
        state.openers.push_back({true, cmd.paint});
        break;
    case Command::Op::Restore: {
        if (state.openers.empty())
            throw std::logic_error("restore without matching save/saveLayer");
        const ExecState::Opener opener = state.openers.back();
        state.openers.pop_back();
        state.clips.pop_back();
        if (opener.is_layer) {
            Layer top = state.layers.back();
            state.layers.pop_back();
            Layer& below = state.layers.back();
            below = Layer::blend_layers(below, top, opener.paint);
        }
        break;
    }
    case Command::Op::NoOp:
        break;
    }
}

Layer run(const Program& p) {
    if (auto err = check_balanced(p)) {
        const char* what = err->kind == BalanceError::Kind::UnmatchedRestore
                               ? "unmatched restore at index "
                               : "unclosed save/saveLayer at index ";
        throw std::invalid_argument(what + std::to_string(err->index));
    }
    ExecState st = initial_state();
#ifndef NDEBUG
    // Commands only ever touch the stack tops; verify depth discipline and
    // that the tails stay untouched while stepping.
    for (const Command& cmd : p.commands) {
        const size_t layers_before = st.layers.size();
        const size_t clips_before = st.clips.size();
        step(cmd, st);
        switch (cmd.op) {
        case Command::Op::Save:
            assert(st.clips.size() == clips_before + 1);
            assert(st.layers.size() == layers_before);
            break;
        case Command::Op::SaveLayer:
            assert(st.clips.size() == clips_before + 1);
            assert(st.layers.size() == layers_before + 1);
            break;
        case Command::Op::Restore:
            assert(st.clips.size() == clips_before - 1);
            break;
        default:
            assert(st.clips.size() == clips_before);
            assert(st.layers.size() == layers_before);
            break;
        }
    }
#else
    for (const Command& cmd : p.commands) step(cmd, st);
#endif
    assert(st.layers.size() == 1 && st.clips.size() == 1);
    return st.layers.back();
}

}  // namespace muskia
