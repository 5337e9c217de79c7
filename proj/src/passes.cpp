// passes.cpp - The rewrite passes and the scan driver that hosts their match
// state machines.
//
// The driver walks the buffer once. Plain saves bump save_count; a layer
// pushes a frame holding the pass's MatchState plus the save_count at open,
// so a restore compares against the top frame to learn what it closes. The
// bottom frame stands for the whole-program scope. Passes may reach below
// the top of the frame stack: an inner layer can invalidate or complete an
// enclosing frame's match.

#include <cassert>
#include <stdexcept>
#include <string>

#include "muskia/inline_stack.hpp"
#include "muskia/optimizer.hpp"

namespace muskia {

namespace {

template <class Pass>
class Driver {
public:
    using State = typename Pass::MatchState;
    struct Frame {
        State state{};
        int save_count = 0;       // plain-save depth when this frame opened
        int savelayer_index = -1; // -1 for the whole-program frame
    };

    Driver(RecordBuffer& buf, PassResult& out) : buf_(buf), out_(out) {}

    // --- buffer access and editing (edits are recorded per firing) ---
    const Command& at(int i) const { return buf_.at(i); }
    int size() const { return buf_.size(); }

    void begin_fire(int anchor) {
        out_.firings.push_back(Firing{anchor, {}, {}});
        current_ = &out_.firings.back();
    }
    void replace(int i, Command next) {
        assert(current_ != nullptr);
        current_->edits.push_back({i, buf_.at(i), next});
        buf_.replace(i, std::move(next));
    }
    void tombstone(int i) { replace(i, Command::noop()); }
    void insert(int index, const std::vector<Command>& cmds) {
        assert(current_ != nullptr);
        for (const Command& c : cmds) current_->inserted.push_back({index, c});
        buf_.queue_insert(index, cmds);
    }

    // --- frame access ---
    Frame& top() { return frames_.back(); }
    State& top_state() { return frames_.back().state; }
    // True when the scan sits at the top frame's own save depth, i.e. not
    // inside any plain save bracket opened within the frame.
    bool at_frame_depth() const { return save_count_ == frames_.back().save_count; }

    void run(Pass& pass) {
        frames_.push(Frame{pass.root_state(), 0, -1});
        const int n = buf_.size();
        for (int i = 0; i < n; ++i) {
            ++out_.callbacks;
            switch (buf_.at(i).op) {
            case Command::Op::Save:
                ++save_count_;
                pass.on_save(*this, i);
                break;
            case Command::Op::SaveLayer: {
                State st = pass.on_save_layer(*this, i);
                frames_.push(Frame{std::move(st), save_count_, i});
                break;
            }
            case Command::Op::Restore:
                if (save_count_ > frames_.back().save_count) {
                    --save_count_;
                    pass.on_restore(*this, i);
                } else {
                    assert(frames_.size() > 1);
                    Frame f = std::move(frames_.back());
                    frames_.pop();
                    pass.on_restore_layer(*this, i, std::move(f));
                }
                break;
            case Command::Op::Draw:
                pass.on_draw(*this, i);
                break;
            case Command::Op::Clip:
                pass.on_clip(*this, i);
                break;
            case Command::Op::NoOp:
                pass.on_other(*this, i);
                break;
            }
        }
        pass.on_end(*this);
    }

private:
    RecordBuffer& buf_;
    PassResult& out_;
    InlineStack<Frame, 8> frames_;
    int save_count_ = 0;
    Firing* current_ = nullptr;
};

// ---------------------------------------------------------------------------
// srcover_savelayer: a layer whose paint is {SrcOver, Id, opaque fill} and
// whose body holds only SrcOver draws, clips, and balanced plain
// save/restore pairs is replaced by a plain Save. Any inner layer or
// non-SrcOver draw moves the match to Ignore; an inner layer also moves the
// enclosing frame to Ignore for this scan.

struct SrcOverSaveLayerPass {
    static constexpr const char* kName = kPassSrcOverSaveLayer;

    struct MatchState {
        bool matching = false;
    };

    MatchState root_state() { return {}; }

    template <class D>
    MatchState on_save_layer(D& d, int i) {
        d.top_state().matching = false;  // inner layer present
        const Paint& p = d.at(i).paint;
        MatchState s;
        s.matching = p.blend == BlendMode::SrcOver && p.filter == ColorFilter::Id &&
                     fill_opaque(p.fill);
        return s;
    }

    template <class D>
    void on_draw(D& d, int i) {
        if (d.at(i).paint.blend != BlendMode::SrcOver) d.top_state().matching = false;
    }

    template <class D>
    void on_clip(D&, int) {}
    template <class D>
    void on_save(D&, int) {}
    template <class D>
    void on_restore(D&, int) {}

    template <class D>
    void on_other(D& d, int) {
        d.top_state().matching = false;
    }

    template <class D>
    void on_restore_layer(D& d, int, typename D::Frame frame) {
        if (frame.state.matching) {
            d.begin_fire(frame.savelayer_index);
            d.replace(frame.savelayer_index, Command::save());
        }
    }

    template <class D>
    void on_end(D&) {}
};

// ---------------------------------------------------------------------------
// dstin_to_clip: a scope (layer body or whole program) that ends with
//   SaveLayer({DstIn, Id}); Clip*; Draw(g, {Solid opaque-after-filters,
//   SrcOver}); Restore
// becomes Save; Clip(g); <those clips>; <rest of the scope>; Restore, with
// the mask records tombstoned. The scope prefix must be layer-free with all
// draws SrcOver and no scope-level clip (a clip persisting to the mask draw
// would mask earlier draws but only clip later ones, which the replacement
// cannot express).

struct DstInToClipPass {
    static constexpr const char* kName = kPassDstInToClip;

    struct Candidate {
        int savelayer = -1;
        int draw = -1;
        int restore = -1;
        std::vector<int> clips;
    };

    struct MatchState {
        // Scope tracking: validity of everything seen so far as an l1 prefix.
        bool l1_ok = true;
        bool has_candidate = false;
        Candidate cand;
        // Mask-body tracking when this frame opened as a {DstIn, Id} layer.
        bool mask_eligible = false;
        int body_phase = 0;  // 0 = clips, 1 = draw seen, 2 = dead
        std::vector<int> body_clips;
        int body_draw = -1;
        bool draw_opaque = false;
    };

    MatchState root_state() { return {}; }

    // A non-NoOp record materialized in the top scope: a previously closed
    // candidate is no longer the scope suffix, and its layer lands in l1.
    template <class D>
    static void scope_record(D& d) {
        auto& s = d.top_state();
        if (s.has_candidate) {
            s.has_candidate = false;
            s.l1_ok = false;
        }
    }

    static void kill_body(MatchState& s) { s.body_phase = 2; }

    template <class D>
    MatchState on_save_layer(D& d, int i) {
        scope_record(d);
        kill_body(d.top_state());
        const Paint& p = d.at(i).paint;
        MatchState s;
        s.mask_eligible = p.blend == BlendMode::DstIn && p.filter == ColorFilter::Id;
        return s;
    }

    template <class D>
    void on_draw(D& d, int i) {
        scope_record(d);
        auto& s = d.top_state();
        const Paint& p = d.at(i).paint;
        if (p.blend != BlendMode::SrcOver) s.l1_ok = false;
        if (s.body_phase == 0) {
            if (p.fill.kind() == Fill::Kind::Solid && p.blend == BlendMode::SrcOver) {
                s.body_phase = 1;
                s.body_draw = i;
                // Opacity of the mask color after the draw's own filter; the
                // layer's filter is Id by eligibility.
                s.draw_opaque = is_opaque(apply_filter(p.filter, p.fill.solid_color()));
            } else {
                s.body_phase = 2;
            }
        } else if (s.body_phase == 1) {
            s.body_phase = 2;
        }
    }

    template <class D>
    void on_clip(D& d, int i) {
        scope_record(d);
        auto& s = d.top_state();
        if (s.body_phase == 0) {
            s.body_clips.push_back(i);
        } else if (s.body_phase == 1) {
            s.body_phase = 2;
        }
        // A clip at the scope's own depth persists to the mask draw.
        if (d.at_frame_depth()) s.l1_ok = false;
    }

    template <class D>
    void on_save(D& d, int) {
        scope_record(d);
        kill_body(d.top_state());
    }

    template <class D>
    void on_restore(D& d, int) {
        scope_record(d);
        kill_body(d.top_state());
    }

    template <class D>
    void on_other(D& d, int) {
        // Tombstones after the candidate keep it the scope suffix, but a
        // tombstone inside the mask body breaks the strict pattern.
        kill_body(d.top_state());
    }

    template <class D>
    void maybe_fire(D& d, const MatchState& s, int scope_begin, int scope_end) {
        if (!s.has_candidate || !s.l1_ok) return;
        const Candidate& c = s.cand;
        const Shape g = d.at(c.draw).shape;
        std::vector<Command> head;
        head.reserve(2 + c.clips.size());
        head.push_back(Command::save());
        head.push_back(Command::clip(g));
        for (int idx : c.clips) head.push_back(Command::clip(d.at(idx).shape));
        d.begin_fire(c.savelayer);
        d.tombstone(c.savelayer);
        d.tombstone(c.draw);
        d.tombstone(c.restore);
        d.insert(scope_begin, head);
        d.insert(scope_end, {Command::restore()});
    }

    template <class D>
    void on_restore_layer(D& d, int i, typename D::Frame frame) {
        // The closing frame is itself a scope; fire its own trailing mask.
        maybe_fire(d, frame.state, frame.savelayer_index + 1, i);

        auto& parent = d.top_state();
        const bool valid_mask = frame.state.mask_eligible &&
                                frame.state.body_phase == 1 &&
                                frame.state.draw_opaque;
        if (valid_mask) {
            if (parent.has_candidate) {
                // The previous candidate is displaced into l1.
                parent.l1_ok = false;
            }
            parent.has_candidate = true;
            parent.cand.savelayer = frame.savelayer_index;
            parent.cand.draw = frame.state.body_draw;
            parent.cand.restore = i;
            parent.cand.clips = frame.state.body_clips;
        } else {
            parent.has_candidate = false;
            parent.l1_ok = false;  // a layer bracket sits in the scope prefix
        }
        kill_body(parent);
    }

    template <class D>
    void on_end(D& d) {
        maybe_fire(d, d.top_state(), 0, d.size());
    }
};

// ---------------------------------------------------------------------------
// subsume_luma: the exact nest
//   SaveLayer(p {DstIn}); SaveLayer({Luma, SrcOver});
//   Draw(m, {Solid c, SrcOver, Id}); Restore; Restore
// drops the inner layer and bakes the luminance into the draw's fill color.
// Restricted to exactly one draw: luminance does not distribute over
// blending, so two draws cannot be pre-filtered independently.

struct SubsumeLumaPass {
    static constexpr const char* kName = kPassSubsumeLuma;

    struct MatchState {
        // Outer role: a DstIn layer awaiting the inner conversion layer.
        bool outer_candidate = false;
        int outer_phase = 0;  // 0 await inner, 1 inner open, 2 inner closed, 3 dead
        int inner_sl = -1;
        int inner_restore = -1;
        int inner_draw = -1;
        Shape draw_shape;
        Color draw_color;
        // Inner role: the {Luma, SrcOver} layer awaiting exactly one draw.
        bool inner_candidate = false;
        int inner_phase = 0;  // 0 await draw, 1 draw seen, 2 dead
        int my_draw = -1;
        Shape my_shape;
        Color my_color;
    };

    MatchState root_state() { return {}; }

    static void kill(MatchState& s) {
        if (s.outer_candidate) s.outer_phase = 3;
        if (s.inner_candidate) s.inner_phase = 2;
    }

    template <class D>
    MatchState on_save_layer(D& d, int i) {
        auto& parent = d.top_state();
        const Paint& p = d.at(i).paint;
        MatchState s;
        if (parent.outer_candidate && parent.outer_phase == 0 &&
            p.filter == ColorFilter::Luma && p.blend == BlendMode::SrcOver) {
            s.inner_candidate = true;
            parent.outer_phase = 1;
            parent.inner_sl = i;
        } else {
            kill(parent);
            s.outer_candidate = p.blend == BlendMode::DstIn;
        }
        return s;
    }

    template <class D>
    void on_draw(D& d, int i) {
        auto& s = d.top_state();
        if (s.inner_candidate && s.inner_phase == 0) {
            const Command& c = d.at(i);
            if (c.paint.fill.kind() == Fill::Kind::Solid &&
                c.paint.blend == BlendMode::SrcOver &&
                c.paint.filter == ColorFilter::Id) {
                s.inner_phase = 1;
                s.my_draw = i;
                s.my_shape = c.shape;
                s.my_color = c.paint.fill.solid_color();
                return;
            }
        }
        kill(s);
    }

    template <class D>
    void on_clip(D& d, int) {
        kill(d.top_state());
    }
    template <class D>
    void on_save(D& d, int) {
        kill(d.top_state());
    }
    template <class D>
    void on_restore(D& d, int) {
        kill(d.top_state());
    }
    template <class D>
    void on_other(D& d, int) {
        kill(d.top_state());
    }

    template <class D>
    void on_restore_layer(D& d, int i, typename D::Frame frame) {
        const MatchState& st = frame.state;

        // A matched outer closing: rewrite.
        if (st.outer_candidate && st.outer_phase == 2) {
            d.begin_fire(st.inner_sl);
            d.tombstone(st.inner_sl);
            d.tombstone(st.inner_restore);
            Paint baked;
            baked.fill = Fill::solid(apply_filter(ColorFilter::Luma, st.draw_color));
            baked.filter = ColorFilter::Id;
            baked.blend = BlendMode::SrcOver;
            d.replace(st.inner_draw, Command::draw(st.draw_shape, std::move(baked)));
        }

        auto& parent = d.top_state();
        if (parent.outer_candidate && parent.outer_phase == 1 &&
            parent.inner_sl == frame.savelayer_index && st.inner_candidate &&
            st.inner_phase == 1) {
            // The inner conversion layer closed cleanly; expect the outer's
            // restore next.
            parent.outer_phase = 2;
            parent.inner_restore = i;
            parent.inner_draw = st.my_draw;
            parent.draw_shape = st.my_shape;
            parent.draw_color = st.my_color;
        } else {
            kill(parent);
        }
    }

    template <class D>
    void on_end(D&) {}
};

// ---------------------------------------------------------------------------
// gradient_mask: the adjacent four records
//   Draw(s, p1 {SrcOver}); SaveLayer({DstIn, Id});
//   Draw(s, {opaque gradient, SrcOver, Id}); Restore
// drop the mask entirely, leaving Draw(s, p1). The gradient must be opaque at
// every stop and the two shapes structurally identical. The anchor draw must
// also be the first content of its scope: the DstIn blend erases everything
// outside s, so any earlier draw or layer would survive on the right-hand
// side but not on the left.

struct GradientMaskPass {
    static constexpr const char* kName = kPassGradientMask;

    struct MatchState {
        // Scope: the record immediately behind the cursor, when it was a
        // qualifying draw, and whether any content preceded it.
        bool have_anchor = false;
        bool anchor_is_first_content = false;
        int anchor_draw = -1;
        bool content_seen = false;
        // Mask role, when this frame opened right after an anchor draw.
        bool mask_armed = false;
        int anchor_for_mask = -1;
        int phase = 0;  // 0 await inner draw, 1 draw seen, 2 dead
        int inner_draw = -1;
    };

    MatchState root_state() { return {}; }

    template <class D>
    MatchState on_save_layer(D& d, int i) {
        auto& parent = d.top_state();
        if (parent.mask_armed) parent.phase = 2;
        const Paint& p = d.at(i).paint;
        MatchState s;
        if (parent.have_anchor && parent.anchor_is_first_content &&
            p.blend == BlendMode::DstIn && p.filter == ColorFilter::Id) {
            s.mask_armed = true;
            s.anchor_for_mask = parent.anchor_draw;
        }
        parent.have_anchor = false;
        return s;
    }

    template <class D>
    void on_draw(D& d, int i) {
        auto& s = d.top_state();
        if (s.mask_armed) {
            if (s.phase == 0) {
                const Command& c = d.at(i);
                const Command& anchor = d.at(s.anchor_for_mask);
                if (c.paint.blend == BlendMode::SrcOver &&
                    c.paint.filter == ColorFilter::Id && c.paint.fill.is_gradient() &&
                    fill_opaque(c.paint.fill) && c.shape == anchor.shape) {
                    s.phase = 1;
                    s.inner_draw = i;
                } else {
                    s.phase = 2;
                }
            } else if (s.phase == 1) {
                s.phase = 2;
            }
        }
        s.have_anchor = d.at(i).paint.blend == BlendMode::SrcOver;
        s.anchor_is_first_content = !s.content_seen;
        s.anchor_draw = i;
        s.content_seen = true;
    }

    template <class D>
    void on_clip(D& d, int) {
        auto& s = d.top_state();
        s.have_anchor = false;
        if (s.mask_armed) s.phase = 2;
    }
    template <class D>
    void on_save(D& d, int) {
        on_clip(d, 0);
    }
    template <class D>
    void on_restore(D& d, int) {
        on_clip(d, 0);
    }
    template <class D>
    void on_other(D& d, int) {
        on_clip(d, 0);
    }

    template <class D>
    void on_restore_layer(D& d, int i, typename D::Frame frame) {
        if (frame.state.mask_armed && frame.state.phase == 1) {
            d.begin_fire(frame.savelayer_index);
            d.tombstone(frame.savelayer_index);
            d.tombstone(frame.state.inner_draw);
            d.tombstone(i);
        }
        auto& parent = d.top_state();
        parent.have_anchor = false;
        parent.content_seen = true;  // the closed layer may have drawn content
    }

    template <class D>
    void on_end(D&) {}
};

template <class Pass>
PassResult run_pass(RecordBuffer& buf) {
    PassResult out;
    out.pass = Pass::kName;
    Pass pass;
    Driver<Pass> driver(buf, out);
    driver.run(pass);
    return out;
}

}  // namespace

PassResult transform(std::string_view pass_name, RecordBuffer& buf) {
    if (auto err = check_balanced(buf.records()))
        throw std::invalid_argument("transform: unbalanced buffer at index " +
                                    std::to_string(err->index));
    if (pass_name == kPassSrcOverSaveLayer) return run_pass<SrcOverSaveLayerPass>(buf);
    if (pass_name == kPassDstInToClip) return run_pass<DstInToClipPass>(buf);
    if (pass_name == kPassSubsumeLuma) return run_pass<SubsumeLumaPass>(buf);
    if (pass_name == kPassGradientMask) return run_pass<GradientMaskPass>(buf);
    throw std::invalid_argument("unknown pass: " + std::string(pass_name));
}

}  // namespace muskia
