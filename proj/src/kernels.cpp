// kernels.cpp - Term flattening, backend dispatch, and the scalar reference
// kernel. The AVX2 kernel in kernels_avx2.cpp mirrors the scalar arithmetic
// operation for operation.

#include "muskia/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace muskia::kernels {

LayerProgram flatten(const Layer& layer) {
    LayerProgram prog;
    int depth = 0;
    int max_depth = 0;

    struct Item {
        enum class Tag { Visit, Draw, BlendPop };
        Tag tag = Tag::Visit;
        Layer layer;  // Visit
        Shape shape;  // Draw
        Paint paint;  // Draw, BlendPop
    };
    std::vector<Item> work;
    {
        Item root;
        root.layer = layer;
        work.push_back(std::move(root));
    }

    while (!work.empty()) {
        Item item = std::move(work.back());
        work.pop_back();
        switch (item.tag) {
        case Item::Tag::Draw: {
            LayerOp op;
            op.kind = LayerOp::Kind::DrawOnto;
            op.shape = std::move(item.shape);
            op.paint = std::move(item.paint);
            prog.ops.push_back(std::move(op));
            break;
        }
        case Item::Tag::BlendPop: {
            LayerOp op;
            op.kind = LayerOp::Kind::BlendPop;
            op.paint = std::move(item.paint);
            prog.ops.push_back(std::move(op));
            --depth;
            break;
        }
        case Item::Tag::Visit: {
            // Collect the draw spine top-down; popping emits it bottom-up.
            Layer cur = item.layer;
            while (cur.kind() == Layer::Kind::Draw) {
                Item d;
                d.tag = Item::Tag::Draw;
                d.shape = cur.shape();
                d.paint = cur.paint();
                work.push_back(std::move(d));
                cur = cur.base();
            }
            if (cur.kind() == Layer::Kind::Empty) {
                LayerOp op;
                op.kind = LayerOp::Kind::Push;
                prog.ops.push_back(std::move(op));
                ++depth;
                max_depth = std::max(max_depth, depth);
            } else {
                Item pop;
                pop.tag = Item::Tag::BlendPop;
                pop.paint = cur.paint();
                work.push_back(std::move(pop));
                Item top;
                top.layer = cur.top();
                work.push_back(std::move(top));
                Item bottom;
                bottom.layer = cur.bottom();
                work.push_back(std::move(bottom));
            }
            break;
        }
        }
    }

    prog.stack_depth = std::max(max_depth, 1);
    return prog;
}

void eval_span_scalar(const LayerProgram& prog, const double* xs, const double* ys,
                      std::size_t n, Color* out) {
    if (n == 0) return;
    // Span stack laid out as stack_depth contiguous Color spans.
    std::vector<Color> stack(static_cast<size_t>(prog.stack_depth) * n);
    int level = -1;

    for (const LayerOp& op : prog.ops) {
        switch (op.kind) {
        case LayerOp::Kind::Push: {
            ++level;
            Color* span = stack.data() + static_cast<size_t>(level) * n;
            std::fill(span, span + n, kTransparent);
            break;
        }
        case LayerOp::Kind::DrawOnto: {
            Color* span = stack.data() + static_cast<size_t>(level) * n;
            const Paint& p = op.paint;
            for (std::size_t i = 0; i < n; ++i) {
                const Point pt{xs[i], ys[i]};
                const Color src =
                    op.shape.contains(pt) ? eval_fill(p.fill, pt) : kTransparent;
                span[i] = blend(p.blend, span[i], apply_filter(p.filter, src));
            }
            break;
        }
        case LayerOp::Kind::BlendPop: {
            Color* top = stack.data() + static_cast<size_t>(level) * n;
            Color* below = stack.data() + static_cast<size_t>(level - 1) * n;
            const Paint& p = op.paint;
            for (std::size_t i = 0; i < n; ++i)
                below[i] = blend(p.blend, below[i], apply_filter(p.filter, top[i]));
            --level;
            break;
        }
        }
    }

    assert(level == 0);
    std::copy(stack.begin(), stack.begin() + n, out);
}

bool backend_available(Backend b) {
    switch (b) {
    case Backend::Auto:
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(MUSKIA_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") != 0;
#else
        return false;
#endif
    }
    return false;
}

Backend resolve_backend(Backend requested) {
    if (requested == Backend::Auto)
        return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
    return requested;
}

void eval_span(const LayerProgram& prog, const double* xs, const double* ys,
               std::size_t n, Color* out, Backend backend) {
    switch (resolve_backend(backend)) {
    case Backend::Scalar:
        eval_span_scalar(prog, xs, ys, n, out);
        return;
    case Backend::Avx2:
#if defined(MUSKIA_HAVE_AVX2)
        if (backend_available(Backend::Avx2)) {
            eval_span_avx2(prog, xs, ys, n, out);
            return;
        }
#endif
        throw std::runtime_error("avx2 kernel requested but not available");
    case Backend::Auto:
        break;
    }
    eval_span_scalar(prog, xs, ys, n, out);
}

}  // namespace muskia::kernels
