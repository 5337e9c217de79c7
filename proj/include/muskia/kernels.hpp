// kernels.hpp - Batched evaluation of layer denotations over point spans.
//
// The rasterizer evaluates one layer term at many points. The term is
// flattened once into a small op program over a span stack, then executed by
// a scalar reference kernel or an AVX2 kernel selected at runtime. Both
// kernels perform the same arithmetic in the same order, so their outputs are
// bit-identical to each other and to the recursive single-point denotation.
#pragma once

#include <cstddef>
#include <vector>

#include "muskia/color.hpp"
#include "muskia/layer.hpp"

namespace muskia::kernels {

enum class Backend { Auto, Scalar, Avx2 };

struct LayerOp {
    enum class Kind {
        Push,      // push a transparent span
        DrawOnto,  // top = blend(top, filter(inside shape ? fill : transparent))
        BlendPop,  // below = blend(below, filter(top)); pop
    };
    Kind kind = Kind::Push;
    Shape shape;
    Paint paint;
};

struct LayerProgram {
    std::vector<LayerOp> ops;
    int stack_depth = 1;  // maximum span-stack depth needed
};

// Post-order linearization of a layer term. Draw spines flatten iteratively,
// so arbitrarily long command chains do not recurse.
LayerProgram flatten(const Layer& layer);

bool backend_available(Backend b);
Backend resolve_backend(Backend requested);  // Auto -> best available

// Evaluates the denotation at n points (xs[i], ys[i]) into out[i].
void eval_span(const LayerProgram& prog, const double* xs, const double* ys,
               std::size_t n, Color* out, Backend backend = Backend::Auto);

// Internal entry points, exposed for the kernel equivalence tests.
void eval_span_scalar(const LayerProgram& prog, const double* xs, const double* ys,
                      std::size_t n, Color* out);
#if defined(MUSKIA_HAVE_AVX2)
void eval_span_avx2(const LayerProgram& prog, const double* xs, const double* ys,
                    std::size_t n, Color* out);
#endif

}  // namespace muskia::kernels
