// kernels_avx2.cpp - AVX2 span kernel: four points per lane group.
//
// Every arithmetic expression here mirrors the scalar reference (color.hpp,
// fill.cpp, geometry.cpp) operation for operation, with contraction disabled
// project-wide, so results are bit-identical to the scalar kernel. The
// equivalence tests enforce this; change both sides together or not at all.

#if defined(MUSKIA_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <vector>

#include "muskia/kernels.hpp"

namespace muskia::kernels {

namespace {

struct Vec4c {
    __m256d a, r, g, b;
};

inline __m256d clamp01(__m256d v) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    return _mm256_min_pd(_mm256_max_pd(v, zero), one);
}

inline Vec4c saturate4(Vec4c c) {
    const __m256d zero = _mm256_setzero_pd();
    c.a = clamp01(c.a);
    c.r = _mm256_min_pd(_mm256_max_pd(c.r, zero), c.a);
    c.g = _mm256_min_pd(_mm256_max_pd(c.g, zero), c.a);
    c.b = _mm256_min_pd(_mm256_max_pd(c.b, zero), c.a);
    return c;
}

inline Vec4c blend4(BlendMode mode, const Vec4c& dst, const Vec4c& src) {
    const __m256d one = _mm256_set1_pd(1.0);
    Vec4c out;
    switch (mode) {
    case BlendMode::SrcOver: {
        const __m256d isa = _mm256_sub_pd(one, src.a);
        out.a = _mm256_add_pd(src.a, _mm256_mul_pd(dst.a, isa));
        out.r = _mm256_add_pd(src.r, _mm256_mul_pd(dst.r, isa));
        out.g = _mm256_add_pd(src.g, _mm256_mul_pd(dst.g, isa));
        out.b = _mm256_add_pd(src.b, _mm256_mul_pd(dst.b, isa));
        break;
    }
    case BlendMode::DstIn: {
        out.a = _mm256_mul_pd(dst.a, src.a);
        out.r = _mm256_mul_pd(dst.r, src.a);
        out.g = _mm256_mul_pd(dst.g, src.a);
        out.b = _mm256_mul_pd(dst.b, src.a);
        break;
    }
    case BlendMode::SrcOut: {
        const __m256d ida = _mm256_sub_pd(one, dst.a);
        out.a = _mm256_mul_pd(src.a, ida);
        out.r = _mm256_mul_pd(src.r, ida);
        out.g = _mm256_mul_pd(src.g, ida);
        out.b = _mm256_mul_pd(src.b, ida);
        break;
    }
    case BlendMode::Multiply: {
        const __m256d ida = _mm256_sub_pd(one, dst.a);
        const __m256d isa = _mm256_sub_pd(one, src.a);
        out.a = _mm256_add_pd(src.a, _mm256_mul_pd(dst.a, isa));
        auto ch = [&](__m256d s, __m256d d) {
            return _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(s, d), _mm256_mul_pd(s, ida)),
                _mm256_mul_pd(d, isa));
        };
        out.r = ch(src.r, dst.r);
        out.g = ch(src.g, dst.g);
        out.b = ch(src.b, dst.b);
        break;
    }
    }
    return saturate4(out);
}

inline Vec4c filter4(ColorFilter f, const Vec4c& c) {
    if (f == ColorFilter::Id) return c;
    const __m256d y = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(0.2126), c.r),
                      _mm256_mul_pd(_mm256_set1_pd(0.7152), c.g)),
        _mm256_mul_pd(_mm256_set1_pd(0.0722), c.b));
    Vec4c out;
    out.a = clamp01(y);
    out.r = _mm256_setzero_pd();
    out.g = _mm256_setzero_pd();
    out.b = _mm256_setzero_pd();
    return out;
}

// All-ones lanes where the point is inside the shape.
__m256d shape_mask(const Shape& s, __m256d x, __m256d y) {
    switch (s.kind()) {
    case ShapeKind::Rect: {
        const __m256d m = _mm256_and_pd(
            _mm256_and_pd(_mm256_cmp_pd(x, _mm256_set1_pd(s.left()), _CMP_GE_OQ),
                          _mm256_cmp_pd(x, _mm256_set1_pd(s.right()), _CMP_LT_OQ)),
            _mm256_and_pd(_mm256_cmp_pd(y, _mm256_set1_pd(s.top()), _CMP_GE_OQ),
                          _mm256_cmp_pd(y, _mm256_set1_pd(s.bottom()), _CMP_LT_OQ)));
        return m;
    }
    case ShapeKind::Circle: {
        const Point c = s.center();
        const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(c.x));
        const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(c.y));
        const __m256d dist = _mm256_sqrt_pd(
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        return _mm256_cmp_pd(dist, _mm256_set1_pd(s.radius()), _CMP_LE_OQ);
    }
    case ShapeKind::Intersect:
        return _mm256_and_pd(shape_mask(s.lhs(), x, y), shape_mask(s.rhs(), x, y));
    case ShapeKind::Union:
        return _mm256_or_pd(shape_mask(s.lhs(), x, y), shape_mask(s.rhs(), x, y));
    case ShapeKind::Full: {
        const __m256d zero = _mm256_setzero_pd();
        return _mm256_cmp_pd(zero, zero, _CMP_EQ_OQ);
    }
    case ShapeKind::Empty:
        return _mm256_setzero_pd();
    }
    return _mm256_setzero_pd();
}

Vec4c gradient_color4(const std::vector<GradientStop>& stops, __m256d t) {
    const __m256d one = _mm256_set1_pd(1.0);
    Vec4c out;
    out.a = _mm256_setzero_pd();
    out.r = _mm256_setzero_pd();
    out.g = _mm256_setzero_pd();
    out.b = _mm256_setzero_pd();
    if (stops.size() == 1) {
        out.a = _mm256_set1_pd(stops[0].color.a);
        out.r = _mm256_set1_pd(stops[0].color.r);
        out.g = _mm256_set1_pd(stops[0].color.g);
        out.b = _mm256_set1_pd(stops[0].color.b);
        return saturate4(out);
    }
    const int n = static_cast<int>(stops.size());
    __m256d done = _mm256_setzero_pd();
    for (int k = 0; k + 1 < n; ++k) {
        // Same segment rule as gradient_segment: first k with t <= offset[k+1],
        // last segment takes the rest.
        __m256d sel;
        if (k + 2 < n) {
            sel = _mm256_cmp_pd(t, _mm256_set1_pd(stops[k + 1].offset), _CMP_LE_OQ);
        } else {
            sel = _mm256_cmp_pd(t, t, _CMP_EQ_OQ);  // all lanes
        }
        sel = _mm256_andnot_pd(done, sel);
        const double span = stops[k + 1].offset - stops[k].offset;
        __m256d u;
        if (span > 0.0) {
            u = _mm256_div_pd(_mm256_sub_pd(t, _mm256_set1_pd(stops[k].offset)),
                              _mm256_set1_pd(span));
        } else {
            u = one;
        }
        u = clamp01(u);
        const __m256d w = _mm256_sub_pd(one, u);
        auto lerp = [&](double c0, double c1) {
            return _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(c0), w),
                                 _mm256_mul_pd(_mm256_set1_pd(c1), u));
        };
        const Color& c0 = stops[k].color;
        const Color& c1 = stops[k + 1].color;
        out.a = _mm256_blendv_pd(out.a, lerp(c0.a, c1.a), sel);
        out.r = _mm256_blendv_pd(out.r, lerp(c0.r, c1.r), sel);
        out.g = _mm256_blendv_pd(out.g, lerp(c0.g, c1.g), sel);
        out.b = _mm256_blendv_pd(out.b, lerp(c0.b, c1.b), sel);
        done = _mm256_or_pd(done, sel);
    }
    return saturate4(out);
}

Vec4c fill_eval4(const Fill& fill, __m256d x, __m256d y) {
    switch (fill.kind()) {
    case Fill::Kind::Solid: {
        const Color& c = fill.solid_color();
        Vec4c out;
        out.a = _mm256_set1_pd(c.a);
        out.r = _mm256_set1_pd(c.r);
        out.g = _mm256_set1_pd(c.g);
        out.b = _mm256_set1_pd(c.b);
        return out;
    }
    case Fill::Kind::LinearGradient: {
        const Point p0 = fill.p0();
        const Point p1 = fill.p1();
        const double dx = p1.x - p0.x;
        const double dy = p1.y - p0.y;
        const double den = dx * dx + dy * dy;
        const __m256d qx = _mm256_sub_pd(x, _mm256_set1_pd(p0.x));
        const __m256d qy = _mm256_sub_pd(y, _mm256_set1_pd(p0.y));
        const __m256d num =
            _mm256_add_pd(_mm256_mul_pd(qx, _mm256_set1_pd(dx)),
                          _mm256_mul_pd(qy, _mm256_set1_pd(dy)));
        __m256d t = _mm256_div_pd(num, _mm256_set1_pd(den));
        t = clamp01(t);
        return gradient_color4(fill.stops(), t);
    }
    case Fill::Kind::RadialGradient: {
        const Point c = fill.center();
        const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(c.x));
        const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(c.y));
        __m256d t = _mm256_div_pd(
            _mm256_sqrt_pd(
                _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy))),
            _mm256_set1_pd(fill.radius()));
        t = clamp01(t);
        return gradient_color4(fill.stops(), t);
    }
    }
    Vec4c zero;
    zero.a = zero.r = zero.g = zero.b = _mm256_setzero_pd();
    return zero;
}

}  // namespace

void eval_span_avx2(const LayerProgram& prog, const double* xs, const double* ys,
                    std::size_t n, Color* out) {
    const std::size_t main = n - n % 4;

    if (main != 0) {
        // Channel-planar span stack: per level, four arrays of `main` doubles.
        const std::size_t plane = main;
        std::vector<double> stack(static_cast<size_t>(prog.stack_depth) * 4 * plane);
        auto chan = [&](int level, int c) {
            return stack.data() + (static_cast<size_t>(level) * 4 + c) * plane;
        };
        int level = -1;

        for (const LayerOp& op : prog.ops) {
            switch (op.kind) {
            case LayerOp::Kind::Push:
                ++level;
                std::fill(chan(level, 0), chan(level, 0) + 4 * plane, 0.0);
                break;
            case LayerOp::Kind::DrawOnto: {
                const Paint& p = op.paint;
                for (std::size_t i = 0; i < main; i += 4) {
                    const __m256d x = _mm256_loadu_pd(xs + i);
                    const __m256d y = _mm256_loadu_pd(ys + i);
                    const __m256d mask = shape_mask(op.shape, x, y);
                    Vec4c src = fill_eval4(p.fill, x, y);
                    src.a = _mm256_and_pd(src.a, mask);
                    src.r = _mm256_and_pd(src.r, mask);
                    src.g = _mm256_and_pd(src.g, mask);
                    src.b = _mm256_and_pd(src.b, mask);
                    Vec4c dst;
                    dst.a = _mm256_loadu_pd(chan(level, 0) + i);
                    dst.r = _mm256_loadu_pd(chan(level, 1) + i);
                    dst.g = _mm256_loadu_pd(chan(level, 2) + i);
                    dst.b = _mm256_loadu_pd(chan(level, 3) + i);
                    const Vec4c res = blend4(p.blend, dst, filter4(p.filter, src));
                    _mm256_storeu_pd(chan(level, 0) + i, res.a);
                    _mm256_storeu_pd(chan(level, 1) + i, res.r);
                    _mm256_storeu_pd(chan(level, 2) + i, res.g);
                    _mm256_storeu_pd(chan(level, 3) + i, res.b);
                }
                break;
            }
            case LayerOp::Kind::BlendPop: {
                const Paint& p = op.paint;
                for (std::size_t i = 0; i < main; i += 4) {
                    Vec4c top;
                    top.a = _mm256_loadu_pd(chan(level, 0) + i);
                    top.r = _mm256_loadu_pd(chan(level, 1) + i);
                    top.g = _mm256_loadu_pd(chan(level, 2) + i);
                    top.b = _mm256_loadu_pd(chan(level, 3) + i);
                    Vec4c below;
                    below.a = _mm256_loadu_pd(chan(level - 1, 0) + i);
                    below.r = _mm256_loadu_pd(chan(level - 1, 1) + i);
                    below.g = _mm256_loadu_pd(chan(level - 1, 2) + i);
                    below.b = _mm256_loadu_pd(chan(level - 1, 3) + i);
                    const Vec4c res = blend4(p.blend, below, filter4(p.filter, top));
                    _mm256_storeu_pd(chan(level - 1, 0) + i, res.a);
                    _mm256_storeu_pd(chan(level - 1, 1) + i, res.r);
                    _mm256_storeu_pd(chan(level - 1, 2) + i, res.g);
                    _mm256_storeu_pd(chan(level - 1, 3) + i, res.b);
                }
                --level;
                break;
            }
            }
        }

        assert(level == 0);
        for (std::size_t i = 0; i < main; ++i) {
            out[i].a = chan(0, 0)[i];
            out[i].r = chan(0, 1)[i];
            out[i].g = chan(0, 2)[i];
            out[i].b = chan(0, 3)[i];
        }
    }

    // Remainder lanes take the scalar path; per-point results are identical.
    if (main != n)
        eval_span_scalar(prog, xs + main, ys + main, n - main, out + main);
}

}  // namespace muskia::kernels

#endif  // MUSKIA_HAVE_AVX2
