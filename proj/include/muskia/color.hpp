// color.hpp - Premultiplied ARGB colors, Porter-Duff blends, color filters.
#pragma once

#include <algorithm>
#include <cmath>

namespace muskia {

// Premultiplied color: r, g, b are pre-scaled by a, so 0 <= r,g,b <= a <= 1.
// All channels are finite doubles; there is no quantization anywhere in the
// pipeline until pixels are written out.
struct Color {
    double a = 0.0;
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    friend bool operator==(const Color&, const Color&) = default;
};

inline constexpr Color kTransparent{0.0, 0.0, 0.0, 0.0};

// Alpha within this distance of 1.0 still counts as opaque, so a color that
// went through a serialization round trip keeps its opacity class.
inline constexpr double kOpaqueEps = 1e-6;

enum class BlendMode { SrcOver, DstIn, Multiply, SrcOut };
enum class ColorFilter { Id, Luma };

inline bool is_opaque(const Color& c) { return c.a >= 1.0 - kOpaqueEps; }

inline bool color_valid(const Color& c) {
    return std::isfinite(c.a) && std::isfinite(c.r) && std::isfinite(c.g) &&
           std::isfinite(c.b) && c.a >= 0.0 && c.a <= 1.0 && c.r >= 0.0 &&
           c.r <= c.a && c.g >= 0.0 && c.g <= c.a && c.b >= 0.0 && c.b <= c.a;
}

// Clamps rounding spill back into the premultiplied range. The blend and
// filter formulas are closed over valid colors in exact arithmetic; this
// keeps them closed in doubles too (corrections are at most one ulp).
inline Color saturate(Color c) {
    c.a = std::min(std::max(c.a, 0.0), 1.0);
    c.r = std::min(std::max(c.r, 0.0), c.a);
    c.g = std::min(std::max(c.g, 0.0), c.a);
    c.b = std::min(std::max(c.b, 0.0), c.a);
    return c;
}

// Porter-Duff blending on premultiplied colors. Argument order is
// (destination, source): dst is the existing content, src the color applied
// on top of it.
//
//   SrcOver:  out = src + dst * (1 - src.a)
//   DstIn:    out = dst * src.a
//   SrcOut:   out = src * (1 - dst.a)
//   Multiply: out.c = src.c * dst.c + src.c * (1 - dst.a) + dst.c * (1 - src.a)
//             out.a = src.a + dst.a * (1 - src.a)
//
// The SIMD kernels mirror these expressions operation for operation; keep the
// evaluation order stable when editing.
inline Color blend(BlendMode mode, const Color& dst, const Color& src) {
    Color out;
    switch (mode) {
    case BlendMode::SrcOver: {
        const double isa = 1.0 - src.a;
        out.a = src.a + dst.a * isa;
        out.r = src.r + dst.r * isa;
        out.g = src.g + dst.g * isa;
        out.b = src.b + dst.b * isa;
        break;
    }
    case BlendMode::DstIn: {
        out.a = dst.a * src.a;
        out.r = dst.r * src.a;
        out.g = dst.g * src.a;
        out.b = dst.b * src.a;
        break;
    }
    case BlendMode::SrcOut: {
        const double ida = 1.0 - dst.a;
        out.a = src.a * ida;
        out.r = src.r * ida;
        out.g = src.g * ida;
        out.b = src.b * ida;
        break;
    }
    case BlendMode::Multiply: {
        const double ida = 1.0 - dst.a;
        const double isa = 1.0 - src.a;
        out.a = src.a + dst.a * isa;
        out.r = src.r * dst.r + src.r * ida + dst.r * isa;
        out.g = src.g * dst.g + src.g * ida + dst.g * isa;
        out.b = src.b * dst.b + src.b * ida + dst.b * isa;
        break;
    }
    }
    return saturate(out);
}

// Luma converts Rec.709 luminance of the premultiplied channels into alpha
// with the color channels zeroed; Id is the identity.
inline Color apply_filter(ColorFilter f, const Color& c) {
    if (f == ColorFilter::Id) return c;
    const double y = 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
    Color out;
    out.a = std::min(std::max(y, 0.0), 1.0);
    return out;
}

const char* blend_mode_name(BlendMode);
const char* color_filter_name(ColorFilter);

}  // namespace muskia
