// fill.hpp - Fill sources: solid colors and linear/radial gradients.
#pragma once

#include <memory>
#include <vector>

#include "muskia/color.hpp"
#include "muskia/geometry.hpp"

namespace muskia {

struct GradientStop {
    double offset = 0.0;   // in [0, 1]
    Color color;           // premultiplied

    friend bool operator==(const GradientStop&, const GradientStop&) = default;
};

// An immutable fill specification: a color for every point. Gradient stops
// are required to be non-empty with non-decreasing offsets, the first at 0
// and the last at 1 (the loader normalizes documents into this form).
class Fill {
public:
    enum class Kind { Solid, LinearGradient, RadialGradient };

    Fill();  // solid opaque black, the default paint fill

    static Fill solid(Color c);
    static Fill linear_gradient(Point p0, Point p1, std::vector<GradientStop> stops);
    static Fill radial_gradient(Point center, double radius, std::vector<GradientStop> stops);

    Kind kind() const;
    bool is_gradient() const;

    const Color& solid_color() const;               // Solid
    Point p0() const;                               // LinearGradient
    Point p1() const;                               // LinearGradient
    Point center() const;                           // RadialGradient
    double radius() const;                          // RadialGradient
    const std::vector<GradientStop>& stops() const; // gradients

    friend bool operator==(const Fill& a, const Fill& b);

    struct Rep;  // defined in fill.cpp

private:
    std::shared_ptr<const Rep> rep_;
};

// Color of the fill at a point. Gradients clamp the position parameter to
// [0, 1] (pad tiling) and interpolate the premultiplied stop colors linearly.
Color eval_fill(const Fill& fill, Point pt);

// True when the fill can never introduce transparency: an opaque solid color,
// or a gradient whose every stop is opaque.
bool fill_opaque(const Fill& fill);

// Gradient internals, shared with the SIMD kernels so the scalar and vector
// paths pick the same segment and evaluate the same expressions.
int gradient_segment(const std::vector<GradientStop>& stops, double t);
Color gradient_color_at(const std::vector<GradientStop>& stops, double t);

}  // namespace muskia
