// fill.cpp - Fill evaluation. The gradient math here is the scalar reference
// that the AVX2 kernel mirrors; keep expressions and their order in sync.

#include "muskia/fill.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace muskia {

struct Fill::Rep {
    Kind kind = Kind::Solid;
    Color color;
    Point p0{}, p1{};
    Point center{};
    double radius = 0.0;
    std::vector<GradientStop> stops;
};

namespace {

void check_stops(const std::vector<GradientStop>& stops) {
    assert(!stops.empty());
    assert(stops.front().offset == 0.0);
    assert(stops.back().offset == 1.0);
    for (size_t i = 0; i + 1 < stops.size(); ++i)
        assert(stops[i].offset <= stops[i + 1].offset);
    (void)stops;
}

const std::shared_ptr<const Fill::Rep>& default_rep() {
    static const auto rep = [] {
        auto r = std::make_shared<Fill::Rep>();
        r->kind = Fill::Kind::Solid;
        r->color = Color{1.0, 0.0, 0.0, 0.0};  // opaque black
        return std::shared_ptr<const Fill::Rep>(r);
    }();
    return rep;
}

}  // namespace

Fill::Fill() : rep_(default_rep()) {}

Fill Fill::solid(Color c) {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::Solid;
    r->color = c;
    Fill f;
    f.rep_ = std::move(r);
    return f;
}

Fill Fill::linear_gradient(Point p0, Point p1, std::vector<GradientStop> stops) {
    assert(!(p0 == p1));
    check_stops(stops);
    auto r = std::make_shared<Rep>();
    r->kind = Kind::LinearGradient;
    r->p0 = p0;
    r->p1 = p1;
    r->stops = std::move(stops);
    Fill f;
    f.rep_ = std::move(r);
    return f;
}

Fill Fill::radial_gradient(Point center, double radius, std::vector<GradientStop> stops) {
    assert(radius > 0.0);
    check_stops(stops);
    auto r = std::make_shared<Rep>();
    r->kind = Kind::RadialGradient;
    r->center = center;
    r->radius = radius;
    r->stops = std::move(stops);
    Fill f;
    f.rep_ = std::move(r);
    return f;
}

Fill::Kind Fill::kind() const { return rep_->kind; }
bool Fill::is_gradient() const { return rep_->kind != Kind::Solid; }
const Color& Fill::solid_color() const { return rep_->color; }
Point Fill::p0() const { return rep_->p0; }
Point Fill::p1() const { return rep_->p1; }
Point Fill::center() const { return rep_->center; }
double Fill::radius() const { return rep_->radius; }
const std::vector<GradientStop>& Fill::stops() const { return rep_->stops; }

bool operator==(const Fill& a, const Fill& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Fill::Kind::Solid:
        return a.solid_color() == b.solid_color();
    case Fill::Kind::LinearGradient:
        return a.p0() == b.p0() && a.p1() == b.p1() && a.stops() == b.stops();
    case Fill::Kind::RadialGradient:
        return a.center() == b.center() && a.radius() == b.radius() &&
               a.stops() == b.stops();
    }
    return false;
}

int gradient_segment(const std::vector<GradientStop>& stops, double t) {
    // First segment whose upper offset reaches t; the final segment catches
    // everything else. Zero-width segments resolve to their upper stop.
    const int n = static_cast<int>(stops.size());
    int k = 0;
    while (k + 2 < n && t > stops[k + 1].offset) ++k;
    return k;
}

Color gradient_color_at(const std::vector<GradientStop>& stops, double t) {
    if (stops.size() == 1) return saturate(stops[0].color);
    const int k = gradient_segment(stops, t);
    const GradientStop& s0 = stops[k];
    const GradientStop& s1 = stops[k + 1];
    const double span = s1.offset - s0.offset;
    double u = span > 0.0 ? (t - s0.offset) / span : 1.0;
    u = std::min(std::max(u, 0.0), 1.0);
    const double w = 1.0 - u;
    Color out;
    out.a = s0.color.a * w + s1.color.a * u;
    out.r = s0.color.r * w + s1.color.r * u;
    out.g = s0.color.g * w + s1.color.g * u;
    out.b = s0.color.b * w + s1.color.b * u;
    return saturate(out);
}

Color eval_fill(const Fill& fill, Point pt) {
    switch (fill.kind()) {
    case Fill::Kind::Solid:
        return fill.solid_color();
    case Fill::Kind::LinearGradient: {
        const Point p0 = fill.p0();
        const Point p1 = fill.p1();
        const double dx = p1.x - p0.x;
        const double dy = p1.y - p0.y;
        const double den = dx * dx + dy * dy;
        const double qx = pt.x - p0.x;
        const double qy = pt.y - p0.y;
        const double num = qx * dx + qy * dy;
        double t = num / den;
        t = std::min(std::max(t, 0.0), 1.0);
        return gradient_color_at(fill.stops(), t);
    }
    case Fill::Kind::RadialGradient: {
        const Point c = fill.center();
        const double dx = pt.x - c.x;
        const double dy = pt.y - c.y;
        double t = std::sqrt(dx * dx + dy * dy) / fill.radius();
        t = std::min(std::max(t, 0.0), 1.0);
        return gradient_color_at(fill.stops(), t);
    }
    }
    return kTransparent;
}

bool fill_opaque(const Fill& fill) {
    if (fill.kind() == Fill::Kind::Solid) return is_opaque(fill.solid_color());
    for (const GradientStop& s : fill.stops())
        if (!is_opaque(s.color)) return false;
    return true;
}

}  // namespace muskia
