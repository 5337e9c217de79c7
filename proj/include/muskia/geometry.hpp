// geometry.hpp - Points and shape terms: membership, intersection, bounds.
#pragma once

#include <memory>

namespace muskia {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

enum class ShapeKind { Rect, Circle, Intersect, Union, Full, Empty };

// A shape is a point predicate realized as an immutable closed term:
// axis-aligned rects (half-open), circles (closed), boolean combinations,
// and the universal/empty shapes. Terms are shared and never mutated, so
// Shape values are cheap to copy and safe to use across threads.
class Shape {
public:
    Shape();  // the empty shape

    static Shape rect(double left, double top, double right, double bottom);
    static Shape circle(Point center, double radius);
    static Shape full();
    static Shape empty();
    static Shape union_of(Shape lhs, Shape rhs);

    ShapeKind kind() const;

    // Rect accessors (kind() == Rect).
    double left() const;
    double top() const;
    double right() const;
    double bottom() const;

    // Circle accessors (kind() == Circle).
    Point center() const;
    double radius() const;

    // Child accessors (kind() == Intersect or Union).
    Shape lhs() const;
    Shape rhs() const;

    // Rect membership is half-open: left <= x < right, top <= y < bottom.
    // Circle membership is closed: |pt - center| <= radius.
    bool contains(Point pt) const;

    friend bool operator==(const Shape& a, const Shape& b);  // structural

    struct Node;  // defined in geometry.cpp

private:
    explicit Shape(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;

    friend Shape shape_intersect(const Shape&, const Shape&);
};

// Pointwise conjunction with simplification: Full is the unit, Empty absorbs,
// and Rect/Rect folds to a single Rect (or Empty when the overlap is
// degenerate). Anything else builds an Intersect node.
Shape shape_intersect(const Shape& a, const Shape& b);

// Conservative axis-aligned bounding box: every member point lies inside.
struct Bounds {
    enum class Kind { Empty, Box, Unbounded };
    Kind kind = Kind::Empty;
    double left = 0.0, top = 0.0, right = 0.0, bottom = 0.0;  // Kind::Box only
};

Bounds shape_bounds(const Shape& s);

// Membership test against a Bounds box (closed on all edges).
bool bounds_contains(const Bounds& b, Point pt);

// Area of the bounds clipped to the [0,width] x [0,height] viewport.
double bounds_clipped_area(const Bounds& b, double width, double height);

}  // namespace muskia
