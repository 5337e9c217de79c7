// geometry.cpp - Shape term construction, membership, intersection, bounds.

#include "muskia/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace muskia {

struct Shape::Node {
    ShapeKind kind = ShapeKind::Empty;
    double left = 0.0, top = 0.0, right = 0.0, bottom = 0.0;
    Point center{};
    double radius = 0.0;
    std::shared_ptr<const Node> lhs_child;
    std::shared_ptr<const Node> rhs_child;
};

namespace {

const std::shared_ptr<const Shape::Node>& full_node() {
    static const auto node = [] {
        auto n = std::make_shared<Shape::Node>();
        n->kind = ShapeKind::Full;
        return std::shared_ptr<const Shape::Node>(n);
    }();
    return node;
}

const std::shared_ptr<const Shape::Node>& empty_node() {
    static const auto node = [] {
        auto n = std::make_shared<Shape::Node>();
        n->kind = ShapeKind::Empty;
        return std::shared_ptr<const Shape::Node>(n);
    }();
    return node;
}

}  // namespace

Shape::Shape() : node_(empty_node()) {}
Shape::Shape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Shape Shape::rect(double left, double top, double right, double bottom) {
    assert(left <= right && top <= bottom);
    auto n = std::make_shared<Node>();
    n->kind = ShapeKind::Rect;
    n->left = left;
    n->top = top;
    n->right = right;
    n->bottom = bottom;
    return Shape(std::move(n));
}

Shape Shape::circle(Point center, double radius) {
    assert(radius >= 0.0);
    auto n = std::make_shared<Node>();
    n->kind = ShapeKind::Circle;
    n->center = center;
    n->radius = radius;
    return Shape(std::move(n));
}

Shape Shape::full() { return Shape(full_node()); }
Shape Shape::empty() { return Shape(empty_node()); }

Shape Shape::union_of(Shape lhs, Shape rhs) {
    auto n = std::make_shared<Node>();
    n->kind = ShapeKind::Union;
    n->lhs_child = std::move(lhs.node_);
    n->rhs_child = std::move(rhs.node_);
    return Shape(std::move(n));
}

ShapeKind Shape::kind() const { return node_->kind; }
double Shape::left() const { return node_->left; }
double Shape::top() const { return node_->top; }
double Shape::right() const { return node_->right; }
double Shape::bottom() const { return node_->bottom; }
Point Shape::center() const { return node_->center; }
double Shape::radius() const { return node_->radius; }
Shape Shape::lhs() const { return Shape(node_->lhs_child); }
Shape Shape::rhs() const { return Shape(node_->rhs_child); }

namespace {

bool node_contains(const Shape::Node& n, Point pt);

}  // namespace

bool Shape::contains(Point pt) const { return node_contains(*node_, pt); }

namespace {

bool node_contains(const Shape::Node& n, Point pt) {
    switch (n.kind) {
    case ShapeKind::Rect:
        return n.left <= pt.x && pt.x < n.right && n.top <= pt.y && pt.y < n.bottom;
    case ShapeKind::Circle: {
        // Keep this expression in sync with the SIMD membership kernel.
        const double dx = pt.x - n.center.x;
        const double dy = pt.y - n.center.y;
        return std::sqrt(dx * dx + dy * dy) <= n.radius;
    }
    case ShapeKind::Intersect:
        return node_contains(*n.lhs_child, pt) && node_contains(*n.rhs_child, pt);
    case ShapeKind::Union:
        return node_contains(*n.lhs_child, pt) || node_contains(*n.rhs_child, pt);
    case ShapeKind::Full:
        return true;
    case ShapeKind::Empty:
        return false;
    }
    return false;
}

}  // namespace

bool operator==(const Shape& a, const Shape& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ShapeKind::Rect:
        return a.left() == b.left() && a.top() == b.top() &&
               a.right() == b.right() && a.bottom() == b.bottom();
    case ShapeKind::Circle:
        return a.center() == b.center() && a.radius() == b.radius();
    case ShapeKind::Intersect:
    case ShapeKind::Union:
        return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case ShapeKind::Full:
    case ShapeKind::Empty:
        return true;
    }
    return false;
}

Shape shape_intersect(const Shape& a, const Shape& b) {
    if (a.kind() == ShapeKind::Full) return b;
    if (b.kind() == ShapeKind::Full) return a;
    if (a.kind() == ShapeKind::Empty || b.kind() == ShapeKind::Empty)
        return Shape::empty();
    if (a.kind() == ShapeKind::Rect && b.kind() == ShapeKind::Rect) {
        const double l = std::max(a.left(), b.left());
        const double t = std::max(a.top(), b.top());
        const double r = std::min(a.right(), b.right());
        const double bo = std::min(a.bottom(), b.bottom());
        // Half-open on the right/bottom edge, so a zero-width strip is empty.
        if (l >= r || t >= bo) return Shape::empty();
        return Shape::rect(l, t, r, bo);
    }
    auto n = std::make_shared<Shape::Node>();
    n->kind = ShapeKind::Intersect;
    n->lhs_child = a.node_;
    n->rhs_child = b.node_;
    return Shape(std::move(n));
}

namespace {

Bounds box(double l, double t, double r, double b) {
    Bounds out;
    out.kind = Bounds::Kind::Box;
    out.left = l;
    out.top = t;
    out.right = r;
    out.bottom = b;
    return out;
}

Bounds bounds_union(const Bounds& a, const Bounds& b) {
    if (a.kind == Bounds::Kind::Unbounded || b.kind == Bounds::Kind::Unbounded) {
        Bounds out;
        out.kind = Bounds::Kind::Unbounded;
        return out;
    }
    if (a.kind == Bounds::Kind::Empty) return b;
    if (b.kind == Bounds::Kind::Empty) return a;
    return box(std::min(a.left, b.left), std::min(a.top, b.top),
               std::max(a.right, b.right), std::max(a.bottom, b.bottom));
}

Bounds bounds_intersect(const Bounds& a, const Bounds& b) {
    if (a.kind == Bounds::Kind::Empty || b.kind == Bounds::Kind::Empty) return Bounds{};
    if (a.kind == Bounds::Kind::Unbounded) return b;
    if (b.kind == Bounds::Kind::Unbounded) return a;
    const double l = std::max(a.left, b.left);
    const double t = std::max(a.top, b.top);
    const double r = std::min(a.right, b.right);
    const double bo = std::min(a.bottom, b.bottom);
    if (l > r || t > bo) return Bounds{};
    return box(l, t, r, bo);
}

}  // namespace

Bounds shape_bounds(const Shape& s) {
    switch (s.kind()) {
    case ShapeKind::Rect:
        return box(s.left(), s.top(), s.right(), s.bottom());
    case ShapeKind::Circle:
        return box(s.center().x - s.radius(), s.center().y - s.radius(),
                   s.center().x + s.radius(), s.center().y + s.radius());
    case ShapeKind::Intersect:
        return bounds_intersect(shape_bounds(s.lhs()), shape_bounds(s.rhs()));
    case ShapeKind::Union:
        return bounds_union(shape_bounds(s.lhs()), shape_bounds(s.rhs()));
    case ShapeKind::Full: {
        Bounds out;
        out.kind = Bounds::Kind::Unbounded;
        return out;
    }
    case ShapeKind::Empty:
        return Bounds{};
    }
    return Bounds{};
}

bool bounds_contains(const Bounds& b, Point pt) {
    switch (b.kind) {
    case Bounds::Kind::Empty:
        return false;
    case Bounds::Kind::Unbounded:
        return true;
    case Bounds::Kind::Box:
        return b.left <= pt.x && pt.x <= b.right && b.top <= pt.y && pt.y <= b.bottom;
    }
    return false;
}

double bounds_clipped_area(const Bounds& b, double width, double height) {
    if (b.kind == Bounds::Kind::Empty) return 0.0;
    if (b.kind == Bounds::Kind::Unbounded) return width * height;
    const double l = std::max(b.left, 0.0);
    const double t = std::max(b.top, 0.0);
    const double r = std::min(b.right, width);
    const double bo = std::min(b.bottom, height);
    return std::max(0.0, r - l) * std::max(0.0, bo - t);
}

}  // namespace muskia
