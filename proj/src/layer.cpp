// layer.cpp - Layer term construction, denotation, clipAll, equivalence sampling.

#include "muskia/layer.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace muskia {

struct Layer::Node {
    Kind kind = Kind::Empty;
    std::shared_ptr<const Node> first;   // Draw: base, Blend: bottom
    std::shared_ptr<const Node> second;  // Blend: top
    Shape shape;
    Paint paint;

    ~Node() {
        // Draw chains can be as long as the program that built them; release
        // them iteratively so teardown does not recurse per node.
        std::vector<std::shared_ptr<const Node>> work;
        auto grab = [&work](std::shared_ptr<const Node>& p) {
            if (p && p.use_count() == 1) work.push_back(std::move(p));
            p.reset();
        };
        grab(first);
        grab(second);
        while (!work.empty()) {
            std::shared_ptr<const Node> n = std::move(work.back());
            work.pop_back();
            auto* m = const_cast<Node*>(n.get());
            grab(m->first);
            grab(m->second);
        }
    }
};

namespace {

const std::shared_ptr<const Layer::Node>& empty_node() {
    static const auto node = [] {
        return std::shared_ptr<const Layer::Node>(std::make_shared<Layer::Node>());
    }();
    return node;
}

}  // namespace

Layer::Layer() : node_(empty_node()) {}
Layer::Layer(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Layer Layer::empty() { return Layer(empty_node()); }

Layer Layer::draw(Layer base, Shape shape, Paint paint) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Draw;
    n->first = std::move(base.node_);
    n->shape = std::move(shape);
    n->paint = std::move(paint);
    return Layer(std::move(n));
}

Layer Layer::blend_layers(Layer bottom, Layer top, Paint paint) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Blend;
    n->first = std::move(bottom.node_);
    n->second = std::move(top.node_);
    n->paint = std::move(paint);
    return Layer(std::move(n));
}

Layer::Kind Layer::kind() const { return node_->kind; }

Layer Layer::base() const {
    assert(kind() == Kind::Draw);
    return Layer(node_->first);
}

Layer Layer::bottom() const {
    assert(kind() == Kind::Blend);
    return Layer(node_->first);
}

Layer Layer::top() const {
    assert(kind() == Kind::Blend);
    return Layer(node_->second);
}

const Shape& Layer::shape() const { return node_->shape; }
const Paint& Layer::paint() const { return node_->paint; }

Color denote(const Layer& layer, Point pt) {
    switch (layer.kind()) {
    case Layer::Kind::Empty:
        return kTransparent;
    case Layer::Kind::Blend: {
        const Paint& p = layer.paint();
        const Color bot = denote(layer.bottom(), pt);
        const Color top = denote(layer.top(), pt);
        return blend(p.blend, bot, apply_filter(p.filter, top));
    }
    case Layer::Kind::Draw: {
        const Paint& p = layer.paint();
        const Color base = denote(layer.base(), pt);
        const Color src =
            layer.shape().contains(pt) ? eval_fill(p.fill, pt) : kTransparent;
        return blend(p.blend, base, apply_filter(p.filter, src));
    }
    }
    return kTransparent;
}

Layer clip_all(const Layer& layer, const Shape& mask) {
    switch (layer.kind()) {
    case Layer::Kind::Empty:
        return Layer::empty();
    case Layer::Kind::Draw:
        return Layer::draw(clip_all(layer.base(), mask),
                           shape_intersect(layer.shape(), mask), layer.paint());
    case Layer::Kind::Blend:
        throw std::invalid_argument("clip_all is not defined on blend layers");
    }
    return Layer::empty();
}

namespace {

void collect_corners(const Shape& s, std::vector<Point>& out) {
    switch (s.kind()) {
    case ShapeKind::Rect:
        out.push_back({s.left(), s.top()});
        out.push_back({s.right(), s.top()});
        out.push_back({s.left(), s.bottom()});
        out.push_back({s.right(), s.bottom()});
        break;
    case ShapeKind::Circle: {
        const Point c = s.center();
        const double r = s.radius();
        out.push_back(c);
        out.push_back({c.x - r, c.y});
        out.push_back({c.x + r, c.y});
        out.push_back({c.x, c.y - r});
        out.push_back({c.x, c.y + r});
        break;
    }
    case ShapeKind::Intersect:
    case ShapeKind::Union:
        collect_corners(s.lhs(), out);
        collect_corners(s.rhs(), out);
        break;
    case ShapeKind::Full:
    case ShapeKind::Empty:
        break;
    }
}

void collect_layer_corners(const Layer& layer, std::vector<Point>& out) {
    Layer cur = layer;
    for (;;) {
        switch (cur.kind()) {
        case Layer::Kind::Empty:
            return;
        case Layer::Kind::Draw:
            collect_corners(cur.shape(), out);
            cur = cur.base();
            break;
        case Layer::Kind::Blend:
            collect_layer_corners(cur.top(), out);
            cur = cur.bottom();
            break;
        }
    }
}

Bounds layer_bounds(const Layer& layer) {
    Bounds acc;
    auto merge = [&acc](const Bounds& b) {
        if (b.kind == Bounds::Kind::Unbounded) {
            acc.kind = Bounds::Kind::Unbounded;
        } else if (b.kind == Bounds::Kind::Box && acc.kind != Bounds::Kind::Unbounded) {
            if (acc.kind == Bounds::Kind::Empty) {
                acc = b;
            } else {
                acc.left = std::min(acc.left, b.left);
                acc.top = std::min(acc.top, b.top);
                acc.right = std::max(acc.right, b.right);
                acc.bottom = std::max(acc.bottom, b.bottom);
            }
        }
    };
    Layer cur = layer;
    for (;;) {
        switch (cur.kind()) {
        case Layer::Kind::Empty:
            return acc;
        case Layer::Kind::Draw:
            merge(shape_bounds(cur.shape()));
            cur = cur.base();
            break;
        case Layer::Kind::Blend:
            merge(layer_bounds(cur.top()));
            cur = cur.bottom();
            break;
        }
    }
}

}  // namespace

std::vector<Point> adversarial_points(const Layer& a, const Layer& b,
                                      const EquivSampling& sampling) {
    std::vector<Point> corners;
    collect_layer_corners(a, corners);
    collect_layer_corners(b, corners);
    std::vector<Point> out;
    out.reserve(std::min(corners.size() * 9, sampling.max_corner_samples));
    const double d = sampling.corner_jitter;
    const double offs[3] = {-d, 0.0, d};
    for (const Point& c : corners) {
        for (double ox : offs) {
            for (double oy : offs) {
                if (out.size() >= sampling.max_corner_samples) return out;
                out.push_back({c.x + ox, c.y + oy});
            }
        }
    }
    return out;
}

EquivResult layer_equiv_sampled(const Layer& a, const Layer& b, double tol,
                                const EquivSampling& sampling) {
    EquivResult res;
    auto probe = [&](Point pt) {
        const Color ca = denote(a, pt);
        const Color cb = denote(b, pt);
        const double deltas[4] = {std::abs(ca.a - cb.a), std::abs(ca.r - cb.r),
                                  std::abs(ca.g - cb.g), std::abs(ca.b - cb.b)};
        for (double d : deltas) {
            if (d > res.max_delta) {
                res.max_delta = d;
                res.worst = pt;
            }
        }
    };

    for (const Point& pt : adversarial_points(a, b, sampling)) probe(pt);

    // Uniform samples over the joint bounds, inflated so that points just
    // outside every shape are also exercised.
    Bounds domain = layer_bounds(a);
    {
        const Bounds db = layer_bounds(b);
        if (db.kind == Bounds::Kind::Unbounded) domain.kind = Bounds::Kind::Unbounded;
        else if (db.kind == Bounds::Kind::Box) {
            if (domain.kind == Bounds::Kind::Empty) domain = db;
            else if (domain.kind == Bounds::Kind::Box) {
                domain.left = std::min(domain.left, db.left);
                domain.top = std::min(domain.top, db.top);
                domain.right = std::max(domain.right, db.right);
                domain.bottom = std::max(domain.bottom, db.bottom);
            }
        }
    }
    double l = -512.0, t = -512.0, r = 512.0, bo = 512.0;
    if (domain.kind == Bounds::Kind::Box) {
        l = domain.left - 16.0;
        t = domain.top - 16.0;
        r = domain.right + 16.0;
        bo = domain.bottom + 16.0;
    }
    std::mt19937_64 rng(sampling.seed);
    std::uniform_real_distribution<double> ux(l, r);
    std::uniform_real_distribution<double> uy(t, bo);
    for (int i = 0; i < sampling.random_points; ++i) probe({ux(rng), uy(rng)});

    res.equivalent = res.max_delta <= tol;
    return res;
}

}  // namespace muskia
