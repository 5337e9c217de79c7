// layer.hpp - Layer terms and their denotation to point -> color functions.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "muskia/color.hpp"
#include "muskia/geometry.hpp"
#include "muskia/paint.hpp"

namespace muskia {

// A layer is an inductive term: the empty layer, a shape drawn onto a base
// layer, or one layer blended onto another. Its meaning is a color for every
// point (see denote below). Terms are immutable and freely shareable.
class Layer {
public:
    enum class Kind { Empty, Draw, Blend };

    Layer();  // empty

    static Layer empty();
    static Layer draw(Layer base, Shape shape, Paint paint);
    static Layer blend_layers(Layer bottom, Layer top, Paint paint);

    Kind kind() const;
    bool is_empty() const { return kind() == Kind::Empty; }

    Layer base() const;           // Draw
    Layer bottom() const;         // Blend
    Layer top() const;            // Blend
    const Shape& shape() const;   // Draw
    const Paint& paint() const;   // Draw or Blend

    struct Node;  // defined in layer.cpp

private:
    explicit Layer(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

// The denotation:
//   Empty                  |-> Transparent
//   Blend(bot, top, p)     |-> blend_p(denote(bot), filter_p(denote(top)))
//   Draw(base, s, p)       |-> blend_p(denote(base),
//                                filter_p(inside s ? fill_p(pt) : Transparent))
// The blend applies even outside s: the filter and blend see a transparent
// source there, which matters for masking blends like DstIn.
Color denote(const Layer& layer, Point pt);

// Intersects the shape of every draw in a blend-free term with `mask`.
// Throws std::invalid_argument when the term contains a Blend node.
Layer clip_all(const Layer& layer, const Shape& mask);

// Sampled extensional equivalence. The sample set always includes the shape
// corners of both terms jittered by +-corner_jitter (disagreements cluster at
// shape boundaries), plus seeded uniform points over the terms' bounds.
struct EquivSampling {
    double corner_jitter = 1e-3;
    int random_points = 1024;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    std::size_t max_corner_samples = 20000;
};

struct EquivResult {
    bool equivalent = true;
    double max_delta = 0.0;  // largest per-channel |difference| seen
    Point worst{};           // a point attaining max_delta
};

EquivResult layer_equiv_sampled(const Layer& a, const Layer& b, double tol,
                                const EquivSampling& sampling = {});

// Deterministic adversarial sample points for a pair of terms (shape corners
// with jitter). Exposed so tests and the validator share one definition.
std::vector<Point> adversarial_points(const Layer& a, const Layer& b,
                                      const EquivSampling& sampling);

}  // namespace muskia
