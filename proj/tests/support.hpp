// support.hpp - Shared generators for the test suites.
#pragma once

#include <random>

#include "muskia/command.hpp"
#include "muskia/layer.hpp"

namespace muskia::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Color premul(double a, double r, double g, double b) {
    Color c;
    c.a = a;
    c.r = a * r;
    c.g = a * g;
    c.b = a * b;
    return c;
}

// Valid premultiplied color with unconstrained alpha.
inline Color random_color(Rng& rng) {
    return premul(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0),
                  uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
}

inline Color random_opaque(Rng& rng) {
    return premul(1.0, uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0),
                  uniform(rng, 0.0, 1.0));
}

inline Shape random_rect(Rng& rng, double extent = 200.0) {
    const double l = uniform(rng, -20.0, extent);
    const double t = uniform(rng, -20.0, extent);
    return Shape::rect(l, t, l + uniform(rng, 1.0, 60.0), t + uniform(rng, 1.0, 60.0));
}

inline Shape random_circle(Rng& rng) {
    return Shape::circle({uniform(rng, 0.0, 220.0), uniform(rng, 0.0, 220.0)},
                         uniform(rng, 0.5, 40.0));
}

inline Shape random_shape(Rng& rng, int depth = 2) {
    const int pick = uniform_int(rng, 0, depth > 0 ? 5 : 2);
    switch (pick) {
    case 0:
    case 1:
        return random_rect(rng);
    case 2:
        return random_circle(rng);
    case 3:
        return shape_intersect(random_shape(rng, depth - 1), random_shape(rng, depth - 1));
    case 4:
        return Shape::union_of(random_shape(rng, depth - 1), random_shape(rng, depth - 1));
    default:
        return uniform_int(rng, 0, 1) ? Shape::full() : Shape::empty();
    }
}

inline std::vector<GradientStop> random_stops(Rng& rng, bool opaque = false) {
    const int n = uniform_int(rng, 2, 4);
    std::vector<GradientStop> stops(n);
    for (int i = 0; i < n; ++i) {
        stops[i].offset = i == 0 ? 0.0 : (i == n - 1 ? 1.0 : uniform(rng, 0.2, 0.8));
        stops[i].color = opaque ? random_opaque(rng) : random_color(rng);
    }
    if (n == 4 && stops[1].offset > stops[2].offset)
        std::swap(stops[1].offset, stops[2].offset);
    return stops;
}

inline Fill random_fill(Rng& rng) {
    switch (uniform_int(rng, 0, 3)) {
    case 0: {
        const Point p0{uniform(rng, 0.0, 100.0), uniform(rng, 0.0, 100.0)};
        return Fill::linear_gradient(p0, {p0.x + uniform(rng, 1.0, 80.0),
                                          p0.y + uniform(rng, 1.0, 80.0)},
                                     random_stops(rng));
    }
    case 1:
        return Fill::radial_gradient({uniform(rng, 20.0, 200.0), uniform(rng, 20.0, 200.0)},
                                     uniform(rng, 5.0, 80.0), random_stops(rng));
    default:
        return Fill::solid(random_color(rng));
    }
}

inline Paint random_paint(Rng& rng) {
    const BlendMode blends[4] = {BlendMode::SrcOver, BlendMode::DstIn,
                                 BlendMode::Multiply, BlendMode::SrcOut};
    return make_paint(random_fill(rng), blends[uniform_int(rng, 0, 3)],
                      uniform_int(rng, 0, 3) == 0 ? ColorFilter::Luma : ColorFilter::Id);
}

// Blend-free draw chain of the given length.
inline Layer random_draw_chain(Rng& rng, int draws, BlendMode blend = BlendMode::SrcOver) {
    Layer l = Layer::empty();
    for (int i = 0; i < draws; ++i)
        l = Layer::draw(l, random_shape(rng), make_paint(random_fill(rng), blend));
    return l;
}

// Arbitrary small layer term, blends included.
inline Layer random_layer(Rng& rng, int depth = 3) {
    if (depth <= 0 || uniform_int(rng, 0, 3) == 0)
        return random_draw_chain(rng, uniform_int(rng, 0, 3));
    if (uniform_int(rng, 0, 1) == 0)
        return Layer::draw(random_layer(rng, depth - 1), random_shape(rng),
                           random_paint(rng));
    return Layer::blend_layers(random_layer(rng, depth - 1),
                               random_layer(rng, depth - 1), random_paint(rng));
}

// Random balanced program.
inline Program random_program(Rng& rng, int max_len = 24) {
    Program p;
    int open = 0;
    const int target = uniform_int(rng, 0, max_len);
    while (static_cast<int>(p.commands.size()) < target) {
        switch (uniform_int(rng, 0, 7)) {
        case 0:
        case 1:
        case 2:
            p.commands.push_back(Command::draw(random_shape(rng), random_paint(rng)));
            break;
        case 3:
            p.commands.push_back(Command::clip(random_rect(rng)));
            break;
        case 4:
            p.commands.push_back(Command::save());
            ++open;
            break;
        case 5:
            p.commands.push_back(Command::save_layer(random_paint(rng)));
            ++open;
            break;
        default:
            if (open > 0) {
                p.commands.push_back(Command::restore());
                --open;
            } else {
                p.commands.push_back(Command::draw(random_shape(rng), random_paint(rng)));
            }
            break;
        }
    }
    while (open-- > 0) p.commands.push_back(Command::restore());
    return p;
}

}  // namespace muskia::test
