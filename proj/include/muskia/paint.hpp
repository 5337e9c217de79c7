// paint.hpp - Paint: how a draw or layer blend is performed.
#pragma once

#include "muskia/color.hpp"
#include "muskia/fill.hpp"

namespace muskia {

struct Paint {
    Fill fill;                                  // defaults to solid opaque black
    ColorFilter filter = ColorFilter::Id;
    BlendMode blend = BlendMode::SrcOver;

    friend bool operator==(const Paint&, const Paint&) = default;
};

inline Paint make_paint(Fill fill, BlendMode blend = BlendMode::SrcOver,
                        ColorFilter filter = ColorFilter::Id) {
    Paint p;
    p.fill = std::move(fill);
    p.blend = blend;
    p.filter = filter;
    return p;
}

}  // namespace muskia
