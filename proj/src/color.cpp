#include "muskia/color.hpp"

namespace muskia {

const char* blend_mode_name(BlendMode m) {
    switch (m) {
    case BlendMode::SrcOver: return "srcOver";
    case BlendMode::DstIn: return "dstIn";
    case BlendMode::Multiply: return "multiply";
    case BlendMode::SrcOut: return "srcOut";
    }
    return "?";
}

const char* color_filter_name(ColorFilter f) {
    switch (f) {
    case ColorFilter::Id: return "id";
    case ColorFilter::Luma: return "luma";
    }
    return "?";
}

}  // namespace muskia
