// raster.hpp - Reference rasterizer: pixel-center sampling of the denotation,
// image diffing, and PPM I/O.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskia/command.hpp"
#include "muskia/kernels.hpp"

namespace muskia {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<Color> pixels;  // row-major, top row first

    Color& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    const Color& at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * width + x];
    }
};

struct RasterOptions {
    kernels::Backend backend = kernels::Backend::Auto;
    int threads = 0;  // 0 = hardware concurrency
};

// Pixel (i, j) is the exact denotation of the program's final layer at the
// pixel center (i + 0.5, j + 0.5): point sampling, no anti-aliasing, no
// gamma. The result is bit-identical regardless of backend or thread count.
RasterImage rasterize(const Program& p, int width, int height,
                      const RasterOptions& opts = {});

struct DiffReport {
    long long differing_pixels = 0;
    double max_channel_delta = 0.0;
    long long total_pixels = 0;
    int worst_x = -1, worst_y = -1;  // a pixel attaining max_channel_delta
};

// AE-style diff: counts pixels whose channels differ by more than `fuzz`
// (fraction of full range) after compositing both over opaque white, the way
// a screenshot comparison would see them. Throws std::invalid_argument on a
// dimension mismatch.
DiffReport image_diff_ae(const RasterImage& a, const RasterImage& b, double fuzz);

// The displayed value of a premultiplied color on a white background.
Color composite_over_white(const Color& c);

// Binary PPM (P6): "P6\n<w> <h>\n255\n" then RGB byte triples, top row
// first. Pixels are composited over white and quantized with round(255 * v).
void write_ppm(const RasterImage& img, std::ostream& os);
void write_ppm_file(const RasterImage& img, const std::string& path);
RasterImage read_ppm(std::istream& is);
RasterImage read_ppm_file(const std::string& path);

}  // namespace muskia
