// raster.cpp - Rasterization driver, AE diff, PPM encode/decode.

#include "muskia/raster.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace muskia {

RasterImage rasterize(const Program& p, int width, int height,
                      const RasterOptions& opts) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("rasterize: dimensions must be positive");

    // Resolve the backend up front so worker threads cannot fail.
    const kernels::Backend backend = kernels::resolve_backend(opts.backend);
    if (!kernels::backend_available(backend))
        throw std::runtime_error("requested kernel backend is not available");

    const Layer layer = run(p);
    const kernels::LayerProgram prog = kernels::flatten(layer);

    RasterImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<size_t>(width) * height);

    std::vector<double> xs(width);
    for (int i = 0; i < width; ++i) xs[i] = i + 0.5;

    auto render_rows = [&](int row_begin, int row_end) {
        std::vector<double> ys(width);
        for (int j = row_begin; j < row_end; ++j) {
            std::fill(ys.begin(), ys.end(), j + 0.5);
            kernels::eval_span(prog, xs.data(), ys.data(), width,
                               img.pixels.data() + static_cast<size_t>(j) * width,
                               backend);
        }
    };

    int threads = opts.threads > 0
                      ? opts.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, height));
    if (threads == 1 || static_cast<long long>(width) * height < 16384) {
        render_rows(0, height);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const int chunk = (height + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(height, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(render_rows, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }
    return img;
}

Color composite_over_white(const Color& c) {
    // SrcOver with an opaque white destination.
    static const Color white{1.0, 1.0, 1.0, 1.0};
    return blend(BlendMode::SrcOver, white, c);
}

DiffReport image_diff_ae(const RasterImage& a, const RasterImage& b, double fuzz) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image_diff_ae: dimension mismatch");
    DiffReport rep;
    rep.total_pixels = static_cast<long long>(a.width) * a.height;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const Color ca = composite_over_white(a.at(x, y));
            const Color cb = composite_over_white(b.at(x, y));
            const double dr = std::abs(ca.r - cb.r);
            const double dg = std::abs(ca.g - cb.g);
            const double db = std::abs(ca.b - cb.b);
            const double d = std::max(dr, std::max(dg, db));
            if (d > rep.max_channel_delta) {
                rep.max_channel_delta = d;
                rep.worst_x = x;
                rep.worst_y = y;
            }
            if (d > fuzz) ++rep.differing_pixels;
        }
    }
    return rep;
}

void write_ppm(const RasterImage& img, std::ostream& os) {
    os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Color c = composite_over_white(img.at(x, y));
            auto q = [](double v) {
                const long b = std::lround(255.0 * v);
                return static_cast<unsigned char>(std::clamp(b, 0L, 255L));
            };
            row[x * 3 + 0] = q(c.r);
            row[x * 3 + 1] = q(c.g);
            row[x * 3 + 2] = q(c.b);
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size()));
    }
}

void write_ppm_file(const RasterImage& img, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_ppm(img, os);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

RasterImage read_ppm(std::istream& is) {
    std::string magic;
    is >> magic;
    if (magic != "P6") throw IoError("not a binary PPM (P6) stream");
    int w = 0, h = 0, maxval = 0;
    is >> w >> h >> maxval;
    if (!is || w <= 0 || h <= 0 || maxval != 255)
        throw IoError("unsupported PPM header");
    is.get();  // single whitespace after maxval
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<size_t>(w) * h);
    std::vector<unsigned char> data(static_cast<size_t>(w) * h * 3);
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!is) throw IoError("truncated PPM payload");
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        Color c;
        c.a = 1.0;
        c.r = data[i * 3 + 0] / 255.0;
        c.g = data[i * 3 + 1] / 255.0;
        c.b = data[i * 3 + 2] / 255.0;
        img.pixels[i] = c;
    }
    return img;
}

RasterImage read_ppm_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);
    return read_ppm(is);
}

}  // namespace muskia
