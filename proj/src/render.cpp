#include "expoweb/render.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace expoweb {

namespace {

struct Rgb {
    uint8_t r, g, b;
};

// Fixed palette for cycle-point indices (repeats past 6).
constexpr Rgb kBasinPalette[6] = {
    {40, 90, 200},  {200, 120, 40}, {60, 170, 90},
    {170, 60, 160}, {200, 190, 60}, {70, 180, 190},
};

Rgb shade(Rgb c, double f) {
    auto s = [&](uint8_t v) {
        double x = v * f;
        if (x < 0.0) x = 0.0;
        if (x > 255.0) x = 255.0;
        return static_cast<uint8_t>(std::lround(x));
    };
    return {s(c.r), s(c.g), s(c.b)};
}

Rgb pixel_color(cplx z, const Parameter& p, const Cycle& cycle,
                const RenderConfig& cfg) {
    cplx w = z;
    for (int t = 0; t < cfg.iters; ++t) {
        if (!cycle.points.empty()) {
            for (std::size_t j = 0; j < cycle.points.size(); ++j) {
                if (std::abs(w - cycle.points[j]) < cfg.basin_tol) {
                    double f = 0.35 + 0.65 * std::exp(-t / 18.0);
                    return shade(kBasinPalette[j % 6], f);
                }
            }
        }
        if (w.real() > 709.0) {
            // One more step overflows: escape through the far right.
            double g = 140.0 + 115.0 * std::exp(-t / 12.0);
            auto v = static_cast<uint8_t>(std::lround(g));
            return {v, v, v};
        }
        w = p.apply(w);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) ||
            std::abs(w) > 1e100) {
            double g = 140.0 + 115.0 * std::exp(-t / 12.0);
            auto v = static_cast<uint8_t>(std::lround(g));
            return {v, v, v};
        }
    }
    return {40, 40, 48};
}

} // namespace

std::vector<uint8_t> render_basin_image(const Parameter& p, const Cycle& cycle,
                                        const RenderConfig& cfg) {
    const GridSpec& g = cfg.grid;
    std::vector<uint8_t> img(static_cast<std::size_t>(g.nx) * g.ny * 3);
    std::atomic<int> next_row{0};
    auto worker = [&]() {
        for (;;) {
            int row = next_row.fetch_add(1);
            if (row >= g.ny) return;
            // Row 0 of the image is the top of the window (largest Im).
            int j = g.ny - 1 - row;
            for (int i = 0; i < g.nx; ++i) {
                Rgb c = pixel_color(g.center(i, j), p, cycle, cfg);
                std::size_t off =
                    (static_cast<std::size_t>(row) * g.nx + i) * 3;
                img[off] = c.r;
                img[off + 1] = c.g;
                img[off + 2] = c.b;
            }
        }
    };
    int nthreads = worker_thread_count();
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return img;
}

void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("write_ppm: buffer size mismatch");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_ppm: cannot open " + path);
    std::fprintf(f, "P6\n%d %d\n255\n", width, height);
    std::size_t n = std::fwrite(rgb.data(), 1, rgb.size(), f);
    std::fclose(f);
    if (n != rgb.size()) throw std::runtime_error("write_ppm: short write");
}

} // namespace expoweb
