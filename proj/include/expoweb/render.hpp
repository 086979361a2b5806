#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expoweb/orbit.hpp"
#include "expoweb/parameter.hpp"
#include "expoweb/raster.hpp"

namespace expoweb {

struct RenderConfig {
    GridSpec grid;
    int iters = 60;          // basin/escape iteration budget
    double basin_tol = 1e-6;
};

// RGB image (3 bytes per pixel, rows top-to-bottom, top row = largest Im):
// basin pixels colored by nearest cycle point and convergence time, escaping
// pixels in light greys by escape time, undetermined pixels dark grey.
// Deterministic: each pixel is a pure function of its center; tiles are
// row-partitioned and merged in a fixed order regardless of thread count.
std::vector<uint8_t> render_basin_image(const Parameter& p, const Cycle& cycle,
                                        const RenderConfig& cfg);

// Binary P6 image.
void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb);

} // namespace expoweb
