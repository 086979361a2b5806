#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "expoweb/orbit.hpp"
#include "expoweb/parameter.hpp"

namespace expoweb {

// Pixel-center grid: centers x0 + i*h, y0 + j*h (row j = imaginary axis).
struct GridSpec {
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 1.0;
    int nx = 0;
    int ny = 0;

    static GridSpec from_ranges(double re0, double re1, double im0, double im1,
                                int nx, int ny);
    static GridSpec from_centers(double x0, double y0, double h, int nx, int ny);

    double x(int i) const { return x0 + h * i; }
    double y(int j) const { return y0 + h * j; }
    cplx center(int i, int j) const { return cplx(x(i), y(j)); }
    size_t idx(int i, int j) const {
        return static_cast<size_t>(j) * static_cast<size_t>(nx) +
               static_cast<size_t>(i);
    }
    bool contains(cplx z) const;
    // Nearest pixel to z (valid only when contains(z)).
    void locate(cplx z, int& i, int& j) const;
};

struct Mask {
    GridSpec grid;
    std::vector<uint8_t> bits; // 1 = predicate holds at the pixel center

    bool at(int i, int j) const { return bits[grid.idx(i, j)] != 0; }
};

// Worker count: EXPOWEB_THREADS if set, else hardware concurrency.
int worker_thread_count();

// Pixel-center evaluation of the predicate, data-parallel over rows.
Mask rasterize(const std::function<bool(cplx)>& predicate, const GridSpec& grid);

// Pixel is true when classify_point labels its center basin or
// fast_core_verified (thresholds hoisted out of the pixel loop).
Mask escape_or_basin_mask(const GridSpec& grid, const Parameter& p,
                          const GrowthConstants& cfg, const Cycle& cycle,
                          const ClassifyOptions& opt);

// 4-connected labeling of the false pixels; label 0 marks mask pixels,
// labels 1..count index complement components.  A component is unbounded
// iff it touches the grid frame.
struct ComponentLabels {
    GridSpec grid;
    std::vector<int32_t> labels;
    std::vector<uint8_t> bounded; // indexed by label; [0] unused
    std::vector<size_t> sizes;    // indexed by label; [0] unused
    int count = 0;

    int32_t at(int i, int j) const { return labels[grid.idx(i, j)]; }
};

ComponentLabels complement_components(const Mask& m);

// Number of 8-connected components of the true pixels.
int mask_component_count8(const Mask& m);

// Does the mask separate z from infinity at this resolution?  False pixel:
// its component must be bounded.  True pixel: temporary-removal semantics —
// the pixel must be off the frame and every adjacent false component bounded.
bool separates_point(const Mask& m, cplx z);
bool separates_point(const Mask& m, const ComponentLabels& labels, cplx z);

struct GChainStage {
    double frac;       // disc radius as a fraction of the window half-span
    size_t size;       // pixels in the flooded domain
    bool bounded;
    bool grew;
};

struct SampleCheck {
    cplx z;
    bool separated;
};

struct SpiderReport {
    bool verdict = false;
    bool mask_connected8 = false;
    int mask_components = 0;
    std::vector<SampleCheck> samples;
    size_t failing_samples = 0;
    std::vector<GChainStage> chain; // nested bounded domains G_1 c G_2 c ...
    int chain_length = 0;
};

// Verdict: the true pixels form one 8-connected set AND separates_point
// holds at every sample; the report carries the nested-domain witness chain.
SpiderReport spiders_web_verdict(const Mask& m, const std::vector<cplx>& samples);

struct SeparationWitness {
    bool ok = false;
    int32_t label_p = 0, label_q = 0;
    bool bounded_p = false, bounded_q = false;
    std::string reason;
};

// Witness that p and q lie in distinct bounded complement components.
SeparationWitness pairwise_separation_witness(const Mask& m, cplx p, cplx q);

// Binary P5 image of the mask (true = white).
void write_pgm(const Mask& m, const std::string& path);

} // namespace expoweb
