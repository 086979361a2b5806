#include "expoweb/raster.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace expoweb {

GridSpec GridSpec::from_ranges(double re0, double re1, double im0, double im1,
                               int nx, int ny) {
    if (nx < 8 || ny < 8) throw std::invalid_argument("GridSpec: nx, ny >= 8");
    if (!(re1 > re0) || !(im1 > im0))
        throw std::invalid_argument("GridSpec: empty range");
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.h = (re1 - re0) / nx; // square pixels assumed by callers that need them
    g.x0 = re0 + 0.5 * g.h;
    const double hy = (im1 - im0) / ny;
    g.y0 = im0 + 0.5 * hy;
    // Keep a single pitch when the caller provided a square geometry;
    // otherwise x/y use the x pitch and the y pitch respectively via y().
    // For simplicity this implementation requires (near-)square pixels.
    if (std::abs(hy - g.h) > 1e-9 * std::abs(g.h))
        throw std::invalid_argument("GridSpec: pixels must be square");
    return g;
}

GridSpec GridSpec::from_centers(double x0, double y0, double h, int nx, int ny) {
    if (nx < 8 || ny < 8) throw std::invalid_argument("GridSpec: nx, ny >= 8");
    if (!(h > 0.0)) throw std::invalid_argument("GridSpec: h > 0");
    GridSpec g;
    g.x0 = x0;
    g.y0 = y0;
    g.h = h;
    g.nx = nx;
    g.ny = ny;
    return g;
}

bool GridSpec::contains(cplx z) const {
    return z.real() >= x(0) - 0.5 * h && z.real() <= x(nx - 1) + 0.5 * h &&
           z.imag() >= y(0) - 0.5 * h && z.imag() <= y(ny - 1) + 0.5 * h;
}

void GridSpec::locate(cplx z, int& i, int& j) const {
    i = static_cast<int>(std::lround((z.real() - x0) / h));
    j = static_cast<int>(std::lround((z.imag() - y0) / h));
    if (i < 0 || i >= nx || j < 0 || j >= ny)
        throw std::invalid_argument("GridSpec::locate: point outside grid");
}

int worker_thread_count() {
    if (const char* env = std::getenv("EXPOWEB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Mask rasterize(const std::function<bool(cplx)>& predicate, const GridSpec& grid) {
    Mask m;
    m.grid = grid;
    m.bits.assign(static_cast<size_t>(grid.nx) * static_cast<size_t>(grid.ny), 0);
    const int nthreads = worker_thread_count();
    std::atomic<int> next_row{0};
    auto work = [&]() {
        for (;;) {
            const int j = next_row.fetch_add(1);
            if (j >= grid.ny) return;
            for (int i = 0; i < grid.nx; ++i)
                m.bits[grid.idx(i, j)] =
                    predicate(grid.center(i, j)) ? uint8_t{1} : uint8_t{0};
        }
    };
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return m;
}

namespace {

// Generic BFS labeling over a pixel predicate.
template <typename Allowed>
int label_components(const GridSpec& g, const Allowed& allowed, bool diag,
                     std::vector<int32_t>& labels, std::vector<size_t>& sizes,
                     std::vector<uint8_t>& touches_frame) {
    labels.assign(static_cast<size_t>(g.nx) * static_cast<size_t>(g.ny), 0);
    sizes.assign(1, 0);
    touches_frame.assign(1, 0);
    int count = 0;
    std::vector<size_t> stack;
    const int dx4[] = {1, -1, 0, 0}, dy4[] = {0, 0, 1, -1};
    const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1},
              dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int* dx = diag ? dx8 : dx4;
    const int* dy = diag ? dy8 : dy4;
    const int ndirs = diag ? 8 : 4;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const size_t id = g.idx(i, j);
            if (labels[id] != 0 || !allowed(i, j)) continue;
            const int32_t lab = ++count;
            sizes.push_back(0);
            touches_frame.push_back(0);
            labels[id] = lab;
            stack.push_back(id);
            while (!stack.empty()) {
                const size_t cur = stack.back();
                stack.pop_back();
                const int ci = static_cast<int>(cur % static_cast<size_t>(g.nx));
                const int cj = static_cast<int>(cur / static_cast<size_t>(g.nx));
                ++sizes[static_cast<size_t>(lab)];
                if (ci == 0 || ci == g.nx - 1 || cj == 0 || cj == g.ny - 1)
                    touches_frame[static_cast<size_t>(lab)] = 1;
                for (int d = 0; d < ndirs; ++d) {
                    const int ni = ci + dx[d], nj = cj + dy[d];
                    if (ni < 0 || ni >= g.nx || nj < 0 || nj >= g.ny) continue;
                    const size_t nid = g.idx(ni, nj);
                    if (labels[nid] == 0 && allowed(ni, nj)) {
                        labels[nid] = lab;
                        stack.push_back(nid);
                    }
                }
            }
        }
    }
    return count;
}

} // namespace

ComponentLabels complement_components(const Mask& m) {
    ComponentLabels cl;
    cl.grid = m.grid;
    std::vector<uint8_t> frame;
    cl.count = label_components(
        m.grid, [&](int i, int j) { return !m.at(i, j); }, /*diag=*/false,
        cl.labels, cl.sizes, frame);
    cl.bounded.assign(frame.size(), 0);
    for (size_t l = 1; l < frame.size(); ++l) cl.bounded[l] = frame[l] ? 0 : 1;
    return cl;
}

int mask_component_count8(const Mask& m) {
    std::vector<int32_t> labels;
    std::vector<size_t> sizes;
    std::vector<uint8_t> frame;
    return label_components(
        m.grid, [&](int i, int j) { return m.at(i, j); }, /*diag=*/true, labels,
        sizes, frame);
}

bool separates_point(const Mask& m, const ComponentLabels& labels, cplx z) {
    if (!m.grid.contains(z))
        throw std::invalid_argument("separates_point: point outside grid");
    int i, j;
    m.grid.locate(z, i, j);
    if (!m.at(i, j)) {
        const int32_t l = labels.at(i, j);
        return labels.bounded[static_cast<size_t>(l)] != 0;
    }
    // Temporary-removal semantics for a point of the set itself: the freed
    // pixel is bounded iff it is off the frame and no adjacent false
    // component escapes to the frame.
    if (i == 0 || i == m.grid.nx - 1 || j == 0 || j == m.grid.ny - 1) return false;
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
        const int ni = i + dx[d], nj = j + dy[d];
        if (m.at(ni, nj)) continue;
        const int32_t l = labels.at(ni, nj);
        if (!labels.bounded[static_cast<size_t>(l)]) return false;
    }
    return true;
}

bool separates_point(const Mask& m, cplx z) {
    return separates_point(m, complement_components(m), z);
}

namespace {

std::vector<uint8_t> dilate8(const GridSpec& g, const std::vector<uint8_t>& in) {
    std::vector<uint8_t> out(in.size(), 0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!in[g.idx(i, j)]) continue;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ni = i + di, nj = j + dj;
                    if (ni >= 0 && ni < g.nx && nj >= 0 && nj < g.ny)
                        out[g.idx(ni, nj)] = 1;
                }
        }
    return out;
}

} // namespace

SpiderReport spiders_web_verdict(const Mask& m, const std::vector<cplx>& samples) {
    SpiderReport rep;
    rep.mask_components = mask_component_count8(m);
    rep.mask_connected8 = rep.mask_components == 1;

    const ComponentLabels labels = complement_components(m);
    for (cplx z : samples) {
        SampleCheck sc{z, separates_point(m, labels, z)};
        if (!sc.separated) ++rep.failing_samples;
        rep.samples.push_back(sc);
    }

    // Nested-domain witness chain: flood the complement from growing central
    // discs (each union the dilation of the previous domain); every stage
    // must stay off the frame and strictly grow.
    const GridSpec& g = m.grid;
    const cplx centre(0.5 * (g.x(0) + g.x(g.nx - 1)), 0.5 * (g.y(0) + g.y(g.ny - 1)));
    const double halfspan =
        0.5 * std::min(g.x(g.nx - 1) - g.x(0), g.y(g.ny - 1) - g.y(0));
    std::vector<uint8_t> G(m.bits.size(), 0);
    size_t g_size = 0;
    for (double frac : {0.15, 0.35, 0.55, 0.75}) {
        const double rad = frac * halfspan;
        std::vector<uint8_t> K = dilate8(g, G);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (std::abs(g.center(i, j) - centre) <= rad) K[g.idx(i, j)] = 1;
        // Flood through false pixels and K from K.
        std::vector<int32_t> lab;
        std::vector<size_t> sizes;
        std::vector<uint8_t> frame;
        label_components(
            g, [&](int i, int j) { return !m.at(i, j) || K[g.idx(i, j)]; },
            /*diag=*/false, lab, sizes, frame);
        std::vector<uint8_t> seeded(sizes.size(), 0);
        for (size_t id = 0; id < K.size(); ++id)
            if (K[id] && lab[id] != 0) seeded[static_cast<size_t>(lab[id])] = 1;
        std::vector<uint8_t> W(m.bits.size(), 0);
        size_t w_size = 0;
        bool touches = false, contains_prev = true;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const size_t id = g.idx(i, j);
                const bool in =
                    lab[id] != 0 && seeded[static_cast<size_t>(lab[id])] != 0;
                W[id] = in ? 1 : 0;
                if (in) {
                    ++w_size;
                    if (i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1)
                        touches = true;
                }
                if (G[id] && !in) contains_prev = false;
            }
        GChainStage stage{frac, w_size, !touches, w_size > g_size && contains_prev};
        rep.chain.push_back(stage);
        if (touches || !stage.grew) break;
        G = std::move(W);
        g_size = w_size;
        ++rep.chain_length;
    }

    rep.verdict = rep.mask_connected8 && rep.failing_samples == 0;
    return rep;
}

SeparationWitness pairwise_separation_witness(const Mask& m, cplx p, cplx q) {
    SeparationWitness w;
    if (p == q) {
        w.reason = "points coincide";
        return w;
    }
    const ComponentLabels labels = complement_components(m);
    int pi, pj, qi, qj;
    m.grid.locate(p, pi, pj);
    m.grid.locate(q, qi, qj);
    if (m.at(pi, pj) || m.at(qi, qj)) {
        w.reason = "a point lies on the mask";
        return w;
    }
    w.label_p = labels.at(pi, pj);
    w.label_q = labels.at(qi, qj);
    w.bounded_p = labels.bounded[static_cast<size_t>(w.label_p)] != 0;
    w.bounded_q = labels.bounded[static_cast<size_t>(w.label_q)] != 0;
    if (w.label_p == w.label_q) {
        w.reason = "points share a complement component";
        return w;
    }
    if (!w.bounded_p || !w.bounded_q) {
        w.reason = "a component is unbounded at this resolution";
        return w;
    }
    w.ok = true;
    w.reason = "distinct bounded complement components";
    return w;
}

void write_pgm(const Mask& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << m.grid.nx << " " << m.grid.ny << "\n255\n";
    std::vector<uint8_t> row(static_cast<size_t>(m.grid.nx));
    // Top image row = largest imaginary part.
    for (int j = m.grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < m.grid.nx; ++i)
            row[static_cast<size_t>(i)] = m.at(i, j) ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

Mask escape_or_basin_mask(const GridSpec& grid, const Parameter& p,
                          const GrowthConstants& cfg, const Cycle& cycle,
                          const ClassifyOptions& opt) {
    const std::vector<double> logM = log_M_upper(cfg.R, p, opt.depth, cfg.K);
    return rasterize(
        [&](cplx z) {
            const PointClass pc = classify_point(z, p, logM, cycle, opt);
            return pc.label == PointLabel::basin ||
                   pc.label == PointLabel::fast_core_verified;
        },
        grid);
}

} // namespace expoweb
