#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expoweb/fatou.hpp"
#include "expoweb/growth.hpp"
#include "expoweb/hairs.hpp"
#include "expoweb/json_io.hpp"
#include "expoweb/orbit.hpp"
#include "expoweb/parameter.hpp"
#include "expoweb/raster.hpp"
#include "expoweb/render.hpp"
#include "expoweb/trap.hpp"

namespace {

using expoweb::cplx;
using nlohmann::json;

// Exit codes: 0 success, 1 verification failure, 2 invalid config, 3 I/O.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
void io_step(F&& f) {
    try {
        f();
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
}

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return cplx(std::stod(s), 0.0);
        return cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("expected 're' or 're,im', got '" + s + "'");
    }
}

void parse_grid(const std::string& s, int& nx, int& ny) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) {
            nx = ny = std::stoi(s);
        } else {
            nx = std::stoi(s.substr(0, x));
            ny = std::stoi(s.substr(x + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("expected grid 'WxH', got '" + s + "'");
    }
    if (nx < 8 || ny < 8) throw std::invalid_argument("grid must be at least 8x8");
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> v;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        v.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return v;
}

json load_config(const std::string& path) {
    json j;
    io_step([&] { j = expoweb::read_json(path); });
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
}

void override_str(const json& cfg, const char* key, std::string& v) {
    if (cfg.contains(key)) v = cfg.at(key).get<std::string>();
}
void override_num(const json& cfg, const char* key, double& v) {
    if (cfg.contains(key)) v = cfg.at(key).get<double>();
}
void override_int(const json& cfg, const char* key, int& v) {
    if (cfg.contains(key)) v = cfg.at(key).get<int>();
}

const char* label_name(expoweb::PointLabel l) {
    switch (l) {
    case expoweb::PointLabel::basin: return "basin";
    case expoweb::PointLabel::fast_core_verified: return "fast_core_verified";
    case expoweb::PointLabel::escaping_numerical: return "escaping_numerical";
    case expoweb::PointLabel::meandering_candidate: return "meandering_candidate";
    default: return "undecided";
    }
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------
struct RenderArgs {
    std::string a = "-2,0";
    std::string grid = "512x512";
    std::string window = "-4,4,-4,4";
    std::string out;
    std::string config;
    int iters = 60;
};

int cmd_render(RenderArgs args) {
    if (!args.config.empty()) {
        const json cfg = load_config(args.config);
        override_str(cfg, "a", args.a);
        override_str(cfg, "grid", args.grid);
        override_str(cfg, "window", args.window);
        override_str(cfg, "out", args.out);
        override_int(cfg, "iters", args.iters);
    }
    if (args.out.empty()) throw std::invalid_argument("render: --out is required");
    const expoweb::Parameter p(parse_complex(args.a));
    int nx = 0, ny = 0;
    parse_grid(args.grid, nx, ny);
    const std::vector<double> w = parse_doubles(args.window);
    if (w.size() != 4) throw std::invalid_argument("window must be re0,re1,im0,im1");

    expoweb::RenderConfig rc;
    rc.grid = expoweb::GridSpec::from_ranges(w[0], w[1], w[2], w[3], nx, ny);
    rc.iters = args.iters;
    const expoweb::Cycle cycle = expoweb::find_cycle(p, 20000);
    const std::vector<uint8_t> img = expoweb::render_basin_image(p, cycle, rc);
    io_step([&] { expoweb::write_ppm(args.out, nx, ny, img); });
    std::printf("wrote %s (%dx%d)\n", args.out.c_str(), nx, ny);
    return 0;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------
struct CertifyArgs {
    std::string a = "-2,0";
    std::string z0 = "0,0";
    std::string out = "certificate.json";
    std::string overlay;
    std::string grid = "512x512";
    std::string config;
    double eps = 0.1;
    int depth = 3;
    int samples = 512;
};

void write_overlay(const expoweb::SeparationCertificate& cert,
                   const expoweb::Parameter& p, const std::string& path,
                   int nx) {
    // Window: the reported rectangle plus a margin.
    const double pad = 1.5;
    const double re0 = cert.rectangle.re_min - pad;
    const double re1 = cert.rectangle.re_max + pad;
    const double im1 = cert.rectangle.im_abs_max + pad;
    const double h = (re1 - re0) / nx;
    const int ny = std::max(8, static_cast<int>(std::lround(2.0 * im1 / h)));

    // Rebuild the trap for membership shading (same pipeline inputs).
    const expoweb::Cycle cycle = expoweb::find_cycle(p, 20000);
    const expoweb::AccessArc sigma = expoweb::build_access_arc(p, cycle, cert.eps);
    const expoweb::TrapSet trap = expoweb::build_trap(p, cert.eps, sigma);

    std::vector<uint8_t> img(static_cast<size_t>(nx) * ny * 3, 255);
    auto put = [&](int i, int row, uint8_t r, uint8_t g, uint8_t b) {
        if (i < 0 || i >= nx || row < 0 || row >= ny) return;
        const size_t off = (static_cast<size_t>(row) * nx + i) * 3;
        img[off] = r;
        img[off + 1] = g;
        img[off + 2] = b;
    };
    for (int row = 0; row < ny; ++row) {
        const double y = im1 - (row + 0.5) * h;
        for (int i = 0; i < nx; ++i) {
            const double x = re0 + (i + 0.5) * h;
            const cplx z(x, y);
            if (trap.membership(z, h)) put(i, row, 170, 200, 240);
            // Threshold circles |z| = M^k(R) while representable in-window.
            const double az = std::abs(z);
            if (std::abs(az - cert.R) < h) put(i, row, 150, 150, 150);
            // Rectangle outline.
            const bool on_re = std::abs(x - cert.rectangle.re_min) < h ||
                               std::abs(x - cert.rectangle.re_max) < h;
            const bool on_im = std::abs(y - cert.rectangle.im_abs_max) < h ||
                               std::abs(y + cert.rectangle.im_abs_max) < h;
            const bool in_re = x >= cert.rectangle.re_min - h &&
                               x <= cert.rectangle.re_max + h;
            const bool in_im = std::abs(y) <= cert.rectangle.im_abs_max + h;
            if ((on_re && in_im) || (on_im && in_re)) put(i, row, 60, 60, 60);
        }
    }
    // Boundary samples: green verified, red violated.
    for (const auto& s : cert.samples) {
        const int i = static_cast<int>(std::lround((s.z.real() - re0) / h - 0.5));
        const int row = static_cast<int>(std::lround((im1 - s.z.imag()) / h - 0.5));
        if (s.evidence.verified)
            put(i, row, 30, 160, 30);
        else
            put(i, row, 220, 30, 30);
    }
    io_step([&] { expoweb::write_ppm(path, nx, ny, img); });
}

int cmd_certify(CertifyArgs args) {
    if (!args.config.empty()) {
        const json cfg = load_config(args.config);
        override_str(cfg, "a", args.a);
        override_str(cfg, "z0", args.z0);
        override_str(cfg, "out", args.out);
        override_str(cfg, "overlay", args.overlay);
        override_str(cfg, "grid", args.grid);
        override_num(cfg, "eps", args.eps);
        override_int(cfg, "depth", args.depth);
        override_int(cfg, "samples", args.samples);
    }
    const expoweb::Parameter p(parse_complex(args.a));
    const cplx z0 = parse_complex(args.z0);
    const expoweb::SeparationCertificate cert =
        expoweb::separation_certificate(z0, p, args.eps, args.depth, args.samples);
    io_step([&] { expoweb::write_json(args.out, expoweb::to_json(cert)); });
    if (!args.overlay.empty()) {
        int nx = 0, ny = 0;
        parse_grid(args.grid, nx, ny);
        write_overlay(cert, p, args.overlay, nx);
    }
    std::printf("%zu samples, %zu violations, R=%.6g -> %s\n", cert.samples.size(),
                cert.violations.size(), cert.R, args.out.c_str());
    if (!cert.all_verified)
        throw VerificationFailure("certificate has unverified boundary samples");
    return 0;
}

// ---------------------------------------------------------------------------
// hairs
// ---------------------------------------------------------------------------
struct HairArgs {
    std::string a = "-2,0";
    std::string address = "0";
    std::string out = "hair.json";
    std::string config;
    int tail_start = 0;
    int depth = 12;
    int points = 200;
    double tmax = 20.0;
};

int cmd_hairs(HairArgs args) {
    if (!args.config.empty()) {
        const json cfg = load_config(args.config);
        override_str(cfg, "a", args.a);
        override_str(cfg, "address", args.address);
        override_str(cfg, "out", args.out);
        override_int(cfg, "tail_start", args.tail_start);
        override_int(cfg, "depth", args.depth);
        override_int(cfg, "points", args.points);
        override_num(cfg, "tmax", args.tmax);
    }
    const expoweb::Parameter p(parse_complex(args.a));
    expoweb::ExternalAddress addr;
    for (double v : parse_doubles(args.address))
        addr.entries.push_back(static_cast<int>(std::lround(v)));
    addr.tail_start = static_cast<size_t>(args.tail_start);
    const expoweb::HairPolyline hair =
        expoweb::trace_hair(addr, p, args.depth, args.tmax, args.points);

    json j = expoweb::to_json(hair);
    const double R = std::max(3.0, std::log(1.0 + 2.0 * (p.abs_a + 1.0)));
    const expoweb::GrowthConstants gc =
        expoweb::make_growth_constants(p, 1.0, R + 1.0, R, 1.0);
    const expoweb::PointClass pc = expoweb::classify_endpoint(hair, p, gc, 3);
    j["endpoint_label"] = label_name(pc.label);
    io_step([&] { expoweb::write_json(args.out, j); });
    std::printf("hair depth %d, endpoint gap %.3g, label %s -> %s\n",
                hair.pullback_depth, hair.endpoint_gap, label_name(pc.label),
                args.out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// fatou
// ---------------------------------------------------------------------------
struct FatouArgs {
    std::string z = "0,0";
    std::string out;
    std::string config;
    double T = 1.0;
    int n0max = 8;
    int depth = 4;
};

int cmd_fatou(FatouArgs args) {
    if (!args.config.empty()) {
        const json cfg = load_config(args.config);
        override_str(cfg, "z", args.z);
        override_str(cfg, "out", args.out);
        override_num(cfg, "T", args.T);
        override_int(cfg, "n0max", args.n0max);
        override_int(cfg, "depth", args.depth);
    }
    const cplx z = parse_complex(args.z);
    expoweb::FatouOrbitConfig cfg;
    cfg.T = args.T;
    cfg.n0_max = args.n0max;
    cfg.depth = args.depth;
    const expoweb::FatouVerdict v = expoweb::fatou_A_membership(z, cfg);
    json j = expoweb::to_json(v);
    j["z"] = expoweb::to_json(z);
    j["residual_semiconjugacy"] = expoweb::semiconjugacy_residual(z);
    std::printf("%s\n", j.dump(2).c_str());
    if (!args.out.empty()) io_step([&] { expoweb::write_json(args.out, j); });
    if (!v.verified) throw VerificationFailure("membership not verified at this depth");
    return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------
struct CheckArgs {
    std::string a = "-2,0";
    std::string suites = "growth,rzero,fatou,raster";
    std::string out;
    std::string config;
    double K = 1.0;
};

json suite_growth(const expoweb::Parameter& p, double K) {
    json j{{"name", "growth_sandwich"}};
    try {
        // Validate the constants first (rejects K < 1).
        expoweb::make_growth_constants(p, K, 1.0, 3.0, 1.0);
        const double thr = std::log(1.0 + 2.0 * (p.abs_a + K));
        int checked = 0, failed = 0;
        double min_margin = 1e9;
        for (double x = thr + 1e-6; x <= thr + 40.0; x += 0.8) {
            for (double y = -20.0; y <= 20.0; y += 0.8) {
                ++checked;
                if (!expoweb::growth_sandwich_holds(cplx(x, y), K, p)) ++failed;
                if (x < 690.0) {
                    const double lo = std::expm1(x - 1.0) + K;
                    const double m = std::abs(std::exp(cplx(x, y)) + p.a);
                    min_margin = std::min(min_margin, m - lo);
                }
            }
        }
        j["checked"] = checked;
        j["failed"] = failed;
        j["min_lower_margin"] = min_margin;
        j["passed"] = failed == 0;
    } catch (const std::invalid_argument& e) {
        j["precondition_violation"] = e.what();
        j["passed"] = false;
    }
    return j;
}

json suite_rzero(const expoweb::Parameter& p) {
    json j{{"name", "threshold_radius_zero"}};
    const expoweb::RZeroReport rep = expoweb::verify_R_zero(
        p, {0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 50.0, 300.0});
    double min_margin = 1e300;
    json samples = json::array();
    for (const auto& s : rep.samples) {
        min_margin = std::min(min_margin, s.margin);
        samples.push_back(json{{"R", s.R}, {"margin", s.margin}, {"holds", s.holds}});
    }
    j["samples"] = std::move(samples);
    j["min_margin"] = min_margin;
    j["passed"] = rep.all_hold;
    return j;
}

json suite_fatou() {
    json j{{"name", "fatou_conjugacies"}};
    std::mt19937 rng(1u);
    std::uniform_real_distribution<double> box(-10.0, 10.0);
    double max_rel = 0.0, max_conj = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const cplx z(box(rng), box(rng));
        const double scale = std::max(1e-30, std::abs(std::exp(-expoweb::eval_fatou(z))));
        max_rel = std::max(max_rel, expoweb::semiconjugacy_residual(z) / scale);
        max_conj = std::max(max_conj, expoweb::conjugacy_residual(cplx(box(rng), box(rng))));
    }
    j["max_relative_semiconjugacy_residual"] = max_rel;
    j["max_conjugacy_residual"] = max_conj;
    j["passed"] = max_rel <= 1e-10 && max_conj <= 1e-9;
    return j;
}

json suite_raster() {
    json j{{"name", "raster_oracles"}};
    // Annulus mask: ring of true pixels around the grid center.
    const auto grid = expoweb::GridSpec::from_ranges(-2.0, 2.0, -2.0, 2.0, 33, 33);
    const expoweb::Mask ring = expoweb::rasterize(
        [](cplx z) { return std::abs(z) > 1.0 && std::abs(z) < 1.5; }, grid);
    const bool sep = expoweb::separates_point(ring, cplx(0.0, 0.0));
    expoweb::Mask empty;
    empty.grid = grid;
    empty.bits.assign(static_cast<size_t>(grid.nx) * grid.ny, 0);
    const bool empty_sep = expoweb::separates_point(empty, cplx(0.0, 0.0));
    const int rings = expoweb::mask_component_count8(expoweb::rasterize(
        [](cplx z) {
            const double r = std::abs(z);
            return (r > 0.4 && r < 0.7) || (r > 1.2 && r < 1.6);
        },
        grid));
    j["annulus_separates_center"] = sep;
    j["empty_mask_separates"] = empty_sep;
    j["two_ring_components"] = rings;
    j["passed"] = sep && !empty_sep && rings == 2;
    return j;
}

int cmd_check(CheckArgs args) {
    if (!args.config.empty()) {
        const json cfg = load_config(args.config);
        override_str(cfg, "a", args.a);
        override_str(cfg, "suites", args.suites);
        override_str(cfg, "out", args.out);
        override_num(cfg, "K", args.K);
    }
    const expoweb::Parameter p(parse_complex(args.a));
    json suites = json::array();
    bool all = true;
    size_t pos = 0;
    while (pos < args.suites.size()) {
        size_t next = args.suites.find(',', pos);
        if (next == std::string::npos) next = args.suites.size();
        const std::string name = args.suites.substr(pos, next - pos);
        pos = next + 1;
        if (name.empty()) continue;
        json s;
        if (name == "growth")
            s = suite_growth(p, args.K);
        else if (name == "rzero")
            s = suite_rzero(p);
        else if (name == "fatou")
            s = suite_fatou();
        else if (name == "raster")
            s = suite_raster();
        else
            throw std::invalid_argument("unknown suite: " + name);
        all = all && s.at("passed").get<bool>();
        suites.push_back(std::move(s));
    }
    json report{{"tool_version", expoweb::kToolVersion},
                {"suites", std::move(suites)},
                {"all_passed", all}};
    std::printf("%s\n", report.dump(2).c_str());
    if (!args.out.empty()) io_step([&] { expoweb::write_json(args.out, report); });
    if (!all) throw VerificationFailure("one or more suites failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Escape-set toolkit for the exponential family e^z + a"};
    app.require_subcommand(1);

    RenderArgs ra;
    auto* render = app.add_subcommand("render", "Render basin/escape image (PPM)");
    render->add_option("--a", ra.a, "parameter a as re,im");
    render->add_option("--grid", ra.grid, "pixels WxH");
    render->add_option("--window", ra.window, "re0,re1,im0,im1");
    render->add_option("--iters", ra.iters, "iteration budget");
    render->add_option("--out", ra.out, "output PPM path");
    render->add_option("--config", ra.config, "JSON config (overrides flags)");

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "Separation certificate JSON (+overlay)");
    certify->add_option("--a", ca.a, "parameter a as re,im");
    certify->add_option("--z0", ca.z0, "point to separate, re,im");
    certify->add_option("--eps", ca.eps, "trap disc radius e^{-c}");
    certify->add_option("--depth", ca.depth, "membership truncation depth");
    certify->add_option("--samples", ca.samples, "boundary samples per side");
    certify->add_option("--out", ca.out, "certificate JSON path");
    certify->add_option("--overlay", ca.overlay, "optional overlay PPM path");
    certify->add_option("--grid", ca.grid, "overlay pixels WxH");
    certify->add_option("--config", ca.config, "JSON config (overrides flags)");

    HairArgs ha;
    auto* hairs = app.add_subcommand("hairs", "Trace a hair polyline to JSON");
    hairs->add_option("--a", ha.a, "parameter a (real < -1)");
    hairs->add_option("--address", ha.address, "itinerary entries, comma separated");
    hairs->add_option("--tail-start", ha.tail_start, "repeating tail start index");
    hairs->add_option("--depth", ha.depth, "pullback depth");
    hairs->add_option("--tmax", ha.tmax, "largest potential parameter");
    hairs->add_option("--points", ha.points, "samples along the hair");
    hairs->add_option("--out", ha.out, "output JSON path");
    hairs->add_option("--config", ha.config, "JSON config (overrides flags)");

    FatouArgs fa;
    auto* fatou = app.add_subcommand("fatou", "Membership in A for z+1+e^{-z}");
    fatou->add_option("--z", fa.z, "point re,im");
    fatou->add_option("--T", fa.T, "threshold base");
    fatou->add_option("--n0max", fa.n0max, "maximal shift searched");
    fatou->add_option("--depth", fa.depth, "verification depth");
    fatou->add_option("--out", fa.out, "optional JSON output path");
    fatou->add_option("--config", fa.config, "JSON config (overrides flags)");

    CheckArgs ka;
    auto* check = app.add_subcommand("check", "Run invariant suites, emit JSON report");
    check->add_option("--a", ka.a, "parameter a as re,im");
    check->add_option("--suites", ka.suites, "comma list: growth,rzero,fatou,raster");
    check->add_option("--K", ka.K, "sandwich slack (>= 1)");
    check->add_option("--out", ka.out, "optional JSON output path");
    check->add_option("--config", ka.config, "JSON config (overrides flags)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*render) return cmd_render(ra);
        if (*certify) return cmd_certify(ca);
        if (*hairs) return cmd_hairs(ha);
        if (*fatou) return cmd_fatou(fa);
        if (*check) return cmd_check(ka);
    } catch (const VerificationFailure& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
