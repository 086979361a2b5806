#include "expoweb/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace expoweb {

using nlohmann::json;

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (j.is_array() && j.size() == 2)
        return cplx(j[0].get<double>(), j[1].get<double>());
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    throw std::invalid_argument("expected [re, im] or a number");
}

json to_json(const XEvidence& e) {
    json j;
    j["verified"] = e.verified;
    if (e.first_trap_index >= 0) j["first_trap_index"] = e.first_trap_index;
    if (e.fail_index >= 0) j["fail_index"] = e.fail_index;
    j["threshold_indices"] = e.threshold_indices;
    if (!e.reason.empty()) j["reason"] = e.reason;
    return j;
}

json to_json(const Rectangle& r) {
    return json{{"re_min", r.re_min},
                {"re_max", r.re_max},
                {"im_abs_max", r.im_abs_max},
                {"margin", r.margin}};
}

json to_json(const SeparationCertificate& cert) {
    json samples = json::array();
    for (const auto& s : cert.samples) {
        json e = to_json(s.evidence);
        e["z"] = to_json(s.z);
        samples.push_back(std::move(e));
    }
    json j;
    j["tool_version"] = kToolVersion;
    j["parameter"] = to_json(cert.a);
    j["z0"] = to_json(cert.z0);
    j["eps"] = cert.eps;
    j["R"] = cert.R;
    j["depth"] = cert.depth;
    j["rectangle"] = to_json(cert.rectangle);
    j["boundary"] = {{"re_min", cert.boundary_re_min},
                     {"re_max", cert.boundary_re_max},
                     {"im_top", cert.boundary_im_top},
                     {"im_bot", cert.boundary_im_bot},
                     {"k_top", cert.k_top},
                     {"k_bot", cert.k_bot}};
    j["spacing"] = cert.spacing;
    j["samples"] = std::move(samples);
    j["all_verified"] = cert.all_verified;
    j["violations"] = cert.violations;
    return j;
}

json to_json(const HairPolyline& h) {
    json pts = json::array();
    for (size_t k = 0; k < h.points.size(); ++k)
        pts.push_back(json{{"t", h.ts[k]},
                           {"re", h.points[k].real()},
                           {"im", h.points[k].imag()}});
    json j;
    j["tool_version"] = kToolVersion;
    j["address"] = {{"entries", h.address.entries},
                    {"tail_start", h.address.tail_start},
                    {"bound", h.address.address_bound}};
    j["pullback_depth"] = h.pullback_depth;
    j["points"] = std::move(pts);
    j["endpoint"] = to_json(h.endpoint_estimate);
    j["endpoint_gap"] = h.endpoint_gap;
    return j;
}

json to_json(const FatouVerdict& v) {
    json j;
    j["verified"] = v.verified;
    j["depth"] = v.depth;
    if (v.verified) j["n0"] = v.n0;
    return j;
}

json to_json(const SpiderReport& r) {
    json chain = json::array();
    for (const auto& st : r.chain)
        chain.push_back(json{{"frac", st.frac},
                             {"size", st.size},
                             {"bounded", st.bounded},
                             {"grew", st.grew}});
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back(json{{"z", to_json(s.z)}, {"separated", s.separated}});
    json j;
    j["tool_version"] = kToolVersion;
    j["verdict"] = r.verdict;
    j["mask_connected8"] = r.mask_connected8;
    j["mask_components"] = r.mask_components;
    j["failing_samples"] = r.failing_samples;
    j["samples"] = std::move(samples);
    j["chain"] = std::move(chain);
    j["chain_length"] = r.chain_length;
    return j;
}

json components_to_json(const ComponentLabels& labels) {
    const GridSpec& g = labels.grid;
    const int n = labels.count;
    std::vector<int> imin(static_cast<size_t>(n) + 1, 1 << 30),
        imax(static_cast<size_t>(n) + 1, -1),
        jmin(static_cast<size_t>(n) + 1, 1 << 30),
        jmax(static_cast<size_t>(n) + 1, -1);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int32_t lab = labels.at(i, j);
            if (lab <= 0) continue;
            const auto l = static_cast<size_t>(lab);
            imin[l] = std::min(imin[l], i);
            imax[l] = std::max(imax[l], i);
            jmin[l] = std::min(jmin[l], j);
            jmax[l] = std::max(jmax[l], j);
        }
    json comps = json::array();
    for (int lab = 1; lab <= n; ++lab) {
        const auto l = static_cast<size_t>(lab);
        comps.push_back(json{{"label", lab},
                             {"size", labels.sizes[l]},
                             {"bounded", labels.bounded[l] != 0},
                             {"bbox", {imin[l], jmin[l], imax[l], jmax[l]}}});
    }
    return json{{"tool_version", kToolVersion},
                {"count", n},
                {"components", std::move(comps)}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return json::parse(in);
}

} // namespace expoweb
