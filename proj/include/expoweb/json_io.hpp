#pragma once

#include <string>

#include <json.hpp>

#include "expoweb/fatou.hpp"
#include "expoweb/hairs.hpp"
#include "expoweb/raster.hpp"
#include "expoweb/trap.hpp"

namespace expoweb {

inline constexpr const char* kToolVersion = "expoweb 1.0.0";

nlohmann::json to_json(cplx z);
cplx cplx_from_json(const nlohmann::json& j);

nlohmann::json to_json(const XEvidence& e);
nlohmann::json to_json(const Rectangle& r);
nlohmann::json to_json(const SeparationCertificate& cert);
nlohmann::json to_json(const HairPolyline& h);
nlohmann::json to_json(const FatouVerdict& v);
nlohmann::json to_json(const SpiderReport& r);

// Component summary of a labeled raster: per-label size, boundedness, and
// pixel bounding box.
nlohmann::json components_to_json(const ComponentLabels& labels);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

} // namespace expoweb
