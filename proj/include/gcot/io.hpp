#pragma once

#include <string>

#include <json.hpp>

#include "gcot/bounds.hpp"
#include "gcot/core.hpp"
#include "gcot/entropic.hpp"
#include "gcot/halffill.hpp"
#include "gcot/lp.hpp"
#include "gcot/monge1d.hpp"

namespace gcot {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "gcot/v1";

// Every document carries {"schema": "gcot/v1", "kind": ...}.
json document(const std::string& kind);

json to_json(const DiscreteDensity& rho);
json to_json(const GCPlan& plan);
json to_json(const GridDensity1D& rho);
json to_json(const DualCertificate& cert);
json to_json(const LPResult& r);
json to_json(const HalfFillResult& r);
json to_json(const MultiscaleResult& r);
json to_json(const SupportBound& b);
json to_json(const MonotoneReport& r);
json to_json(const MongePlan1D& p);
json to_json(const CrosscheckReport& r);
json to_json(const GibbsSolution& s);
json to_json(const TemperatureSweep& s);
json to_json(const EntropyReport& r);

// Readers accept either a bare object or a document of the matching kind.
// Malformed input raises a usage error naming the offending field.
DiscreteDensity density_from_json(const json& j);
GCPlan plan_from_json(const json& j);
GridDensity1D grid_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// two-space indentation, trailing newline
std::string dump(const json& j);

// RFC-4180 field quoting
std::string csv_field(const std::string& s);

}  // namespace gcot
