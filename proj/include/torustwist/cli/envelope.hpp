// JSON forms of the module outputs and the result envelope that wraps them.
// Non-finite reals are written as the strings "nan", "inf" and "-inf".
#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "torustwist/maps.hpp"
#include "torustwist/ric.hpp"
#include "torustwist/rotation.hpp"
#include "torustwist/solver.hpp"
#include "torustwist/threshold.hpp"

namespace torustwist {

nlohmann::json real_to_json(double x);
double real_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const PlanePoint& p);
void from_json(const nlohmann::json& j, PlanePoint& p);
void to_json(nlohmann::json& j, const OrbitRecord& o);
void from_json(const nlohmann::json& j, OrbitRecord& o);
void to_json(nlohmann::json& j, const SearchResult& r);
void from_json(const nlohmann::json& j, SearchResult& r);
void to_json(nlohmann::json& j, const RotationEstimate& e);
void from_json(const nlohmann::json& j, RotationEstimate& e);
void to_json(nlohmann::json& j, const StructureReport& r);
void from_json(const nlohmann::json& j, StructureReport& r);
void to_json(nlohmann::json& j, const ThresholdBudget& b);
void from_json(const nlohmann::json& j, ThresholdBudget& b);
void to_json(nlohmann::json& j, const ThresholdRecord& r);
void from_json(const nlohmann::json& j, ThresholdRecord& r);
void to_json(nlohmann::json& j, const CriticalEstimate& e);
void from_json(const nlohmann::json& j, CriticalEstimate& e);
void to_json(nlohmann::json& j, const ClimbingHit& h);
void from_json(const nlohmann::json& j, ClimbingHit& h);
void to_json(nlohmann::json& j, const RicBudget& b);
void from_json(const nlohmann::json& j, RicBudget& b);
void to_json(nlohmann::json& j, const RicVerdict& v);
void from_json(const nlohmann::json& j, RicVerdict& v);

namespace cli {

struct Envelope {
  std::string version;
  std::string command;
  nlohmann::json config;
  std::string timestamp;
  double wall_time = 0.0;
  nlohmann::json payload;
};

void to_json(nlohmann::json& j, const Envelope& e);
void from_json(const nlohmann::json& j, Envelope& e);

std::string artifact_version();
/// UTC, ISO 8601 with seconds.
std::string utc_timestamp();
void write_envelope(const std::filesystem::path& path, const Envelope& e);
Envelope read_envelope(const std::filesystem::path& path);

/// 17 significant digits, scientific.
std::string csv_real(double x);

}  // namespace cli
}  // namespace torustwist
