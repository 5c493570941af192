#ifndef PCBODY_SIM_SCENARIO_IO_H_
#define PCBODY_SIM_SCENARIO_IO_H_

#include <json.hpp>
#include <string>
#include <vector>

#include "pcbody/sim/other_agent.h"
#include "pcbody/sim/sensors.h"

namespace pcbody::sim {

// JSON round trips. The *FromJson readers start from `base` and overwrite only
// the keys present, so partial documents act as overrides.
nlohmann::json ToJson(const TrajectorySpec& spec);
TrajectorySpec TrajectorySpecFromJson(const nlohmann::json& j, TrajectorySpec base = {});

nlohmann::json ToJson(const NoiseSpec& noise);
NoiseSpec NoiseSpecFromJson(const nlohmann::json& j, NoiseSpec base = {});

nlohmann::json ToJson(const ProprioceptionMap& pmap);
ProprioceptionMap ProprioceptionMapFromJson(const nlohmann::json& j, ProprioceptionMap base = {});

nlohmann::json ToJson(const OtherAgentScript& script);
OtherAgentScript OtherAgentScriptFromJson(const nlohmann::json& j, OtherAgentScript base = {});

std::string ToString(ProprioMode mode);
ProprioMode ProprioModeFromString(const std::string& s);
std::string ToString(TouchMode mode);
TouchMode TouchModeFromString(const std::string& s);

// Ground truth CSV: t, q_1..q_3, u, v (pixel columns are nan out of frame).
struct TruthRecord {
  double t = 0.0;
  Eigen::Vector3d q;
  std::optional<Eigen::Vector2d> pixel;
};
void WriteTruthCsv(const std::string& path, const std::vector<TruthRecord>& truth);
std::vector<TruthRecord> ReadTruthCsv(const std::string& path);

}  // namespace pcbody::sim

#endif  // PCBODY_SIM_SCENARIO_IO_H_
