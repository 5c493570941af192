#ifndef PCBODY_GP_GP_IO_H_
#define PCBODY_GP_GP_IO_H_

#include <json.hpp>
#include <string>

#include "pcbody/gp/gaussian_process.h"

namespace pcbody::gp {

// CSV with columns x_1..x_M, s_1..s_D.
void WriteSampleSet(const std::string& path, const SampleSet& samples);
SampleSet ReadSampleSet(const std::string& path);

nlohmann::json HyperparamsToJson(const GPHyperparams& hyper);
GPHyperparams HyperparamsFromJson(const nlohmann::json& j);

nlohmann::json ModelToJson(const GPModel& model);
GPModel ModelFromJson(const nlohmann::json& j);

void SaveModel(const std::string& path, const GPModel& model);
GPModel LoadModel(const std::string& path);

}  // namespace pcbody::gp

#endif  // PCBODY_GP_GP_IO_H_
