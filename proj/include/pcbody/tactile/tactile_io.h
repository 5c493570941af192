#ifndef PCBODY_TACTILE_TACTILE_IO_H_
#define PCBODY_TACTILE_TACTILE_IO_H_

#include <json.hpp>
#include <string>
#include <vector>

#include "pcbody/tactile/visuo_tactile.h"

namespace pcbody::tactile {

// Columns t, c_1..c_117.
void WriteSkinCsv(const std::string& path, const std::vector<SkinFrame>& frames);
std::vector<SkinFrame> ReadSkinCsv(const std::string& path);

// Columns t, u, v.
void WriteTrackCsv(const std::string& path, const std::vector<TrackPoint>& track);
std::vector<TrackPoint> ReadTrackCsv(const std::string& path);

nlohmann::json EventsToJson(const std::vector<TouchEvent>& events);
std::vector<TouchEvent> EventsFromJson(const nlohmann::json& j);

nlohmann::json TouchParamsToJson(const TouchParams& params);
// Missing keys keep their defaults.
TouchParams TouchParamsFromJson(const nlohmann::json& j);

}  // namespace pcbody::tactile

#endif  // PCBODY_TACTILE_TACTILE_IO_H_
