#ifndef PCBODY_HARNESS_MANIFEST_H_
#define PCBODY_HARNESS_MANIFEST_H_

#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>

namespace pcbody::harness {

// Pins the inputs of a run directory: experiment, seed, and the SHA-256 of
// every generated dataset file and trained model.
struct Manifest {
  std::string experiment;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> files;   // file name -> sha256
  std::map<std::string, std::string> models;  // file name -> sha256

  static constexpr const char* kFileName = "manifest.json";

  nlohmann::json ToJson() const;
  static Manifest FromJson(const nlohmann::json& j);

  void Save(const std::string& dir) const;
  // Throws ArtifactError when the manifest is missing or unreadable.
  static Manifest Load(const std::string& dir);

  // Hashes dir/name and records it.
  void RecordFile(const std::string& dir, const std::string& name);
  void RecordModel(const std::string& dir, const std::string& name);

  // Throws ArtifactError unless dir/name exists, is pinned here and hashes to
  // the pinned value.
  void Verify(const std::string& dir, const std::string& name) const;
};

}  // namespace pcbody::harness

#endif  // PCBODY_HARNESS_MANIFEST_H_
