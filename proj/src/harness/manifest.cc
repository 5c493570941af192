#include "pcbody/harness/manifest.h"

#include <filesystem>
#include <fstream>

#include "pcbody/common/hash.h"
#include "pcbody/harness/experiment.h"

namespace pcbody::harness {
namespace fs = std::filesystem;

nlohmann::json Manifest::ToJson() const {
  return {{"experiment", experiment}, {"seed", seed}, {"files", files}, {"models", models}};
}

Manifest Manifest::FromJson(const nlohmann::json& j) {
  Manifest m;
  m.experiment = j.at("experiment").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.files = j.at("files").get<std::map<std::string, std::string>>();
  m.models = j.at("models").get<std::map<std::string, std::string>>();
  return m;
}

void Manifest::Save(const std::string& dir) const {
  const fs::path path = fs::path(dir) / kFileName;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << ToJson().dump(2) << '\n';
}

Manifest Manifest::Load(const std::string& dir) {
  const fs::path path = fs::path(dir) / kFileName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing manifest: " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return FromJson(j);
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("unreadable manifest " + path.string() + ": " + e.what());
  }
}

void Manifest::RecordFile(const std::string& dir, const std::string& name) {
  files[name] = Sha256File((fs::path(dir) / name).string());
}

void Manifest::RecordModel(const std::string& dir, const std::string& name) {
  models[name] = Sha256File((fs::path(dir) / name).string());
}

void Manifest::Verify(const std::string& dir, const std::string& name) const {
  const fs::path path = fs::path(dir) / name;
  std::string pinned;
  if (auto it = files.find(name); it != files.end()) {
    pinned = it->second;
  } else if (auto m = models.find(name); m != models.end()) {
    pinned = m->second;
  } else {
    throw ArtifactError(name + " is not recorded in the manifest of " + dir);
  }
  if (!fs::exists(path)) throw ArtifactError("missing artifact: " + path.string());
  const std::string actual = Sha256File(path.string());
  if (actual != pinned) {
    throw ArtifactError("hash mismatch for " + path.string() + ": manifest " + pinned +
                        ", file " + actual);
  }
}

}  // namespace pcbody::harness
