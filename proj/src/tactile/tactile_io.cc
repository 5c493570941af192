#include "pcbody/tactile/tactile_io.h"

#include "pcbody/common/csv.h"
#include "pcbody/common/errors.h"

namespace pcbody::tactile {

void WriteSkinCsv(const std::string& path, const std::vector<SkinFrame>& frames) {
  csv::Table table;
  table.header.push_back("t");
  for (int c = 0; c < kSkinCells; ++c) table.header.push_back("c_" + std::to_string(c + 1));
  for (const auto& f : frames) {
    if (f.proximities.size() != kSkinCells) {
      throw std::invalid_argument("skin frame must have " + std::to_string(kSkinCells) + " cells");
    }
    std::vector<double> row{f.t};
    for (int c = 0; c < kSkinCells; ++c) row.push_back(f.proximities[c]);
    table.rows.push_back(std::move(row));
  }
  csv::WriteFile(path, table);
}

std::vector<SkinFrame> ReadSkinCsv(const std::string& path) {
  const csv::Table table = csv::ReadFile(path);
  const int tc = table.Column("t");
  std::vector<int> cols;
  for (int c = 0; c < kSkinCells; ++c) cols.push_back(table.Column("c_" + std::to_string(c + 1)));
  std::vector<SkinFrame> frames;
  for (const auto& row : table.rows) {
    Eigen::VectorXd v(kSkinCells);
    for (int c = 0; c < kSkinCells; ++c) v[c] = row[cols[c]];
    frames.push_back(SkinFrame::Make(row[tc], v));
  }
  return frames;
}

void WriteTrackCsv(const std::string& path, const std::vector<TrackPoint>& track) {
  csv::Table table;
  table.header = {"t", "u", "v"};
  for (const auto& p : track) table.rows.push_back({p.t, p.position.x(), p.position.y()});
  csv::WriteFile(path, table);
}

std::vector<TrackPoint> ReadTrackCsv(const std::string& path) {
  const csv::Table table = csv::ReadFile(path);
  const int tc = table.Column("t"), uc = table.Column("u"), vc = table.Column("v");
  std::vector<TrackPoint> track;
  for (const auto& row : table.rows) track.push_back({row[tc], Eigen::Vector2d(row[uc], row[vc])});
  return track;
}

nlohmann::json EventsToJson(const std::vector<TouchEvent>& events) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : events) {
    out.push_back({{"t_onset", e.t_onset},
                   {"t_offset", e.t_offset},
                   {"delta", e.delta},
                   {"o_v", {e.o_v.x(), e.o_v.y()}},
                   {"active", e.active}});
  }
  return out;
}

std::vector<TouchEvent> EventsFromJson(const nlohmann::json& j) {
  std::vector<TouchEvent> events;
  try {
    for (const auto& item : j) {
      TouchEvent e;
      e.t_onset = item.at("t_onset").get<double>();
      e.t_offset = item.at("t_offset").get<double>();
      e.delta = item.at("delta").get<double>();
      e.o_v = Eigen::Vector2d(item.at("o_v").at(0).get<double>(), item.at("o_v").at(1).get<double>());
      e.active = item.at("active").get<bool>();
      events.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("touch events: ") + e.what());
  }
  return events;
}

nlohmann::json TouchParamsToJson(const TouchParams& p) {
  return {{"a1", p.a1},
          {"b1", p.b1},
          {"a2", p.a2},
          {"b2", p.b2},
          {"prox_threshold", p.prox_threshold},
          {"sync_window", p.sync_window},
          {"stop_speed", p.stop_speed},
          {"stop_window", p.stop_window}};
}

TouchParams TouchParamsFromJson(const nlohmann::json& j) {
  TouchParams p;
  try {
    p.a1 = j.value("a1", p.a1);
    p.b1 = j.value("b1", p.b1);
    p.a2 = j.value("a2", p.a2);
    p.b2 = j.value("b2", p.b2);
    p.prox_threshold = j.value("prox_threshold", p.prox_threshold);
    p.sync_window = j.value("sync_window", p.sync_window);
    p.stop_speed = j.value("stop_speed", p.stop_speed);
    p.stop_window = j.value("stop_window", p.stop_window);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("touch params: ") + e.what());
  }
  p.Validate();
  return p;
}

}  // namespace pcbody::tactile
