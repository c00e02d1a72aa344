#include "zshar/core/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "zshar/core/errors.hpp"

namespace zshar {

nlohmann::json window_to_json(const ActivityWindow& w) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : w.events) {
    events.push_back({e.timestamp.to_iso(), e.sensor_id, std::string(modality_name(e.modality)),
                      e.value});
  }
  nlohmann::json out = nlohmann::json::object();
  out["window_id"] = w.window_id;
  out["ground_truth"] = w.ground_truth ? nlohmann::json(*w.ground_truth) : nlohmann::json(nullptr);
  out["events"] = std::move(events);
  return out;
}

ActivityWindow window_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("record is not an object");
  ActivityWindow w;
  auto id = j.find("window_id");
  if (id == j.end() || !id->is_string()) throw DataError("missing string `window_id`");
  w.window_id = id->get<std::string>();
  if (auto gt = j.find("ground_truth"); gt != j.end() && !gt->is_null()) {
    if (!gt->is_string()) throw DataError("window " + w.window_id + ": ground_truth not a string");
    w.ground_truth = gt->get<std::string>();
  }
  auto events = j.find("events");
  if (events == j.end() || !events->is_array()) {
    throw DataError("window " + w.window_id + ": missing `events` array");
  }
  for (const auto& ev : *events) {
    if (!ev.is_array() || ev.size() != 4 ||
        !std::all_of(ev.begin(), ev.end(), [](const auto& f) { return f.is_string(); })) {
      throw DataError("window " + w.window_id +
                      ": event must be [timestamp, sensor_id, modality, value]");
    }
    auto ts = Timestamp::parse_iso(ev[0].get<std::string>());
    if (!ts) throw DataError("window " + w.window_id + ": bad timestamp " + ev[0].dump());
    w.events.push_back(SensorEvent{*ts, ev[1].get<std::string>(),
                                   modality_from_name(ev[2].get<std::string>()),
                                   ev[3].get<std::string>()});
  }
  return w;
}

void write_corpus(std::ostream& out, const std::vector<ActivityWindow>& windows) {
  for (const auto& w : windows) out << window_to_json(w).dump() << '\n';
}

void write_corpus(const std::filesystem::path& path, const std::vector<ActivityWindow>& windows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path.string());
  write_corpus(out, windows);
}

std::vector<ActivityWindow> read_corpus(std::istream& in, const std::string& source) {
  std::vector<ActivityWindow> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(window_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ActivityWindow> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  return read_corpus(in, path.string());
}

}  // namespace zshar
