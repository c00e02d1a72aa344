#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zshar/core/layout.hpp"
#include "zshar/core/timestamp.hpp"
#include "zshar/core/types.hpp"
#include "zshar/textgen/descriptors.hpp"
#include "zshar/textgen/summarizer.hpp"
#include "zshar/textgen/summary_config.hpp"

namespace testkit {

using namespace zshar;

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ZSHAR_FIXTURES) / name; }
inline std::filesystem::path configs_dir() { return std::filesystem::path(ZSHAR_CONFIGS); }

inline Timestamp at(const std::string& iso) {
  auto t = Timestamp::parse_iso(iso);
  if (!t) throw std::invalid_argument("bad timestamp in test: " + iso);
  return *t;
}

inline SensorEvent ev(const std::string& iso, std::string id, std::string value = "ON",
                      Modality m = Modality::motion) {
  return SensorEvent{at(iso), std::move(id), m, std::move(value)};
}

inline ActivityWindow window(std::string id, std::vector<SensorEvent> events,
                             std::optional<std::string> truth = std::nullopt) {
  return ActivityWindow{std::move(id), std::move(events), std::move(truth)};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("zshar-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Hand-rolled generator helpers for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t next() { return rng_(); }
  // Inclusive range.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * unit() - 1.0; }
  bool coin() { return (rng_() & 1) != 0; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<std::int64_t>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline HomeLayout fixture_layout() { return HomeLayout::load(fixture("home_layout.json")); }

// Random valid window over the given sensor ids: sorted timestamps spread
// over up to `max_span_s` seconds, starting anywhere in a day.
inline ActivityWindow random_window(Gen& g, const std::vector<std::string>& ids, const std::string& id,
                                    std::int64_t max_span_s = 4 * 3600) {
  const std::int64_t n = g.between(1, 40);
  const std::int64_t start = at("2011-06-15T00:00:00").micros() + g.between(0, 86'399) * kMicrosPerSecond +
                             g.between(0, 999'999);
  std::vector<std::int64_t> offsets;
  for (std::int64_t i = 0; i < n; ++i) offsets.push_back(g.between(0, max_span_s * kMicrosPerSecond));
  std::sort(offsets.begin(), offsets.end());
  ActivityWindow w;
  w.window_id = id;
  for (auto off : offsets) {
    const auto& sid = g.pick(ids);
    const Modality m = sid[0] == 'D' ? Modality::door : sid[0] == 'T' ? Modality::temperature : Modality::motion;
    w.events.push_back(SensorEvent{Timestamp::from_micros(start + off), sid, m, g.coin() ? "ON" : "OFF"});
  }
  return w;
}

}  // namespace testkit
