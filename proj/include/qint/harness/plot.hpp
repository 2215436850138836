#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qint::harness {

/// Evaluation history of one run, one entry per segment.
struct SegmentSeries {
  std::vector<std::int64_t> segments;
  std::vector<double> avg_reward;
  std::vector<std::vector<double>> ps;  // [segment][action]
};

/// Collects the eval records of a log. Throws ConfigError when there are none.
SegmentSeries series_from_log(const std::vector<nlohmann::json>& records);

std::string reward_csv(const SegmentSeries& series);
std::string ps_csv(const SegmentSeries& series);
std::string reward_svg(const SegmentSeries& series);
std::string ps_svg(const SegmentSeries& series);

/// Writes reward.csv, reward.svg, ps.csv and ps.svg into `out_dir`.
void write_plots(const SegmentSeries& series, const std::filesystem::path& out_dir);

}  // namespace qint::harness
