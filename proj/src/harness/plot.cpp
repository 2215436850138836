#include "qint/harness/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "qint/core/errors.hpp"
#include "qint/env/mini_invaders.hpp"

namespace qint::harness {

namespace {

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

struct Line {
  std::string label;
  std::vector<double> y;
};

std::string line_chart(const std::string& title, const std::string& y_label, const std::vector<std::int64_t>& x,
                       const std::vector<Line>& lines, double y_lo, double y_hi) {
  const double w = 720, h = 400, left = 70, right = 150, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  const double x_lo = static_cast<double>(x.front());
  const double x_hi = std::max(static_cast<double>(x.back()), x_lo + 1.0);
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  auto sx = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double v) { return top + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(w) + "\" height=\"" + fixed(h) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(left) + "\" y=\"24\" font-size=\"15\">" + title + "</text>\n";
  svg += "<path d=\"M" + fixed(left) + " " + fixed(top) + " V" + fixed(top + ph) + " H" + fixed(left + pw) +
         "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    svg += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(sy(v) + 4) + "\" text-anchor=\"end\">" +
           fixed(v) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(left) + "\" y=\"" + fixed(h - 15) + "\">" + num(x_lo) + "</text>\n";
  svg += "<text x=\"" + fixed(left + pw) + "\" y=\"" + fixed(h - 15) + "\" text-anchor=\"end\">" + num(x_hi) +
         "</text>\n";
  svg += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(h - 15) +
         "\" text-anchor=\"middle\">evaluation segment</text>\n";
  svg += "<text x=\"14\" y=\"" + fixed(top + ph / 2) + "\" transform=\"rotate(-90 14 " + fixed(top + ph / 2) +
         ")\" text-anchor=\"middle\">" + y_label + "</text>\n";

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    std::string d;
    for (std::size_t i = 0; i < x.size(); ++i) {
      d += (i == 0 ? "M" : " L") + fixed(sx(static_cast<double>(x[i]))) + " " + fixed(sy(lines[k].y[i]));
    }
    svg += "<path d=\"" + d + "\" stroke=\"" + color + "\" stroke-width=\"2\" fill=\"none\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    svg += "<path d=\"M" + fixed(left + pw + 12) + " " + fixed(ly - 4) + " h20\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(left + pw + 38) + "\" y=\"" + fixed(ly) + "\">" + lines[k].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

SegmentSeries series_from_log(const std::vector<nlohmann::json>& records) {
  SegmentSeries series;
  for (const auto& r : records) {
    if (!r.contains("kind") || r["kind"] != "eval") continue;
    series.segments.push_back(r.at("segment").get<std::int64_t>());
    series.avg_reward.push_back(r.at("avg_reward").get<double>());
    series.ps.push_back(r.at("ps").get<std::vector<double>>());
    if (series.ps.back().size() != static_cast<std::size_t>(env::kActionCount)) {
      throw ConfigError("eval record with " + std::to_string(series.ps.back().size()) + " ps values");
    }
  }
  if (series.segments.empty()) throw ConfigError("log has no eval records");
  return series;
}

std::string reward_csv(const SegmentSeries& series) {
  std::string out = "segment,avg_reward\n";
  for (std::size_t i = 0; i < series.segments.size(); ++i) {
    out += std::to_string(series.segments[i]) + "," + num(series.avg_reward[i]) + "\n";
  }
  return out;
}

std::string ps_csv(const SegmentSeries& series) {
  std::string out = "segment";
  for (int a = 0; a < env::kActionCount; ++a) out += "," + std::string(env::action_name(a));
  out += "\n";
  for (std::size_t i = 0; i < series.segments.size(); ++i) {
    out += std::to_string(series.segments[i]);
    for (double p : series.ps[i]) out += "," + num(p);
    out += "\n";
  }
  return out;
}

std::string reward_svg(const SegmentSeries& series) {
  const auto [lo, hi] = std::minmax_element(series.avg_reward.begin(), series.avg_reward.end());
  return line_chart("Evaluation reward per segment", "reward", series.segments,
                    {{"avg reward", series.avg_reward}}, std::min(0.0, *lo), *hi);
}

std::string ps_svg(const SegmentSeries& series) {
  std::vector<Line> lines;
  for (int a = 0; a < env::kActionCount; ++a) {
    Line line{std::string(env::action_name(a)), {}};
    for (const auto& row : series.ps) line.y.push_back(row[static_cast<std::size_t>(a)]);
    lines.push_back(std::move(line));
  }
  return line_chart("Probability of success at the initial state", "probability of success", series.segments,
                    lines, 0.0, 1.0);
}

void write_plots(const SegmentSeries& series, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "reward.csv", reward_csv(series));
  write_file(out_dir / "ps.csv", ps_csv(series));
  write_file(out_dir / "reward.svg", reward_svg(series));
  write_file(out_dir / "ps.svg", ps_svg(series));
}

}  // namespace qint::harness
