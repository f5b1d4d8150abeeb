#include "eegdec/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <regex>
#include <sstream>

#include "eegdec/error.hpp"

namespace eegdec {

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::NoWindows, "no samples");
  if (!(p >= 0.0 && p <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

LatencySummary summarize_latency(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::NoWindows, "no samples");
  LatencySummary s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  s.p50 = nearest_rank_percentile(values, 50.0);
  s.p95 = nearest_rank_percentile(values, 95.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

LatencyReport time_inference(std::size_t n_windows, const std::function<StageTimings(std::size_t)>& run,
                             int warmup) {
  if (warmup < 0) throw Error(ErrorCode::InvalidArgument, "warmup must be >= 0");
  const auto skip = static_cast<std::size_t>(warmup);
  if (n_windows <= skip) {
    throw Error(ErrorCode::NoWindows, std::to_string(n_windows) + " windows with " + std::to_string(warmup) +
                                          " warmup leaves nothing to measure");
  }
  LatencyReport rep;
  for (std::size_t i = 0; i < n_windows; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    StageTimings t = run(i);
    t.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (i >= skip) rep.samples.push_back(t);
  }
  rep.n_windows = rep.samples.size();
  auto column = [&](double StageTimings::*field) {
    std::vector<double> v;
    v.reserve(rep.samples.size());
    for (const auto& s : rep.samples) v.push_back(s.*field);
    return summarize_latency(v);
  };
  rep.preprocess = column(&StageTimings::preprocess_ms);
  rep.features = column(&StageTimings::features_ms);
  rep.model = column(&StageTimings::model_ms);
  rep.total = column(&StageTimings::total_ms);
  return rep;
}

LatencyReport time_inference(const std::vector<CharacterWindow>& windows, const FeaturePipeline& pipeline,
                             const WeightBundle& weights, int warmup) {
  if (windows.empty()) throw Error(ErrorCode::NoWindows, "no windows to time");
  return time_inference(
      windows.size(), [&](std::size_t i) { return predict_window(windows[i], pipeline, weights).timing; }, warmup);
}

nlohmann::json LatencyReport::to_json() const {
  auto summary = [](const LatencySummary& s) {
    return nlohmann::json{{"mean", s.mean}, {"p50", s.p50}, {"p95", s.p95}, {"min", s.min}, {"max", s.max}};
  };
  double elapsed = 0.0;
  for (const auto& s : samples) elapsed += s.total_ms;
  return {{"n_windows", n_windows},
          {"unit", "ms"},
          {"elapsed_ms", elapsed},
          {"preprocess", summary(preprocess)},
          {"features", summary(features)},
          {"model", summary(model)},
          {"total", summary(total)}};
}

std::string LatencyReport::samples_csv() const {
  std::ostringstream out;
  out.precision(9);
  out << "window,preprocess_ms,features_ms,model_ms,total_ms\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << i << ',' << s.preprocess_ms << ',' << s.features_ms << ',' << s.model_ms << ',' << s.total_ms << '\n';
  }
  return out.str();
}

double PowerLog::mean_instant_mw() const {
  if (entries.empty()) throw Error(ErrorCode::NoReadings, "power log has no VDD_IN readings");
  double s = 0.0;
  for (const auto& e : entries) s += e.instant_mw;
  return s / static_cast<double>(entries.size());
}

PowerLog parse_power_log(const std::vector<std::string>& lines, double interval_ms) {
  static const std::regex token(R"(VDD_IN\s+(\d+(?:\.\d+)?)(?:mW)?/(\d+(?:\.\d+)?)(?:mW)?)");
  PowerLog log;
  log.interval_ms = interval_ms;
  std::smatch m;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!std::regex_search(lines[i], m, token)) {
      ++log.skipped_lines;
      continue;
    }
    log.entries.push_back({static_cast<double>(i) * interval_ms, std::stod(m[1].str()), std::stod(m[2].str())});
  }
  if (log.entries.empty()) throw Error(ErrorCode::NoReadings, "no VDD_IN readings found");
  return log;
}

PowerLog parse_power_log(std::istream& in, double interval_ms) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return parse_power_log(lines, interval_ms);
}

double energy_per_character(const PowerLog& log, double elapsed_s, std::size_t n_windows) {
  if (!(elapsed_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "elapsed time must be positive");
  if (n_windows < 1) throw Error(ErrorCode::InvalidArgument, "window count must be >= 1");
  return log.mean_instant_mw() * elapsed_s / static_cast<double>(n_windows);
}

}  // namespace eegdec
