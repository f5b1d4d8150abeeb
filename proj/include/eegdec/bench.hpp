#pragma once

#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/eedgenet.hpp"
#include "eegdec/pipeline.hpp"

namespace eegdec {

struct LatencySummary {
  double mean = 0.0, p50 = 0.0, p95 = 0.0, min = 0.0, max = 0.0;
};

struct LatencyReport {
  std::size_t n_windows = 0;
  LatencySummary preprocess, features, model, total;
  std::vector<StageTimings> samples;  // measured windows only

  nlohmann::json to_json() const;
  std::string samples_csv() const;
};

/// Nearest-rank percentile: the value at rank ceil(p/100 * n) of the sorted
/// sample (rank 1 for p = 0).
double nearest_rank_percentile(std::vector<double> values, double p);
LatencySummary summarize_latency(const std::vector<double>& values);

/// Runs `run(i)` for i = 0 .. n_windows - 1 on the calling thread. The first
/// `warmup` calls are discarded; total time per call is measured here with a
/// monotonic clock, stage times come from the returned StageTimings.
LatencyReport time_inference(std::size_t n_windows, const std::function<StageTimings(std::size_t)>& run,
                             int warmup = 3);

/// Times predict_window over every window.
LatencyReport time_inference(const std::vector<CharacterWindow>& windows, const FeaturePipeline& pipeline,
                             const WeightBundle& weights, int warmup = 3);

struct PowerReading {
  double timestamp_ms = 0.0;
  double instant_mw = 0.0;
  double average_mw = 0.0;
};

struct PowerLog {
  std::vector<PowerReading> entries;
  double interval_ms = 100.0;
  std::size_t skipped_lines = 0;

  double mean_instant_mw() const;
};

/// Extracts "VDD_IN <instant>[mW]/<average>[mW]" from tegrastats-style lines.
/// Lines without the token are skipped and counted; a reading's timestamp is
/// its line index times the sampling interval.
PowerLog parse_power_log(const std::vector<std::string>& lines, double interval_ms = 100.0);
PowerLog parse_power_log(std::istream& in, double interval_ms = 100.0);

/// Mean instantaneous power (mW) * elapsed seconds / windows, in millijoules.
double energy_per_character(const PowerLog& log, double elapsed_s, std::size_t n_windows);

}  // namespace eegdec
