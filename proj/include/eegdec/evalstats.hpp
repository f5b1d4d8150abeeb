#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/signal.hpp"

namespace eegdec {

struct ClassMetrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  std::int64_t support = 0;
  std::int64_t predicted = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision_weighted = 0.0, recall_weighted = 0.0, f1_weighted = 0.0;
  double precision_macro = 0.0, recall_macro = 0.0, f1_macro = 0.0;
  std::vector<ClassMetrics> per_class;               // kNumClasses entries
  std::vector<std::vector<std::int64_t>> confusion;  // [true][pred]
  std::vector<int> zero_support_classes;
  std::int64_t n = 0;

  nlohmann::json to_json() const;
  std::string confusion_csv() const;
};

/// Support-weighted and macro precision/recall/F1 over the 27 classes.
/// Undefined ratios (0/0) count as 0; classes without support are listed.
MetricsReport classification_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct RunInterval {
  double mean = 0.0, half_width = 0.0, lo = 0.0, hi = 0.0;
};

/// mean +- t_{n-1, (1+level)/2} * s / sqrt(n), s the sample std.
RunInterval run_ci(const std::vector<double>& accuracies, double level = 0.95);

struct ReliabilityBin {
  double lo = 0.0, hi = 0.0;
  double mean_confidence = 0.0, accuracy = 0.0;
  std::size_t count = 0;
};

struct ReliabilityDiagram {
  std::vector<ReliabilityBin> bins;
  double ece = 0.0;
};

/// Equal-width bins over [0, 1]; bin i is [i/B, (i+1)/B) except the last,
/// which is closed on the right. Empty bins report zeros.
ReliabilityDiagram reliability_diagram(const std::vector<double>& confidences, const std::vector<bool>& correct,
                                       int bins = 10);

struct PredictiveInterval {
  std::int64_t k = 0, n = 0, m = 0;
  double alpha = 0.05;
  double lo = 0.0, hi = 0.0;  // fractions of m
  double mean = 0.0;          // predictive mean count, m (k + 1) / (n + 2)
};

/// log pmf of successes in m future trials given k of n observed under a
/// uniform prior: Beta-Binomial(m, k + 1, n - k + 1).
std::vector<double> beta_binomial_log_pmf(std::int64_t k, std::int64_t n, std::int64_t m);

/// Central predictive interval: lo is the smallest x with CDF(x) >= alpha/2,
/// hi the smallest x with CDF(x) >= 1 - alpha/2.
PredictiveInterval beta_binomial_interval(std::int64_t k, std::int64_t n, std::int64_t m, double alpha = 0.05);

/// x + N(0, (level * sigma_channel)^2) per channel, sigma the population std.
CharacterWindow inject_gaussian_noise(const CharacterWindow& win, double level, std::uint64_t seed);

struct LosoFold {
  std::string subject;
  std::vector<std::size_t> train, test;
  bool degenerate = false;  // empty training side
};

/// One fold per distinct subject id, ordered by subject id.
std::vector<LosoFold> split_loso(const std::vector<CharacterWindow>& windows);

}  // namespace eegdec
