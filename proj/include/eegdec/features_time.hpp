#pragma once

#include <span>

namespace eegdec {

struct Moments {
  double mean;
  double variance;  // population
  double skewness;  // m3 / m2^1.5, 0 when variance is 0
  double kurtosis;  // excess: m4 / m2^2 - 3, 0 when variance is 0
};

struct RmsSsc {
  double rms;
  int ssc_count;
};

struct Hjorth {
  double mobility;
  double complexity;
};

Moments moments(std::span<const double> x);
RmsSsc rms_ssc(std::span<const double> x);
Hjorth hjorth(std::span<const double> x);

/// Single-scale rescaled range: log(R/S) / log(N). Returns 0.5 for flat input.
double hurst_rs(std::span<const double> x);

/// Histogram entropy in nats over `bins` equal-width bins spanning [min, max].
double shannon_entropy(std::span<const double> x, int bins = 64);

/// SampEn with tolerance r = r_factor * population std and Chebyshev
/// distance <= r. Match probabilities use N - m + 1 templates at length m
/// and N - m at length m + 1. When no length-(m+1) pair matches the result
/// is capped at sample_entropy_cap(N, m).
double sample_entropy(std::span<const double> x, int m = 2, double r_factor = 0.2);
double sample_entropy_cap(std::size_t n, int m);

/// Bandt-Pompe entropy normalised by ln(order!). Ties rank by position.
double permutation_entropy(std::span<const double> x, int order = 3, int delay = 1);

struct TimeFeatureSet {
  double mean, variance, skewness, kurtosis, rms, ssc_count, hjorth_mobility, hjorth_complexity, hurst,
      shannon_entropy, sample_entropy, permutation_entropy;
};

TimeFeatureSet time_features(std::span<const double> x);

}  // namespace eegdec
