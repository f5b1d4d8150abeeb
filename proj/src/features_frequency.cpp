#include "eegdec/features_frequency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

constexpr double kDescriptorLo = 0.5;
constexpr double kDescriptorHi = 50.0;

double simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n == 0) return 0.0;
  if (n == 1) return y[0] * h;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  // Simpson needs an even number of intervals; an odd remainder is one trapezoid.
  const std::size_t simpson_points = (n % 2 == 1) ? n : n - 1;
  double s = y[0] + y[simpson_points - 1];
  for (std::size_t i = 1; i + 1 < simpson_points; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
  double total = s * h / 3.0;
  if (simpson_points != n) total += 0.5 * h * (y[n - 2] + y[n - 1]);
  return total;
}

}  // namespace

Spectrum magnitude_spectrum(std::span<const double> x, double fs, SpectrumKind kind) {
  if (x.size() < 8) throw Error(ErrorCode::TooShort, "spectrum needs at least 8 samples");
  if (!(fs > 0.0)) throw Error(ErrorCode::InvalidArgument, "fs must be positive");
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;

  std::vector<double> cos_t(n), sin_t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    cos_t[i] = std::cos(a);
    sin_t[i] = std::sin(a);
  }

  Spectrum s;
  s.n_samples = n;
  s.fs = fs;
  s.freqs.resize(bins);
  s.raw.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      re += x[t] * cos_t[idx];
      im -= x[t] * sin_t[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    const double mag2 = re * re + im * im;
    s.raw[k] = kind == SpectrumKind::Power ? mag2 : std::sqrt(mag2);
    s.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(n);
  }

  double total = 0.0;
  for (double v : s.raw) total += v;
  s.p.resize(bins);
  if (total > 0.0) {
    for (std::size_t k = 0; k < bins; ++k) s.p[k] = s.raw[k] / total;
  } else {
    s.degenerate = true;
    std::fill(s.p.begin(), s.p.end(), 1.0 / static_cast<double>(bins));
  }
  return s;
}

const std::array<BandDef, 5>& eeg_bands() {
  static const std::array<BandDef, 5> bands{{{"delta", 0.5, 4.0, false},
                                             {"theta", 4.0, 8.0, false},
                                             {"alpha", 8.0, 13.0, false},
                                             {"beta", 13.0, 30.0, false},
                                             {"gamma", 30.0, 50.0, true}}};
  return bands;
}

std::vector<double> band_powers(const Spectrum& spec, std::span<const BandDef> bands) {
  std::vector<double> out;
  out.reserve(bands.size());
  std::vector<double> y;
  for (const auto& band : bands) {
    y.clear();
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
      const double f = spec.freqs[k];
      if (f >= band.lo_hz && (f < band.hi_hz || (band.closed_upper && f == band.hi_hz))) y.push_back(spec.p[k]);
    }
    if (y.empty()) throw Error(ErrorCode::EmptyBand, "no spectral bins in band '" + band.name + "'");
    out.push_back(simpson(y, spec.bin_width()));
  }
  return out;
}

SpectralDescriptors spectral_descriptors_unchecked(const Spectrum& spec) {
  double mass = 0.0, weighted = 0.0, peak_val = -1.0, peak_f = 0.0;
  std::size_t k_count = 0;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    const double f = spec.freqs[k];
    if (f < kDescriptorLo || f > kDescriptorHi) continue;
    ++k_count;
    mass += spec.p[k];
    weighted += f * spec.p[k];
    if (spec.p[k] > peak_val) {
      peak_val = spec.p[k];
      peak_f = f;
    }
  }
  if (k_count == 0) throw Error(ErrorCode::EmptyBand, "no spectral bins in [0.5, 50] Hz");
  if (mass <= 0.0) {
    // Energy only outside the descriptor range.
    return {peak_f, 0.0, 0.0, 0.0};
  }
  double h = 0.0;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    const double f = spec.freqs[k];
    if (f < kDescriptorLo || f > kDescriptorHi || spec.p[k] <= 0.0) continue;
    const double q = spec.p[k] / mass;
    h -= q * std::log(q);
  }
  const double norm = k_count > 1 ? h / std::log(static_cast<double>(k_count)) : 0.0;
  return {peak_f, weighted / mass, norm, h};
}

SpectralDescriptors spectral_descriptors(const Spectrum& spec) {
  if (spec.degenerate) throw Error(ErrorCode::DegenerateSpectrum, "all-zero spectrum");
  return spectral_descriptors_unchecked(spec);
}

FrequencyFeatureSet frequency_features(std::span<const double> x, double fs, SpectrumKind kind) {
  const auto spec = magnitude_spectrum(x, fs, kind);
  const auto bp = band_powers(spec, eeg_bands());
  const auto d = spectral_descriptors_unchecked(spec);
  return {bp[0], bp[1], bp[2], bp[3], bp[4], d.peak_frequency, d.mean_dominant_frequency, d.spectral_entropy};
}

// --- catalog ---------------------------------------------------------------

namespace {

std::vector<FeatureId> build_catalog() {
  static constexpr const char* time_names[] = {
      "mean",   "variance",           "skewness", "kurtosis",        "rms",            "ssc_count",
      "hjorth_mobility", "hjorth_complexity", "hurst", "shannon_entropy", "sample_entropy", "permutation_entropy"};
  static constexpr const char* freq_names[] = {"delta_power", "theta_power",    "alpha_power",
                                               "beta_power",  "gamma_power",    "peak_frequency",
                                               "mean_dominant_frequency", "spectral_entropy"};
  static constexpr const char* sub_bands[] = {"A", "D1", "D2", "D3", "D4"};
  static constexpr const char* descriptors[] = {"ellipse_area", "eccentricity", "eig1",       "eig2",
                                                "mean_dev_identity", "mean_dist_origin", "ssvl", "covariance",
                                                "mean_x",       "mean_y",       "std_x",      "std_y",
                                                "ctm"};
  std::vector<FeatureId> out;
  int i = 0;
  for (const char* n : time_names) out.push_back({i++, FeatureFamily::Time, n});
  for (const char* n : freq_names) out.push_back({i++, FeatureFamily::Frequency, n});
  for (const char* b : sub_bands) {
    for (const char* d : descriptors) {
      out.push_back({i++, FeatureFamily::Graphical, std::string("graphical_") + b + "_" + d});
    }
  }
  return out;
}

}  // namespace

const std::vector<FeatureId>& catalog() {
  static const std::vector<FeatureId> cat = build_catalog();
  return cat;
}

int feature_index(std::string_view name) {
  for (const auto& f : catalog()) {
    if (f.name == name) return f.index;
  }
  throw Error(ErrorCode::UnknownFeature, std::string(name));
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& f : catalog()) names.push_back(f.name);
  return names;
}

}  // namespace eegdec
