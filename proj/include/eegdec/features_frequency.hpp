#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eegdec {

enum class SpectrumKind { Magnitude, Power };

/// One-sided DFT spectrum of a real window (rectangular, no padding).
struct Spectrum {
  std::vector<double> freqs;  // k * fs / N, k = 0..N/2
  std::vector<double> raw;    // |X_k| (or |X_k|^2 for Power) before normalisation
  std::vector<double> p;      // raw / sum(raw); uniform when degenerate
  std::size_t n_samples = 0;
  double fs = 0.0;
  bool degenerate = false;  // all-zero input

  double bin_width() const { return fs / static_cast<double>(n_samples); }
};

Spectrum magnitude_spectrum(std::span<const double> x, double fs, SpectrumKind kind = SpectrumKind::Magnitude);

struct BandDef {
  std::string name;
  double lo_hz;
  double hi_hz;
  bool closed_upper = false;
};

/// delta [0.5,4), theta [4,8), alpha [8,13), beta [13,30), gamma [30,50].
const std::array<BandDef, 5>& eeg_bands();

/// Composite Simpson integral (in Hz) of the normalised spectrum over each
/// band's bins. An even number of bins integrates the last panel with the
/// trapezoid rule; a single bin integrates as one rectangle of bin width.
std::vector<double> band_powers(const Spectrum& spec, std::span<const BandDef> bands);

struct SpectralDescriptors {
  double peak_frequency;
  double mean_dominant_frequency;
  double spectral_entropy;      // normalised by ln(K), in [0, 1]
  double spectral_entropy_raw;  // nats
};

/// Descriptors over the bins in [0.5, 50] Hz, renormalised within that range.
/// Throws DegenerateSpectrum on an all-zero spectrum.
SpectralDescriptors spectral_descriptors(const Spectrum& spec);
/// Same computation without the degeneracy check; used by the extractor so
/// flat windows still yield finite features.
SpectralDescriptors spectral_descriptors_unchecked(const Spectrum& spec);

struct FrequencyFeatureSet {
  double delta_power, theta_power, alpha_power, beta_power, gamma_power, peak_frequency, mean_dominant_frequency,
      spectral_entropy;
};

FrequencyFeatureSet frequency_features(std::span<const double> x, double fs,
                                       SpectrumKind kind = SpectrumKind::Magnitude);

// --- canonical feature catalog -------------------------------------------

enum class FeatureFamily { Time, Frequency, Graphical };

struct FeatureId {
  int index;
  FeatureFamily family;
  std::string name;
};

inline constexpr int kNumTimeFeatures = 12;
inline constexpr int kNumFrequencyFeatures = 8;
inline constexpr int kNumGraphicalFeatures = 65;
inline constexpr int kNumFeatures = kNumTimeFeatures + kNumFrequencyFeatures + kNumGraphicalFeatures;

/// 85 entries: time block, frequency block, then graphical features for
/// sub-bands A, D1..D4 with 13 descriptors each. The order is a file-format
/// contract and never changes.
const std::vector<FeatureId>& catalog();

/// Index of `name` in the catalog; throws UnknownFeature.
int feature_index(std::string_view name);

std::vector<std::string> catalog_names();

}  // namespace eegdec
