#pragma once

#include <array>
#include <complex>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/signal.hpp"

namespace eegdec {

struct BandpassSpec {
  double low_hz = 1.0;
  double high_hz = 50.0;
  int order = 4;  // prototype order; the bandpass has 2*order poles
  double fs = 256.0;
};

struct AsrSpec {
  double z_threshold = 3.0;
};

/// One biquad: b0 b1 b2 a0 a1 a2 with a0 == 1.
struct SecondOrderSection {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};

struct FilterCoefficients {
  std::vector<SecondOrderSection> sections;

  std::complex<double> response(double freq_hz, double fs) const;
  double magnitude_db(double freq_hz, double fs) const;
  /// Poles of every section, two per section.
  std::vector<std::complex<double>> poles() const;

  nlohmann::json to_json() const;
  static FilterCoefficients from_json(const nlohmann::json& j);
};

enum class FilterMode { Forward, ZeroPhase };

/// Digital Butterworth bandpass as cascaded second-order sections: analog
/// prototype, lowpass-to-bandpass transform, bilinear transform with
/// prewarped edges. Each section is normalised to unit gain at the centre
/// frequency, so the cascade passes 0 dB there.
FilterCoefficients design_butterworth_bandpass(const BandpassSpec& spec);

/// Filters one channel. Forward mode starts from rest. Zero-phase mode runs
/// forward then backward over an odd-extended signal with 3 * (2 * sections)
/// samples of padding per edge and steady-state initial conditions.
std::vector<double> filter_signal(std::span<const double> x, const FilterCoefficients& coeffs, FilterMode mode);

CharacterWindow apply_filter(const CharacterWindow& win, const FilterCoefficients& coeffs,
                             FilterMode mode = FilterMode::ZeroPhase);

/// Per-channel z-score clipping. Samples with |x - mean| / std > threshold
/// (population std) are dropped and rebuilt by linear interpolation, with
/// backward fill at the start and forward fill at the end. Zero-variance
/// channels pass through untouched.
std::vector<double> simplified_asr_channel(std::span<const double> x, const AsrSpec& spec);
CharacterWindow simplified_asr(const CharacterWindow& win, const AsrSpec& spec = {});

CharacterWindow preprocess_window(const CharacterWindow& win, const BandpassSpec& bandpass, const AsrSpec& asr,
                                  FilterMode mode = FilterMode::ZeroPhase);
CharacterWindow preprocess_window(const CharacterWindow& win, const FilterCoefficients& coeffs, const AsrSpec& asr,
                                  FilterMode mode = FilterMode::ZeroPhase);

}  // namespace eegdec
