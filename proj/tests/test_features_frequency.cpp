#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "eegdec/error.hpp"
#include "eegdec/features_frequency.hpp"

using namespace eegdec;

namespace {

constexpr double kFs = 256.0;

std::vector<double> tone(double f, std::size_t n = 384, double amp = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(k) / kFs + phase);
  }
  return x;
}

std::vector<double> normal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 5.0);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

std::vector<double> impulse(std::size_t n) {
  std::vector<double> x(n, 0.0);
  x[0] = 1.0;
  return x;
}

}  // namespace

TEST_CASE("spectrum layout") {
  const auto s = magnitude_spectrum(tone(8.0), kFs);
  REQUIRE(s.freqs.size() == 193);
  CHECK(s.freqs[12] == doctest::Approx(8.0));
  CHECK(s.bin_width() == doctest::Approx(2.0 / 3.0));
  double sum = 0.0;
  for (double v : s.p) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.p[12] >= 0.95);
  CHECK(std::max_element(s.p.begin(), s.p.end()) - s.p.begin() == 12);
  CHECK_THROWS_AS(magnitude_spectrum(std::vector<double>(7, 1.0), kFs), Error);
}

TEST_CASE("zero signal gives a flagged uniform spectrum") {
  const auto s = magnitude_spectrum(std::vector<double>(384, 0.0), kFs);
  CHECK(s.degenerate);
  for (double v : s.p) CHECK(v == doctest::Approx(1.0 / 193.0));
  CHECK_THROWS_AS(spectral_descriptors(s), Error);
  for (double v : {spectral_descriptors_unchecked(s).peak_frequency,
                   spectral_descriptors_unchecked(s).spectral_entropy}) {
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("Parseval identity before normalisation") {
  const auto x = normal(384, 4);
  const auto s = magnitude_spectrum(x, kFs, SpectrumKind::Power);
  double energy = 0.0;
  for (double v : x) energy += v * v;
  double spectral = s.raw.front() + s.raw.back();
  for (std::size_t k = 1; k + 1 < s.raw.size(); ++k) spectral += 2.0 * s.raw[k];
  CHECK(spectral == doctest::Approx(384.0 * energy).epsilon(1e-9));
}

TEST_CASE("band definitions") {
  const auto& b = eeg_bands();
  CHECK(b[0].name == "delta");
  CHECK(b[0].lo_hz == 0.5);
  CHECK(b[4].name == "gamma");
  CHECK(b[4].closed_upper);
  for (int i = 0; i < 4; ++i) CHECK(b[static_cast<std::size_t>(i)].hi_hz == b[static_cast<std::size_t>(i + 1)].lo_hz);
}

TEST_CASE("on-grid tone concentrates in its band") {
  const auto s = magnitude_spectrum(tone(10.0), kFs);
  const auto bp = band_powers(s, eeg_bands());
  double total = 0.0;
  for (double v : bp) total += v;
  CHECK(bp[2] >= 0.9 * total);
}

TEST_CASE("flat spectrum gives band powers proportional to band widths") {
  // A unit impulse has a perfectly flat magnitude spectrum; 3840 samples put
  // the bins 1/15 Hz apart so every band holds many bins.
  const auto s = magnitude_spectrum(impulse(3840), kFs);
  const auto bp = band_powers(s, eeg_bands());
  std::vector<double> density;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& b = eeg_bands()[i];
    density.push_back(bp[i] / (b.hi_hz - b.lo_hz));
  }
  const auto [lo, hi] = std::minmax_element(density.begin(), density.end());
  CHECK(*hi / *lo <= 1.10);
}

TEST_CASE("zero-width band is rejected") {
  const auto s = magnitude_spectrum(tone(10.0), kFs);
  const std::vector<BandDef> empty{{"none", 5.1, 5.1, false}};
  CHECK_THROWS_AS(band_powers(s, empty), Error);
}

TEST_CASE("DC mass falls outside every band") {
  // A constant signal puts all spectral mass at 0 Hz, below delta.
  const auto s = magnitude_spectrum(std::vector<double>(384, 3.0), kFs);
  const auto bp = band_powers(s, eeg_bands());
  for (double v : bp) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("spectral descriptors of a single tone") {
  const auto d = spectral_descriptors(magnitude_spectrum(tone(8.0), kFs));
  CHECK(d.peak_frequency == 8.0);
  CHECK(d.mean_dominant_frequency >= 7.5);
  CHECK(d.mean_dominant_frequency <= 8.5);
  CHECK(d.spectral_entropy < 0.2);
}

TEST_CASE("two equal tones give the midpoint mean frequency") {
  auto x = tone(6.0);
  const auto y = tone(20.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  const auto d = spectral_descriptors(magnitude_spectrum(x, kFs));
  CHECK(std::abs(d.mean_dominant_frequency - 13.0) <= 2.0 / 3.0);
}

TEST_CASE("flat spectrum has unit normalised entropy") {
  const auto d = spectral_descriptors(magnitude_spectrum(impulse(384), kFs));
  CHECK(std::abs(d.spectral_entropy - 1.0) <= 1e-9);
  CHECK(d.spectral_entropy_raw > 0.0);
}

TEST_CASE("peak frequency is exact for on-grid tones") {
  for (int k = 1; k < 75; ++k) {
    const double f = k * 2.0 / 3.0;
    CAPTURE(f);
    CHECK(spectral_descriptors(magnitude_spectrum(tone(f, 384, 2.0, 0.3), kFs)).peak_frequency == f);
  }
}

TEST_CASE("band powers sum to at most one and entropy stays in range") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = frequency_features(normal(384, seed), kFs);
    const double sum = f.delta_power + f.theta_power + f.alpha_power + f.beta_power + f.gamma_power;
    CHECK(sum <= 1.0 + 1e-9);
    CHECK(f.spectral_entropy >= 0.0);
    CHECK(f.spectral_entropy <= 1.0);
  }
}

TEST_CASE("frequency features are amplitude-scale invariant") {
  const auto x = normal(384, 12);
  auto y = x;
  for (auto& v : y) v *= 7.25;
  const auto a = frequency_features(x, kFs);
  const auto b = frequency_features(y, kFs);
  const double av[] = {a.delta_power, a.theta_power, a.alpha_power, a.beta_power,
                       a.gamma_power, a.peak_frequency, a.mean_dominant_frequency, a.spectral_entropy};
  const double bv[] = {b.delta_power, b.theta_power, b.alpha_power, b.beta_power,
                       b.gamma_power, b.peak_frequency, b.mean_dominant_frequency, b.spectral_entropy};
  for (int i = 0; i < 8; ++i) CHECK(std::abs(av[i] - bv[i]) <= 1e-9 * std::max(1.0, std::abs(av[i])));
}

TEST_CASE("feature catalog") {
  const auto& cat = catalog();
  REQUIRE(cat.size() == 85);
  std::set<std::string> names;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].index == static_cast<int>(i));
    names.insert(cat[i].name);
  }
  CHECK(names.size() == 85);
  CHECK(feature_index("rms") < feature_index("delta_power"));
  CHECK(feature_index("delta_power") < feature_index("graphical_A_ellipse_area"));
  for (const char* n : {"hjorth_mobility", "rms", "hjorth_complexity", "delta_power", "graphical_A_ellipse_area",
                        "mean_dominant_frequency", "graphical_D3_ellipse_area", "graphical_D1_ellipse_area",
                        "graphical_D2_ellipse_area", "graphical_D4_ellipse_area"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK(cat[20].name == "graphical_A_ellipse_area");
  CHECK(cat[84].name == "graphical_D4_ctm");
  CHECK(cat[12].family == FeatureFamily::Frequency);
  CHECK_THROWS_AS(feature_index("no_such_feature"), Error);
}
