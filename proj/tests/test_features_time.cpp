#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "eegdec/error.hpp"
#include "eegdec/features_time.hpp"
#include "oracles/naive_sample_entropy.hpp"

using namespace eegdec;

namespace {

std::vector<double> normal(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

std::vector<double> sine(double f, double fs, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(k) / fs);
  return x;
}

std::vector<double> as_vector(const TimeFeatureSet& f) {
  return {f.mean,           f.variance,          f.skewness, f.kurtosis,        f.rms,
          f.ssc_count,      f.hjorth_mobility,   f.hjorth_complexity,           f.hurst,
          f.shannon_entropy, f.sample_entropy,   f.permutation_entropy};
}

}  // namespace

TEST_CASE("moments") {
  const std::vector<double> flat{1, 1, 1};
  const auto m = moments(flat);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 0.0);
  CHECK(m.skewness == 0.0);
  CHECK(m.kurtosis == 0.0);

  const std::vector<double> ramp{1, 2, 3};
  const auto r = moments(ramp);
  CHECK(r.mean == doctest::Approx(2.0));
  CHECK(r.variance == doctest::Approx(2.0 / 3.0));
  CHECK(r.skewness == doctest::Approx(0.0));
  // m4 / m2^2 = (2/3) / (4/9) = 1.5
  CHECK(r.kurtosis == doctest::Approx(1.5 - 3.0));

  const auto g = moments(normal(384, 11));
  CHECK(std::abs(g.skewness) < 0.3);
  CHECK(std::abs(g.kurtosis) < 0.6);

  CHECK_THROWS_AS(moments(std::vector<double>{1.0}), Error);
}

TEST_CASE("rms and slope sign changes") {
  const auto a = rms_ssc(std::vector<double>{3, 3, 3, 3});
  CHECK(a.rms == doctest::Approx(3.0));
  CHECK(a.ssc_count == 0);
  CHECK(rms_ssc(std::vector<double>{0, 1, 0, 1, 0}).ssc_count == 3);
  const auto s = rms_ssc(sine(10.0, 256.0, 384));
  CHECK(std::abs(s.ssc_count - 30) <= 1);
  CHECK(s.rms == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(0.01));
  CHECK_THROWS_AS(rms_ssc(std::vector<double>{1, 2}), Error);
}

TEST_CASE("hjorth parameters") {
  const auto flat = hjorth(std::vector<double>(50, 2.0));
  CHECK(flat.mobility == 0.0);
  CHECK(flat.complexity == 0.0);

  const auto s = hjorth(sine(10.0, 256.0, 384));
  const double expected = 2.0 * std::sin(std::numbers::pi * 10.0 / 256.0);
  CHECK(std::abs(s.mobility - expected) <= 0.02 * expected);

  const auto w = hjorth(normal(384, 3));
  CHECK(w.complexity > s.complexity);
}

TEST_CASE("hurst exponent") {
  CHECK(hurst_rs(std::vector<double>(16, 4.0)) == 0.5);

  std::vector<double> ramp(100);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  // Brute-force R and S.
  const double mean = 49.5;
  double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
  for (double v : ramp) {
    cum += v - mean;
    lo = std::min(lo, cum);
    hi = std::max(hi, cum);
    ss += (v - mean) * (v - mean);
  }
  const double expected = std::log((hi - lo) / std::sqrt(ss / 100.0)) / std::log(100.0);
  CHECK(hurst_rs(ramp) == doctest::Approx(expected).epsilon(1e-12));

  const double h = hurst_rs(normal(4096, 17));
  CHECK(h >= 0.4);
  CHECK(h <= 0.7);
  CHECK_THROWS_AS(hurst_rs(std::vector<double>(7, 1.0)), Error);
}

TEST_CASE("shannon entropy") {
  CHECK(shannon_entropy(std::vector<double>(40, 1.0)) == 0.0);

  std::vector<double> uniform(64);
  std::iota(uniform.begin(), uniform.end(), 0.0);
  CHECK(shannon_entropy(uniform) == doctest::Approx(std::log(64.0)).epsilon(1e-12));

  std::vector<double> two(50, -2.0);
  two.insert(two.end(), 50, 5.0);
  CHECK(std::abs(shannon_entropy(two) - std::log(2.0)) <= 1e-12);
}

TEST_CASE("sample entropy") {
  CHECK(sample_entropy(std::vector<double>(30, 1.0)) == 0.0);

  std::vector<double> alt(16);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<double>(i % 2);
  CHECK(std::abs(sample_entropy(alt) - oracle::sample_entropy(alt)) <= 1e-12);

  std::vector<double> perm(100);
  std::iota(perm.begin(), perm.end(), 0.0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  CHECK(std::abs(sample_entropy(perm) - oracle::sample_entropy(perm)) <= 1e-12);

  // No length-3 pair within a vanishing tolerance: capped.
  const auto noise = normal(40, 8);
  CHECK(sample_entropy(noise, 2, 1e-12) == doctest::Approx(sample_entropy_cap(40, 2)));
  CHECK(sample_entropy_cap(40, 2) == doctest::Approx(std::log(38.0) + std::log(37.0)));

  CHECK_THROWS_AS(sample_entropy(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("sample entropy matches the naive oracle on random short signals") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(8, 64);
  std::uniform_int_distribution<int> levels(2, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> x(n);
    if (trial % 2 == 0) {
      // Quantised values produce many exact ties at the tolerance boundary.
      std::uniform_int_distribution<int> q(0, levels(rng));
      for (auto& v : x) v = q(rng);
    } else {
      std::normal_distribution<double> d(0.0, 1.0);
      for (auto& v : x) v = d(rng);
    }
    CAPTURE(trial);
    CHECK(std::abs(sample_entropy(x) - oracle::sample_entropy(x)) <= 1e-12);
  }
}

TEST_CASE("permutation entropy") {
  std::vector<double> ramp(50);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  CHECK(permutation_entropy(ramp) == 0.0);
  CHECK(permutation_entropy(std::vector<double>(20, 3.0)) == 0.0);

  // Each of the six ordinal patterns occurs exactly once.
  const std::vector<double> balanced{7, 18, 17, 4, 11, 14, 9, 19};
  CHECK(permutation_entropy(balanced) == doctest::Approx(1.0).epsilon(1e-12));

  const double pe = permutation_entropy(normal(384, 1));
  CHECK(pe > 0.9);
  CHECK(pe <= 1.0);
  CHECK_THROWS_AS(permutation_entropy(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("shift invariance") {
  const auto x = normal(384, 21, 10.0);
  auto y = x;
  for (auto& v : y) v += 123.25;
  const auto a = as_vector(time_features(x));
  const auto b = as_vector(time_features(y));
  // variance, skewness, kurtosis, ssc, hjorth x2, sample and permutation entropy
  for (std::size_t i : {1u, 2u, 3u, 5u, 6u, 7u, 10u, 11u}) {
    CAPTURE(i);
    CHECK(std::abs(a[i] - b[i]) <= 1e-9 * std::max(1.0, std::abs(a[i])));
  }
}

TEST_CASE("positive scale invariance") {
  const auto x = normal(384, 22, 3.0);
  auto y = x;
  const double s = 4.5;
  for (auto& v : y) v *= s;
  const auto a = time_features(x);
  const auto b = time_features(y);
  CHECK(b.skewness == doctest::Approx(a.skewness).epsilon(1e-9));
  CHECK(b.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-9));
  CHECK(b.hjorth_mobility == doctest::Approx(a.hjorth_mobility).epsilon(1e-9));
  CHECK(b.hjorth_complexity == doctest::Approx(a.hjorth_complexity).epsilon(1e-9));
  CHECK(b.permutation_entropy == doctest::Approx(a.permutation_entropy).epsilon(1e-9));
  CHECK(b.rms == doctest::Approx(s * a.rms).epsilon(1e-9));
  CHECK(b.variance == doctest::Approx(s * s * a.variance).epsilon(1e-9));
}

TEST_CASE("all features finite and within range on random windows") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = time_features(normal(384, seed, 20.0));
    for (double v : as_vector(f)) CHECK(std::isfinite(v));
    CHECK(f.variance >= 0.0);
    CHECK(f.rms >= 0.0);
    CHECK(f.permutation_entropy >= 0.0);
    CHECK(f.permutation_entropy <= 1.0);
  }
}
