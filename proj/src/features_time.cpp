#include "eegdec/features_time.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pop_variance(std::span<const double> x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

std::vector<double> diff(std::span<const double> x) {
  std::vector<double> d(x.size() > 0 ? x.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return d;
}

void require_length(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() < n) {
    throw Error(ErrorCode::TooShort, std::string(what) + " needs at least " + std::to_string(n) + " samples, got " +
                                         std::to_string(x.size()));
  }
}

}  // namespace

Moments moments(std::span<const double> x) {
  require_length(x, 2, "moments");
  const double n = static_cast<double>(x.size());
  const double m = mean_of(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) return {m, 0.0, 0.0, 0.0};
  return {m, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

RmsSsc rms_ssc(std::span<const double> x) {
  require_length(x, 3, "rms/ssc");
  double sq = 0.0;
  for (double v : x) sq += v * v;
  int ssc = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if ((x[i] - x[i - 1]) * (x[i + 1] - x[i]) < 0.0) ++ssc;
  }
  return {std::sqrt(sq / static_cast<double>(x.size())), ssc};
}

Hjorth hjorth(std::span<const double> x) {
  require_length(x, 3, "hjorth");
  const double v0 = pop_variance(x);
  if (v0 == 0.0) return {0.0, 0.0};
  const auto d1 = diff(x);
  const auto d2 = diff(d1);
  const double v1 = pop_variance(d1);
  const double mobility = std::sqrt(v1 / v0);
  if (v1 == 0.0) return {mobility, 0.0};
  const double v2 = pop_variance(d2);
  return {mobility, std::sqrt(v2 / v1) / mobility};
}

double hurst_rs(std::span<const double> x) {
  require_length(x, 8, "hurst");
  const double m = mean_of(x);
  double cum = 0.0, lo = 0.0, hi = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - m;
    ss += d * d;
    cum += d;
    if (i == 0) {
      lo = hi = cum;
    } else {
      lo = std::min(lo, cum);
      hi = std::max(hi, cum);
    }
  }
  const double s = std::sqrt(ss / static_cast<double>(x.size()));
  const double r = hi - lo;
  if (s == 0.0 || r == 0.0) return 0.5;
  return std::log(r / s) / std::log(static_cast<double>(x.size()));
}

double shannon_entropy(std::span<const double> x, int bins) {
  require_length(x, 1, "shannon entropy");
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, counts.size() - 1)]++;
  }
  const double n = static_cast<double>(x.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

double sample_entropy_cap(std::size_t n, int m) {
  return std::log(static_cast<double>(n - m)) + std::log(static_cast<double>(n - m - 1));
}

double sample_entropy(std::span<const double> x, int m, double r_factor) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be >= 1");
  require_length(x, static_cast<std::size_t>(m) + 2, "sample entropy");
  const std::size_t n = x.size();
  const auto mm = static_cast<std::size_t>(m);
  const double r = r_factor * std::sqrt(pop_variance(x));

  // Unordered pair counts; the per-template sums in the definition are twice these.
  std::uint64_t pairs_m = 0, pairs_m1 = 0;
  const std::size_t templates_m = n - mm + 1;
  for (std::size_t i = 0; i < templates_m; ++i) {
    for (std::size_t j = i + 1; j < templates_m; ++j) {
      std::size_t k = 0;
      while (k < mm && std::abs(x[i + k] - x[j + k]) <= r) ++k;
      if (k < mm) continue;
      ++pairs_m;
      if (j + mm < n && std::abs(x[i + mm] - x[j + mm]) <= r) ++pairs_m1;
    }
  }
  if (pairs_m1 == 0) return sample_entropy_cap(n, m);

  const double nm = static_cast<double>(n - mm);
  const double phi_m = 2.0 * static_cast<double>(pairs_m) / ((nm + 1.0) * nm);
  const double phi_m1 = 2.0 * static_cast<double>(pairs_m1) / (nm * (nm - 1.0));
  return -std::log(phi_m1 / phi_m);
}

double permutation_entropy(std::span<const double> x, int order, int delay) {
  if (order < 2 || delay < 1) throw Error(ErrorCode::InvalidArgument, "order >= 2 and delay >= 1 required");
  require_length(x, static_cast<std::size_t>(order * delay + 1), "permutation entropy");
  const auto ord = static_cast<std::size_t>(order);
  const auto del = static_cast<std::size_t>(delay);
  const std::size_t count = x.size() - (ord - 1) * del;

  std::size_t n_patterns = 1;
  for (std::size_t k = 2; k <= ord; ++k) n_patterns *= k;
  std::vector<std::size_t> hist(n_patterns, 0);
  std::vector<std::size_t> idx(ord);

  for (std::size_t t = 0; t < count; ++t) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return x[t + a * del] < x[t + b * del]; });
    // Lehmer code of the ranking permutation.
    std::size_t code = 0;
    for (std::size_t i = 0; i < ord; ++i) {
      std::size_t smaller = 0;
      for (std::size_t j = i + 1; j < ord; ++j) smaller += idx[j] < idx[i];
      code = code * (ord - i) + smaller;
    }
    hist[code]++;
  }
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(count);
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(n_patterns));
}

TimeFeatureSet time_features(std::span<const double> x) {
  const auto mo = moments(x);
  const auto rs = rms_ssc(x);
  const auto hj = hjorth(x);
  return {mo.mean,
          mo.variance,
          mo.skewness,
          mo.kurtosis,
          rs.rms,
          static_cast<double>(rs.ssc_count),
          hj.mobility,
          hj.complexity,
          hurst_rs(x),
          shannon_entropy(x),
          sample_entropy(x),
          permutation_entropy(x)};
}

}  // namespace eegdec
