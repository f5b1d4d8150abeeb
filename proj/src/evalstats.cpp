#include "eegdec/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport classification_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " labels vs " +
                                               std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw Error(ErrorCode::LengthMismatch, "no labels");
  constexpr int K = kNumClasses;
  MetricsReport r;
  r.n = static_cast<std::int64_t>(y_true.size());
  r.confusion.assign(K, std::vector<std::int64_t>(K, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= K || p < 0 || p >= K) {
      throw Error(ErrorCode::InvalidArgument, "label out of range at position " + std::to_string(i));
    }
    ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }

  std::int64_t correct = 0;
  r.per_class.resize(K);
  for (int c = 0; c < K; ++c) {
    auto& m = r.per_class[static_cast<std::size_t>(c)];
    const auto cu = static_cast<std::size_t>(c);
    const std::int64_t tp = r.confusion[cu][cu];
    for (int o = 0; o < K; ++o) {
      m.support += r.confusion[cu][static_cast<std::size_t>(o)];
      m.predicted += r.confusion[static_cast<std::size_t>(o)][cu];
    }
    correct += tp;
    m.precision = ratio(tp, m.predicted);
    m.recall = ratio(tp, m.support);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    if (m.support == 0) r.zero_support_classes.push_back(c);
  }
  r.accuracy = ratio(correct, r.n);

  int present = 0;
  for (const auto& m : r.per_class) {
    const double w = ratio(m.support, r.n);
    r.precision_weighted += w * m.precision;
    r.f1_weighted += w * m.f1;
    r.precision_macro += m.precision;
    r.recall_macro += m.recall;
    r.f1_macro += m.f1;
    if (m.support > 0) ++present;
  }
  // Support-weighted recall telescopes to sum(TP) / N; evaluate it that way
  // so the identity with accuracy is exact rather than up to rounding.
  r.recall_weighted = r.accuracy;
  if (present > 0) {
    r.precision_macro /= present;
    r.recall_macro /= present;
    r.f1_macro /= present;
  }
  return r;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["accuracy"] = accuracy;
  j["precision_weighted"] = precision_weighted;
  j["recall_weighted"] = recall_weighted;
  j["f1_weighted"] = f1_weighted;
  j["precision_macro"] = precision_macro;
  j["recall_macro"] = recall_macro;
  j["f1_macro"] = f1_macro;
  j["zero_support_classes"] = zero_support_classes;
  j["per_class"] = nlohmann::json::array();
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const auto& m = per_class[c];
    j["per_class"].push_back({{"class", c},
                              {"glyph", std::string(1, ClassLabel(static_cast<int>(c)).glyph())},
                              {"precision", m.precision},
                              {"recall", m.recall},
                              {"f1", m.f1},
                              {"support", m.support}});
  }
  j["confusion"] = confusion;
  return j;
}

std::string MetricsReport::confusion_csv() const {
  std::ostringstream out;
  out << "true\\pred";
  for (std::size_t c = 0; c < confusion.size(); ++c) out << ',' << ClassLabel(static_cast<int>(c)).glyph();
  out << '\n';
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    out << ClassLabel(static_cast<int>(t)).glyph();
    for (auto v : confusion[t]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

RunInterval run_ci(const std::vector<double>& accuracies, double level) {
  if (accuracies.size() < 2) throw Error(ErrorCode::TooFewRuns, "need at least 2 runs");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must be in (0, 1)");
  const double n = static_cast<double>(accuracies.size());
  // Deviations from the first run keep identical runs at exactly zero spread.
  const double x0 = accuracies.front();
  double d = 0.0, d2 = 0.0;
  for (double a : accuracies) {
    d += a - x0;
    d2 += (a - x0) * (a - x0);
  }
  const double mean = x0 + d / n;
  const double s = std::sqrt(std::max(0.0, d2 - d * d / n) / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + 0.5 * level);
  const double hw = t * s / std::sqrt(n);
  return {mean, hw, mean - hw, mean + hw};
}

ReliabilityDiagram reliability_diagram(const std::vector<double>& confidences, const std::vector<bool>& correct,
                                       int bins) {
  if (confidences.size() != correct.size()) throw Error(ErrorCode::LengthMismatch, "confidences vs correctness");
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
  ReliabilityDiagram d;
  d.bins.resize(static_cast<std::size_t>(bins));
  std::vector<double> conf_sum(d.bins.size(), 0.0), hit(d.bins.size(), 0.0);
  for (int b = 0; b < bins; ++b) {
    d.bins[static_cast<std::size_t>(b)].lo = static_cast<double>(b) / bins;
    d.bins[static_cast<std::size_t>(b)].hi = static_cast<double>(b + 1) / bins;
  }
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidArgument, "confidence outside [0, 1]");
    auto b = static_cast<std::size_t>(std::floor(c * bins));
    if (b >= d.bins.size()) b = d.bins.size() - 1;
    ++d.bins[b].count;
    conf_sum[b] += c;
    hit[b] += correct[i] ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(confidences.size());
  for (std::size_t b = 0; b < d.bins.size(); ++b) {
    auto& bin = d.bins[b];
    if (bin.count == 0) continue;
    bin.mean_confidence = conf_sum[b] / static_cast<double>(bin.count);
    bin.accuracy = hit[b] / static_cast<double>(bin.count);
    d.ece += static_cast<double>(bin.count) / n * std::abs(bin.accuracy - bin.mean_confidence);
  }
  return d;
}

std::vector<double> beta_binomial_log_pmf(std::int64_t k, std::int64_t n, std::int64_t m) {
  if (n < 0 || k < 0 || k > n || m < 1) {
    throw Error(ErrorCode::InvalidCounts, "need 0 <= k <= n and m >= 1 (k=" + std::to_string(k) +
                                              ", n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
  const double a = static_cast<double>(k) + 1.0;
  const double b = static_cast<double>(n - k) + 1.0;
  const double md = static_cast<double>(m);
  // Successive pmf ratios, then log-sum-exp normalisation. Summing lgamma
  // terms loses ~1e-12 relative precision once m reaches the thousands.
  std::vector<double> out(static_cast<std::size_t>(m) + 1);
  out[0] = 0.0;
  for (std::int64_t x = 0; x < m; ++x) {
    const double xd = static_cast<double>(x);
    out[static_cast<std::size_t>(x) + 1] =
        out[static_cast<std::size_t>(x)] + std::log((md - xd) * (xd + a)) - std::log((xd + 1.0) * (md - xd - 1.0 + b));
  }
  const double peak = *std::max_element(out.begin(), out.end());
  double mass = 0.0;
  for (double v : out) mass += std::exp(v - peak);
  const double log_norm = peak + std::log(mass);
  for (double& v : out) v -= log_norm;
  return out;
}

PredictiveInterval beta_binomial_interval(std::int64_t k, std::int64_t n, std::int64_t m, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");
  const auto logp = beta_binomial_log_pmf(k, n, m);
  PredictiveInterval pi{k, n, m, alpha};
  double cdf = 0.0;
  bool have_lo = false, have_hi = false;
  for (std::size_t x = 0; x < logp.size(); ++x) {
    const double p = std::exp(logp[x]);
    cdf += p;
    pi.mean += static_cast<double>(x) * p;
    if (!have_lo && cdf >= alpha / 2.0) {
      pi.lo = static_cast<double>(x) / static_cast<double>(m);
      have_lo = true;
    }
    if (!have_hi && cdf >= 1.0 - alpha / 2.0) {
      pi.hi = static_cast<double>(x) / static_cast<double>(m);
      have_hi = true;
    }
  }
  // Rounding can leave the accumulated mass a hair under 1 - alpha/2.
  if (!have_lo) pi.lo = 1.0;
  if (!have_hi) pi.hi = 1.0;
  return pi;
}

CharacterWindow inject_gaussian_noise(const CharacterWindow& win, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be >= 0");
  CharacterWindow out = win;
  if (level == 0.0) return out;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t c = 0; c < out.n_channels(); ++c) {
    auto row = out.data.row(c);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    double ss = 0.0;
    for (double v : row) ss += (v - mean) * (v - mean);
    const double sigma = level * std::sqrt(ss / static_cast<double>(row.size()));
    for (double& v : row) v += sigma * normal(rng);
  }
  return out;
}

std::vector<LosoFold> split_loso(const std::vector<CharacterWindow>& windows) {
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!windows[i].subject_id) {
      throw Error(ErrorCode::MissingSubjectId, "window " + std::to_string(i) + " has no subject id");
    }
    by_subject[*windows[i].subject_id].push_back(i);
  }
  std::vector<LosoFold> folds;
  for (const auto& [subject, test] : by_subject) {
    LosoFold f;
    f.subject = subject;
    f.test = test;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (*windows[i].subject_id != subject) f.train.push_back(i);
    }
    f.degenerate = f.train.empty();
    folds.push_back(std::move(f));
  }
  return folds;
}

}  // namespace eegdec
