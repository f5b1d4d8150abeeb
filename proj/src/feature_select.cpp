#include "eegdec/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

constexpr double kFisherClamp = 1.0 - 1e-15;

}  // namespace

CorrelationMatrix window_correlation(const FeatureMatrix& features) {
  const std::size_t n = features.n_channels();
  const std::size_t k = features.n_features();
  if (n < 3) throw Error(ErrorCode::TooFewChannels, "need at least 3 channels, got " + std::to_string(n));

  // Centred columns and their norms.
  Matrix centred(k, n);
  std::vector<double> norm(k);
  for (std::size_t f = 0; f < k; ++f) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += features.values(c, f);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double d = features.values(c, f) - mean;
      centred(f, c) = d;
      ss += d * d;
    }
    norm[f] = std::sqrt(ss);
  }

  CorrelationMatrix out;
  out.values = Matrix(k, k);
  out.degenerate_mask.assign(k * k, 0);
  out.names = features.names;
  out.n_windows_aggregated = 1;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double r = 0.0;
      bool degenerate = false;
      if (norm[i] == 0.0 || norm[j] == 0.0 || !std::isfinite(norm[i]) || !std::isfinite(norm[j])) {
        degenerate = true;
      } else if (i == j) {
        r = 1.0;
      } else {
        double s = 0.0;
        const auto a = centred.row(i), b = centred.row(j);
        for (std::size_t c = 0; c < n; ++c) s += a[c] * b[c];
        r = std::clamp(s / (norm[i] * norm[j]), -1.0, 1.0);
      }
      out.values(i, j) = out.values(j, i) = r;
      out.degenerate_mask[i * k + j] = out.degenerate_mask[j * k + i] = degenerate ? 1 : 0;
    }
  }
  return out;
}

CorrelationMatrix aggregate_correlations(const std::vector<CorrelationMatrix>& mats, Aggregation mode) {
  if (mats.empty()) throw Error(ErrorCode::EmptyInput, "no correlation matrices to aggregate");
  const std::size_t k = mats.front().size();
  std::vector<double> sum(k * k, 0.0);
  std::vector<std::size_t> count(k * k, 0);
  std::size_t windows = 0;
  for (const auto& m : mats) {
    if (m.size() != k || m.names != mats.front().names) {
      throw Error(ErrorCode::ShapeMismatch, "correlation matrices cover different features");
    }
    windows += m.n_windows_aggregated;
    for (std::size_t e = 0; e < k * k; ++e) {
      if (m.degenerate_mask[e]) continue;
      const double r = m.values.data()[e];
      sum[e] += mode == Aggregation::FisherZ ? std::atanh(std::clamp(r, -kFisherClamp, kFisherClamp)) : r;
      ++count[e];
    }
  }

  CorrelationMatrix out;
  out.values = Matrix(k, k);
  out.degenerate_mask.assign(k * k, 0);
  out.names = mats.front().names;
  out.n_windows_aggregated = windows;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t e = i * k + j;
      if (count[e] == 0) {
        out.degenerate_mask[e] = 1;
        continue;
      }
      if (i == j) {
        out.values(i, j) = 1.0;
        continue;
      }
      const double mean = sum[e] / static_cast<double>(count[e]);
      out.values(i, j) = mode == Aggregation::FisherZ ? std::tanh(mean) : mean;
    }
  }
  return out;
}

SelectionReport select_features(const CorrelationMatrix& corr, const SelectionThresholds& thresholds,
                                std::optional<int> target_k) {
  if (!(thresholds.neg > -1.0 && thresholds.neg < 0.0) || !(thresholds.pos > 0.0 && thresholds.pos < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds must lie in (-1, 0) and (0, 1)");
  }
  if (target_k && *target_k < 1) throw Error(ErrorCode::InvalidArgument, "target_k must be >= 1");
  const std::size_t k = corr.size();
  auto r = [&](std::size_t i, std::size_t j) { return corr.values(i, j); };

  std::vector<bool> kept(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k && !kept[i]; ++j) {
      if (i != j && r(i, j) < thresholds.neg) kept[i] = true;
    }
  }
  if (std::none_of(kept.begin(), kept.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::NoCandidates, "no feature pair has r below " + std::to_string(thresholds.neg));
  }

  auto mean_abs_to_kept = [&](std::size_t i) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i || !kept[j]) continue;
      s += std::abs(r(i, j));
      ++n;
    }
    return n ? s / static_cast<double>(n) : 0.0;
  };

  SelectionReport report;
  report.thresholds = thresholds;
  report.target_k = target_k;
  for (;;) {
    std::size_t bi = k, bj = k;
    double best = thresholds.pos;
    for (std::size_t i = 0; i < k; ++i) {
      if (!kept[i]) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (kept[j] && r(i, j) > best) {
          best = r(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == k) break;
    const double si = mean_abs_to_kept(bi), sj = mean_abs_to_kept(bj);
    const std::size_t drop = si > sj ? bi : bj;
    const std::size_t other = drop == bi ? bj : bi;
    kept[drop] = false;
    report.dropped.push_back({corr.names[drop], corr.names[other], best});
  }

  std::vector<SelectedFeature> ranked;
  std::vector<std::size_t> order;
  std::vector<double> score(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (!kept[i]) continue;
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i && kept[j] && r(i, j) < thresholds.neg) {
        s += std::abs(r(i, j));
        ++n;
      }
    }
    score[i] = n ? s / static_cast<double>(n) : 0.0;
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    SelectedFeature f{corr.names[order[pos]], score[order[pos]]};
    if (target_k && pos >= static_cast<std::size_t>(*target_k)) {
      report.truncated.push_back(std::move(f));
    } else {
      report.kept.push_back(std::move(f));
    }
  }
  return report;
}

std::vector<std::string> SelectionReport::kept_names() const {
  std::vector<std::string> out;
  for (const auto& f : kept) out.push_back(f.name);
  return out;
}

nlohmann::json SelectionReport::to_json() const {
  nlohmann::json j;
  j["thresholds"] = {{"neg", thresholds.neg}, {"pos", thresholds.pos}};
  j["target_k"] = target_k ? nlohmann::json(*target_k) : nlohmann::json(nullptr);
  auto list = [](const std::vector<SelectedFeature>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& f : v) a.push_back({{"name", f.name}, {"score", f.score}});
    return a;
  };
  j["kept"] = list(kept);
  j["truncated"] = list(truncated);
  j["dropped"] = nlohmann::json::array();
  for (const auto& d : dropped) {
    j["dropped"].push_back({{"name", d.name}, {"redundant_with", d.redundant_with}, {"r", d.r}});
  }
  return j;
}

SelectionReport SelectionReport::from_json(const nlohmann::json& j) {
  try {
    SelectionReport rep;
    if (j.contains("thresholds")) {
      rep.thresholds.neg = j["thresholds"].at("neg").get<double>();
      rep.thresholds.pos = j["thresholds"].at("pos").get<double>();
    }
    if (j.contains("target_k") && !j["target_k"].is_null()) rep.target_k = j["target_k"].get<int>();
    auto list = [](const nlohmann::json& a, std::vector<SelectedFeature>& out) {
      for (const auto& f : a) {
        if (f.is_string()) {
          out.push_back({f.get<std::string>(), 0.0});
        } else {
          out.push_back({f.at("name").get<std::string>(), f.value("score", 0.0)});
        }
      }
    };
    list(j.at("kept"), rep.kept);
    if (j.contains("truncated")) list(j["truncated"], rep.truncated);
    if (j.contains("dropped")) {
      for (const auto& d : j["dropped"]) {
        rep.dropped.push_back(
            {d.at("name").get<std::string>(), d.at("redundant_with").get<std::string>(), d.at("r").get<double>()});
      }
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed selection report: ") + e.what());
  }
}

FeatureMatrix project_features(const FeatureMatrix& features, const std::vector<std::string>& kept) {
  std::vector<std::size_t> cols;
  cols.reserve(kept.size());
  for (const auto& name : kept) {
    const auto it = std::find(features.names.begin(), features.names.end(), name);
    if (it == features.names.end()) throw Error(ErrorCode::UnknownFeature, name);
    cols.push_back(static_cast<std::size_t>(it - features.names.begin()));
  }
  FeatureMatrix out;
  out.names = kept;
  out.values = Matrix(features.n_channels(), cols.size());
  for (std::size_t c = 0; c < features.n_channels(); ++c) {
    for (std::size_t j = 0; j < cols.size(); ++j) out.values(c, j) = features.values(c, cols[j]);
  }
  return out;
}

TensorFile correlation_to_tensor(const CorrelationMatrix& corr) {
  TensorFile t;
  t.shape = {corr.size(), corr.size()};
  t.values.assign(corr.values.data().begin(), corr.values.data().end());
  t.meta = {{"kind", "correlation"},
            {"feature_names", corr.names},
            {"n_windows_aggregated", corr.n_windows_aggregated},
            {"degenerate", corr.degenerate_mask}};
  return t;
}

CorrelationMatrix tensor_to_correlation(const TensorFile& t) {
  if (t.shape.size() != 2 || t.shape[0] != t.shape[1]) {
    throw Error(ErrorCode::ShapeMismatch, "correlation tensor must be square");
  }
  CorrelationMatrix c;
  c.values = Matrix(t.shape[0], t.shape[1], t.values);
  c.names = t.meta.at("feature_names").get<std::vector<std::string>>();
  c.n_windows_aggregated = t.meta.value("n_windows_aggregated", std::size_t{0});
  if (t.meta.contains("degenerate")) {
    c.degenerate_mask = t.meta["degenerate"].get<std::vector<std::uint8_t>>();
  } else {
    c.degenerate_mask.assign(t.values.size(), 0);
  }
  if (c.names.size() != c.size() || c.degenerate_mask.size() != t.values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "correlation metadata does not match its shape");
  }
  return c;
}

}  // namespace eegdec
