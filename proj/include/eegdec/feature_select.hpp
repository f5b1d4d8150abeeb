#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/features.hpp"
#include "eegdec/matrix.hpp"
#include "eegdec/tensor_io.hpp"

namespace eegdec {

/// Feature-by-feature Pearson correlations. `degenerate(i, j)` marks entries
/// with no defined value (zero variance in every contributing window); those
/// hold r = 0.
struct CorrelationMatrix {
  Matrix values;
  std::vector<std::uint8_t> degenerate_mask;  // row-major, same shape as values
  std::vector<std::string> names;
  std::size_t n_windows_aggregated = 0;

  std::size_t size() const { return values.rows(); }
  bool degenerate(std::size_t i, std::size_t j) const { return degenerate_mask[i * size() + j] != 0; }
};

/// Correlation of each feature pair across the channels of one window.
CorrelationMatrix window_correlation(const FeatureMatrix& features);

enum class Aggregation { Mean, FisherZ };

/// Element-wise mean over windows, skipping entries that were degenerate in a
/// given window. FisherZ averages atanh(r) and maps back with tanh.
CorrelationMatrix aggregate_correlations(const std::vector<CorrelationMatrix>& mats,
                                         Aggregation mode = Aggregation::Mean);

struct SelectionThresholds {
  double neg = -0.4;
  double pos = 0.7;
};

struct SelectedFeature {
  std::string name;
  double score = 0.0;  // mean |r| over kept partners with r < neg
};

struct DroppedFeature {
  std::string name;
  std::string redundant_with;
  double r = 0.0;
};

struct SelectionReport {
  std::vector<SelectedFeature> kept;        // rank order
  std::vector<DroppedFeature> dropped;      // redundancy removals, in removal order
  std::vector<SelectedFeature> truncated;   // survivors cut by target_k, rank order
  SelectionThresholds thresholds;
  std::optional<int> target_k;

  std::vector<std::string> kept_names() const;
  nlohmann::json to_json() const;
  static SelectionReport from_json(const nlohmann::json& j);
};

/// Keeps features that take part in a pair with r < neg, then repeatedly
/// breaks the strongest pair above pos by dropping the member more correlated
/// (mean |r|) with the rest of the kept set, the larger index on ties.
/// Survivors are ranked by mean |r| to their negatively correlated kept
/// partners (lower index on ties) and, with target_k, truncated to k.
SelectionReport select_features(const CorrelationMatrix& corr, const SelectionThresholds& thresholds = {},
                                std::optional<int> target_k = std::nullopt);

/// Restricts columns to `kept`, in that order.
FeatureMatrix project_features(const FeatureMatrix& features, const std::vector<std::string>& kept);

TensorFile correlation_to_tensor(const CorrelationMatrix& corr);
CorrelationMatrix tensor_to_correlation(const TensorFile& tensor);

}  // namespace eegdec
