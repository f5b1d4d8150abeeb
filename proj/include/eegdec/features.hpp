#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eegdec/features_frequency.hpp"
#include "eegdec/features_graphical.hpp"
#include "eegdec/matrix.hpp"
#include "eegdec/signal.hpp"
#include "eegdec/tensor_io.hpp"

namespace eegdec {

/// Per-window features, [channel][feature], columns named from the catalog.
struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> names;

  std::size_t n_channels() const { return values.rows(); }
  std::size_t n_features() const { return values.cols(); }
};

struct FeatureOptions {
  int shannon_bins = 64;
  int sample_entropy_m = 2;
  double sample_entropy_r = 0.2;
  int permutation_order = 3;
  int permutation_delay = 1;
  SpectrumKind spectrum = SpectrumKind::Magnitude;
  GraphicalOptions graphical;
};

/// Computes the catalog features listed in `indices` (all 85 when empty), in
/// that column order. Only the computations the subset depends on are run, so
/// a 10-feature subset skips entropy estimation entirely.
FeatureMatrix extract_features(const CharacterWindow& win, const FeatureOptions& opts = {},
                               const std::vector<int>& indices = {});

std::vector<int> indices_for_names(const std::vector<std::string>& names);

/// Feature dataset file: tensor [n_windows, channels, features] with
/// feature_names, labels and subject_ids in meta.
TensorFile features_to_tensor(const std::vector<FeatureMatrix>& features, const std::vector<CharacterWindow>& windows);
std::vector<FeatureMatrix> tensor_to_features(const TensorFile& tensor);

/// Single-window export: JSON header then row-major f64 values
/// (the same container as every other tensor file, shape [channels, features]).
void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& fm);
FeatureMatrix read_feature_matrix(const std::filesystem::path& path);
void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& fm);

}  // namespace eegdec
