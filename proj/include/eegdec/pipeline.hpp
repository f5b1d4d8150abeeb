#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eegdec/eedgenet.hpp"
#include "eegdec/features.hpp"
#include "eegdec/preprocess.hpp"

namespace eegdec {

/// Runtime configuration, loadable from a key = value file:
///
///   bandpass.low = 1
///   bandpass.high = 50
///   bandpass.order = 4
///   asr.z = 3
///   preprocess = true
///   window_seconds = 1.5
///   wavelet = db4
///   features = all | name,name,... | @selection.json
///   bundle = model.eewb
///   seed = 1
struct PipelineConfig {
  BandpassSpec bandpass;
  AsrSpec asr;
  bool preprocess = true;
  double window_seconds = 1.5;
  std::string wavelet = "db4";
  std::vector<std::string> features;  // empty = full catalog
  std::optional<std::filesystem::path> bundle_path;
  std::uint64_t seed = 1;

  void validate() const;
  void set(const std::string& key, const std::string& value, const std::filesystem::path& base_dir = {});
};

PipelineConfig parse_pipeline_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Feature names from a selection report file (its kept list, in order).
std::vector<std::string> load_selection_names(const std::filesystem::path& path);

/// Preprocessing and feature extraction for a fixed configuration, with the
/// bandpass designed once up front. Immutable once built.
class FeaturePipeline {
 public:
  explicit FeaturePipeline(PipelineConfig config, double fs = 256.0);

  CharacterWindow preprocess(const CharacterWindow& win) const;
  FeatureMatrix features(const CharacterWindow& preprocessed) const;
  FeatureMatrix run(const CharacterWindow& win) const { return features(preprocess(win)); }

  const PipelineConfig& config() const { return config_; }
  const std::vector<int>& feature_indices() const { return indices_; }

 private:
  PipelineConfig config_;
  FilterCoefficients filter_;
  FeatureOptions options_;
  std::vector<int> indices_;
};

/// Feature columns the model consumes: the bundle's feature_names when
/// present, otherwise the configured subset (or the whole catalog).
std::vector<std::string> model_feature_names(const PipelineConfig& config, const ModelConfig& model);

/// preprocess -> extract -> forward for one window, with per-stage wall times
/// from a monotonic clock.
PredictionResult predict_window(const CharacterWindow& win, const FeaturePipeline& pipeline,
                                const WeightBundle& weights);
PredictionResult predict_window(const CharacterWindow& win, const PipelineConfig& config,
                                const WeightBundle& weights);

/// Builds a FeaturePipeline whose feature list matches the bundle.
FeaturePipeline pipeline_for_model(PipelineConfig config, const WeightBundle& weights, double fs = 256.0);

}  // namespace eegdec
