#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/matrix.hpp"

namespace eegdec {

struct TcbConfig {
  int initial_kernel = 10;
  int initial_dilation = 1;
  int initial_convs = 2;
  int residual_kernel = 3;
  std::vector<int> residual_dilations{2, 4};  // one conv per entry inside each residual block
  int residual_blocks = 2;
  int filters = 32;
  double dropout = 0.3;
};

struct DtbConfig {
  std::vector<int> hidden{512, 256, 128, 64};
  double dropout = 0.3;
  double l2 = 0.0008;
};

/// The EEG channels are the convolution (sequence) axis; features are the
/// input maps. Dropout and l2 are training-only and carried for the exporter.
struct ModelConfig {
  int seq_len = 32;
  int in_features = 85;
  TcbConfig tcb;
  DtbConfig dtb;
  int n_classes = 27;
  double bn_epsilon = 1e-3;
  double elu_alpha = 1.0;
  bool input_standardization = false;           // input.mean / input.std tensors present
  std::vector<std::string> feature_names;       // optional column contract

  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t size() const;
};

struct TensorSpec {
  std::string name;
  std::vector<std::size_t> shape;
};

/// Every tensor a config requires, in canonical (file) order.
std::vector<TensorSpec> expected_tensors(const ModelConfig& config);

/// Immutable after construction; safe to share across threads for inference.
class WeightBundle {
 public:
  WeightBundle() = default;
  /// Validates that `tensors` matches expected_tensors(config) exactly.
  WeightBundle(ModelConfig config, std::vector<std::pair<std::string, Tensor>> tensors);

  /// Zero conv/dense weights and biases, identity batch norm
  /// (gamma 1, beta 0, mean 0, var 1), identity input standardization.
  static WeightBundle identity(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const Tensor& tensor(const std::string& name) const;
  Tensor& mutable_tensor(const std::string& name);
  const std::vector<std::pair<std::string, Tensor>>& tensors() const { return tensors_; }

 private:
  ModelConfig config_;
  std::vector<std::pair<std::string, Tensor>> tensors_;
};

/// EEWB layout (little-endian):
///   "EEWB" | u32 version | u32 header_len | JSON header | f32 payload
/// header: {"config": {...}, "tensors": [{"name", "shape", "dtype": "f32",
/// "byte_offset"}]}, offsets relative to the start of the payload.
inline constexpr std::uint32_t kBundleVersion = 1;

WeightBundle load_bundle(const std::filesystem::path& path);
void save_bundle(const WeightBundle& bundle, const std::filesystem::path& path);
WeightBundle parse_bundle(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_bundle(const WeightBundle& bundle);

struct StageTimings {
  double preprocess_ms = 0.0;
  double features_ms = 0.0;
  double model_ms = 0.0;
  double total_ms = 0.0;
};

struct PredictionResult {
  std::vector<double> probs;
  std::vector<double> logits;
  int label = 0;
  StageTimings timing;
};

/// Inference forward pass over a [seq_len x in_features] input.
PredictionResult forward(const Matrix& input, const WeightBundle& weights);

/// Output of the temporal convolution block, [seq_len x filters].
Matrix temporal_block(const Matrix& input, const WeightBundle& weights);

/// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& logits);
/// Index of the largest value, lowest index on ties.
int argmax(const std::vector<double>& v);

}  // namespace eegdec
