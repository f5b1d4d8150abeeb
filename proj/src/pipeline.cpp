#include "eegdec/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "eegdec/error.hpp"
#include "eegdec/feature_select.hpp"

namespace eegdec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument, key + ": '" + v + "' is not a number");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument, key + ": '" + v + "' is not an integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidArgument, key + ": '" + v + "' is not a boolean");
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(bandpass.low_hz > 0.0) || !(bandpass.high_hz > bandpass.low_hz)) {
    throw Error(ErrorCode::InvalidBand, "bandpass edges must satisfy 0 < low < high");
  }
  if (bandpass.order < 1) throw Error(ErrorCode::InvalidBand, "bandpass order must be >= 1");
  if (!(asr.z_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "asr.z must be positive");
  if (!(window_seconds > 0.0)) throw Error(ErrorCode::InvalidArgument, "window_seconds must be positive");
  (void)wavelet_by_name(wavelet);
  for (const auto& f : features) (void)feature_index(f);
}

void PipelineConfig::set(const std::string& key, const std::string& value, const std::filesystem::path& base_dir) {
  if (key == "bandpass.low") {
    bandpass.low_hz = to_double(key, value);
  } else if (key == "bandpass.high") {
    bandpass.high_hz = to_double(key, value);
  } else if (key == "bandpass.order") {
    bandpass.order = to_int<int>(key, value);
  } else if (key == "asr.z") {
    asr.z_threshold = to_double(key, value);
  } else if (key == "preprocess") {
    preprocess = to_bool(key, value);
  } else if (key == "window_seconds") {
    window_seconds = to_double(key, value);
  } else if (key == "wavelet") {
    wavelet = value;
  } else if (key == "features") {
    features.clear();
    if (value == "all" || value.empty()) return;
    if (value.front() == '@') {
      std::filesystem::path p = value.substr(1);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      features = load_selection_names(p);
      return;
    }
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) features.push_back(item);
    }
  } else if (key == "bundle") {
    std::filesystem::path p = value;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    bundle_path = p;
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, value);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

PipelineConfig parse_pipeline_config(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    cfg.set(trim(line.substr(0, eq)), value, base_dir);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pipeline_config(ss.str(), path.parent_path());
}

std::vector<std::string> load_selection_names(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
  return SelectionReport::from_json(j).kept_names();
}

FeaturePipeline::FeaturePipeline(PipelineConfig config, double fs) : config_(std::move(config)) {
  config_.validate();
  config_.bandpass.fs = fs;
  if (config_.preprocess) filter_ = design_butterworth_bandpass(config_.bandpass);
  options_.graphical.wavelet = config_.wavelet;
  indices_ = indices_for_names(config_.features);
}

CharacterWindow FeaturePipeline::preprocess(const CharacterWindow& win) const {
  if (!config_.preprocess) return win;
  if (win.fs != config_.bandpass.fs) {
    throw Error(ErrorCode::InvalidArgument, "window sampled at " + std::to_string(win.fs) +
                                                " Hz, pipeline built for " + std::to_string(config_.bandpass.fs));
  }
  return preprocess_window(win, filter_, config_.asr);
}

FeatureMatrix FeaturePipeline::features(const CharacterWindow& preprocessed) const {
  return extract_features(preprocessed, options_, indices_);
}

std::vector<std::string> model_feature_names(const PipelineConfig& config, const ModelConfig& model) {
  std::vector<std::string> names = model.feature_names;
  if (names.empty()) names = config.features.empty() ? catalog_names() : config.features;
  if (names.size() != static_cast<std::size_t>(model.in_features)) {
    throw Error(ErrorCode::ShapeMismatch, "model expects " + std::to_string(model.in_features) +
                                              " features, pipeline provides " + std::to_string(names.size()));
  }
  return names;
}

FeaturePipeline pipeline_for_model(PipelineConfig config, const WeightBundle& weights, double fs) {
  config.features = model_feature_names(config, weights.config());
  return FeaturePipeline(std::move(config), fs);
}

PredictionResult predict_window(const CharacterWindow& win, const FeaturePipeline& pipeline,
                                const WeightBundle& weights) {
  const auto t0 = std::chrono::steady_clock::now();
  const CharacterWindow clean = pipeline.preprocess(win);
  const double pre_ms = ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const FeatureMatrix fm = pipeline.features(clean);
  const double feat_ms = ms_since(t1);

  const auto t2 = std::chrono::steady_clock::now();
  PredictionResult r = forward(fm.values, weights);
  r.timing.model_ms = ms_since(t2);
  r.timing.preprocess_ms = pre_ms;
  r.timing.features_ms = feat_ms;
  r.timing.total_ms = ms_since(t0);
  return r;
}

PredictionResult predict_window(const CharacterWindow& win, const PipelineConfig& config,
                                const WeightBundle& weights) {
  return predict_window(win, pipeline_for_model(config, weights, win.fs), weights);
}

}  // namespace eegdec
