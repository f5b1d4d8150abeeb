#include "eegdec/features.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>

#include "eegdec/error.hpp"
#include "eegdec/features_time.hpp"

namespace eegdec {

namespace {

constexpr int kGraphicalStart = kNumTimeFeatures + kNumFrequencyFeatures;
constexpr int kDescriptorsPerBand = 13;

// Lazily evaluated per-channel feature groups.
class ChannelFeatures {
 public:
  ChannelFeatures(std::span<const double> x, double fs, const FeatureOptions& opts) : x_(x), fs_(fs), opts_(opts) {}

  double get(int index) {
    switch (index) {
      case 0: return moments_().mean;
      case 1: return moments_().variance;
      case 2: return moments_().skewness;
      case 3: return moments_().kurtosis;
      case 4: return rms_().rms;
      case 5: return rms_().ssc_count;
      case 6: return hjorth_().mobility;
      case 7: return hjorth_().complexity;
      case 8: return hurst_rs(x_);
      case 9: return shannon_entropy(x_, opts_.shannon_bins);
      case 10: return sample_entropy(x_, opts_.sample_entropy_m, opts_.sample_entropy_r);
      case 11: return permutation_entropy(x_, opts_.permutation_order, opts_.permutation_delay);
      case 12: case 13: case 14: case 15: case 16: return band_powers_()[static_cast<std::size_t>(index - 12)];
      case 17: return descriptors_().peak_frequency;
      case 18: return descriptors_().mean_dominant_frequency;
      case 19: return descriptors_().spectral_entropy;
      default: break;
    }
    const int g = index - kGraphicalStart;
    const int band = g / kDescriptorsPerBand;
    return subband_(band)[static_cast<std::size_t>(g % kDescriptorsPerBand)];
  }

 private:
  const Moments& moments_() {
    if (!moments_cache_) moments_cache_ = moments(x_);
    return *moments_cache_;
  }
  const RmsSsc& rms_() {
    if (!rms_cache_) rms_cache_ = rms_ssc(x_);
    return *rms_cache_;
  }
  const Hjorth& hjorth_() {
    if (!hjorth_cache_) hjorth_cache_ = hjorth(x_);
    return *hjorth_cache_;
  }
  const Spectrum& spectrum_() {
    if (!spectrum_cache_) spectrum_cache_ = magnitude_spectrum(x_, fs_, opts_.spectrum);
    return *spectrum_cache_;
  }
  const std::vector<double>& band_powers_() {
    if (!bands_cache_) bands_cache_ = band_powers(spectrum_(), eeg_bands());
    return *bands_cache_;
  }
  const SpectralDescriptors& descriptors_() {
    if (!desc_cache_) desc_cache_ = spectral_descriptors_unchecked(spectrum_());
    return *desc_cache_;
  }
  const std::array<double, 13>& subband_(int band) {
    auto& slot = subband_cache_.at(static_cast<std::size_t>(band));
    if (!slot) {
      if (!dwt_cache_) dwt_cache_ = dwt_decompose(x_, opts_.graphical.wavelet, opts_.graphical.levels);
      slot = subband_descriptors(*dwt_cache_, band, opts_.graphical).as_array();
    }
    return *slot;
  }

  std::span<const double> x_;
  double fs_;
  const FeatureOptions& opts_;
  std::optional<Moments> moments_cache_;
  std::optional<RmsSsc> rms_cache_;
  std::optional<Hjorth> hjorth_cache_;
  std::optional<Spectrum> spectrum_cache_;
  std::optional<std::vector<double>> bands_cache_;
  std::optional<SpectralDescriptors> desc_cache_;
  std::optional<DwtDecomposition> dwt_cache_;
  std::array<std::optional<std::array<double, 13>>, 5> subband_cache_;
};

}  // namespace

FeatureMatrix extract_features(const CharacterWindow& win, const FeatureOptions& opts,
                               const std::vector<int>& indices) {
  if (opts.graphical.levels != 4) {
    throw Error(ErrorCode::InvalidArgument, "the feature catalog assumes a 4-level decomposition");
  }
  std::vector<int> cols = indices;
  if (cols.empty()) {
    cols.resize(kNumFeatures);
    for (int i = 0; i < kNumFeatures; ++i) cols[static_cast<std::size_t>(i)] = i;
  }
  const auto& cat = catalog();
  FeatureMatrix fm;
  fm.values = Matrix(win.n_channels(), cols.size());
  for (int c : cols) {
    if (c < 0 || c >= kNumFeatures) throw Error(ErrorCode::UnknownFeature, "index " + std::to_string(c));
    fm.names.push_back(cat[static_cast<std::size_t>(c)].name);
  }
  for (std::size_t ch = 0; ch < win.n_channels(); ++ch) {
    ChannelFeatures cf(win.data.row(ch), win.fs, opts);
    for (std::size_t j = 0; j < cols.size(); ++j) fm.values(ch, j) = cf.get(cols[j]);
  }
  return fm;
}

std::vector<int> indices_for_names(const std::vector<std::string>& names) {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(feature_index(n));
  return out;
}

TensorFile features_to_tensor(const std::vector<FeatureMatrix>& features, const std::vector<CharacterWindow>& windows) {
  if (features.empty()) throw Error(ErrorCode::NoWindows, "no feature matrices");
  if (!windows.empty() && windows.size() != features.size()) {
    throw Error(ErrorCode::LengthMismatch, "feature and window counts differ");
  }
  const auto& first = features.front();
  TensorFile t;
  t.shape = {features.size(), first.n_channels(), first.n_features()};
  nlohmann::json labels = nlohmann::json::array(), subjects = nlohmann::json::array();
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& fm = features[i];
    if (fm.n_channels() != first.n_channels() || fm.names != first.names) {
      throw Error(ErrorCode::ShapeMismatch, "feature matrices differ in layout");
    }
    t.values.insert(t.values.end(), fm.values.data().begin(), fm.values.data().end());
    if (!windows.empty()) {
      const auto& w = windows[i];
      labels.push_back(w.label ? nlohmann::json(*w.label) : nlohmann::json(nullptr));
      subjects.push_back(w.subject_id ? nlohmann::json(*w.subject_id) : nlohmann::json(nullptr));
    }
  }
  t.meta = {{"kind", "features"}, {"feature_names", first.names}};
  if (!windows.empty()) {
    t.meta["labels"] = labels;
    t.meta["subject_ids"] = subjects;
  }
  return t;
}

std::vector<FeatureMatrix> tensor_to_features(const TensorFile& t) {
  if (t.shape.size() != 3) throw Error(ErrorCode::ShapeMismatch, "feature dataset tensor must be 3-D");
  const auto names = t.meta.at("feature_names").get<std::vector<std::string>>();
  if (names.size() != t.shape[2]) throw Error(ErrorCode::ShapeMismatch, "feature name count mismatch");
  const std::size_t stride = t.shape[1] * t.shape[2];
  std::vector<FeatureMatrix> out;
  for (std::size_t i = 0; i < t.shape[0]; ++i) {
    FeatureMatrix fm;
    fm.names = names;
    fm.values = Matrix(t.shape[1], t.shape[2],
                       std::vector<double>(t.values.begin() + static_cast<std::ptrdiff_t>(i * stride),
                                           t.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride)));
    out.push_back(std::move(fm));
  }
  return out;
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& fm) {
  TensorFile t;
  t.shape = {fm.n_channels(), fm.n_features()};
  t.values.assign(fm.values.data().begin(), fm.values.data().end());
  t.meta = {{"kind", "feature_matrix"}, {"n_channels", fm.n_channels()}, {"feature_names", fm.names}};
  write_tensor_file(path, t);
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  const auto t = read_tensor_file(path);
  if (t.shape.size() != 2) throw Error(ErrorCode::ShapeMismatch, "feature matrix tensor must be 2-D");
  FeatureMatrix fm;
  fm.names = t.meta.at("feature_names").get<std::vector<std::string>>();
  fm.values = Matrix(t.shape[0], t.shape[1], t.values);
  return fm;
}

void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& fm) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "channel";
  for (const auto& n : fm.names) out << ',' << n;
  out << '\n';
  char buf[64];
  for (std::size_t c = 0; c < fm.n_channels(); ++c) {
    out << c;
    for (std::size_t f = 0; f < fm.n_features(); ++f) {
      std::snprintf(buf, sizeof buf, "%.17g", fm.values(c, f));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace eegdec
