#include "eegdec/eedgenet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <set>

#include "eegdec/error.hpp"

namespace eegdec {

static_assert(std::endian::native == std::endian::little, "bundle I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'E', 'W', 'B'};

std::vector<std::size_t> vec1(int n) { return {static_cast<std::size_t>(n)}; }

void add_bn(std::vector<TensorSpec>& out, const std::string& prefix, int n) {
  for (const char* p : {"gamma", "beta", "running_mean", "running_var"}) {
    out.push_back({prefix + ".bn." + p, vec1(n)});
  }
}

void add_conv(std::vector<TensorSpec>& out, const std::string& prefix, int filters, int in, int kernel) {
  out.push_back({prefix + ".conv.weight",
                 {static_cast<std::size_t>(filters), static_cast<std::size_t>(in), static_cast<std::size_t>(kernel)}});
  out.push_back({prefix + ".conv.bias", vec1(filters)});
  add_bn(out, prefix, filters);
}

std::uint32_t read_u32(const std::uint8_t* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + 4);
}

// Activations are [position][channel] row-major.
struct Activations {
  std::size_t len = 0, channels = 0;
  std::vector<double> v;
};

double elu(double x, double alpha) { return x > 0.0 ? x : alpha * std::expm1(x); }

class Forward {
 public:
  explicit Forward(const WeightBundle& w) : w_(w), cfg_(w.config()) {}

  Activations conv_bn_elu(const Activations& x, const std::string& prefix, int dilation) const {
    const Tensor& k = w_.tensor(prefix + ".conv.weight");
    const Tensor& bias = w_.tensor(prefix + ".conv.bias");
    const std::size_t out_ch = k.shape[0], in_ch = k.shape[1], ks = k.shape[2];
    Activations y{x.len, out_ch, std::vector<double>(x.len * out_ch)};
    for (std::size_t t = 0; t < x.len; ++t) {
      for (std::size_t o = 0; o < out_ch; ++o) {
        double s = bias.data[o];
        for (std::size_t j = 0; j < ks; ++j) {
          // Causal: tap j reads (ks - 1 - j) * dilation samples into the past.
          const long src = static_cast<long>(t) - static_cast<long>((ks - 1 - j) * static_cast<std::size_t>(dilation));
          if (src < 0) continue;
          const double* xin = &x.v[static_cast<std::size_t>(src) * in_ch];
          const float* wk = &k.data[(o * in_ch) * ks + j];
          for (std::size_t i = 0; i < in_ch; ++i) s += static_cast<double>(wk[i * ks]) * xin[i];
        }
        y.v[t * out_ch + o] = s;
      }
    }
    bn_elu(y.v, out_ch, prefix);
    return y;
  }

  void bn_elu(std::vector<double>& v, std::size_t channels, const std::string& prefix) const {
    const auto& g = w_.tensor(prefix + ".bn.gamma").data;
    const auto& b = w_.tensor(prefix + ".bn.beta").data;
    const auto& m = w_.tensor(prefix + ".bn.running_mean").data;
    const auto& var = w_.tensor(prefix + ".bn.running_var").data;
    std::vector<double> scale(channels), shift(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      scale[c] = static_cast<double>(g[c]) / std::sqrt(static_cast<double>(var[c]) + cfg_.bn_epsilon);
      shift[c] = static_cast<double>(b[c]) - static_cast<double>(m[c]) * scale[c];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t c = i % channels;
      v[i] = elu(v[i] * scale[c] + shift[c], cfg_.elu_alpha);
    }
  }

  std::vector<double> dense(const std::vector<double>& x, const std::string& prefix) const {
    const Tensor& wt = w_.tensor(prefix + ".weight");
    const Tensor& bias = w_.tensor(prefix + ".bias");
    const std::size_t out = wt.shape[0], in = wt.shape[1];
    std::vector<double> y(out);
    for (std::size_t o = 0; o < out; ++o) {
      double s = bias.data[o];
      const float* row = &wt.data[o * in];
      for (std::size_t i = 0; i < in; ++i) s += static_cast<double>(row[i]) * x[i];
      y[o] = s;
    }
    return y;
  }

  Activations temporal(const Matrix& input) const {
    if (input.rows() != static_cast<std::size_t>(cfg_.seq_len) ||
        input.cols() != static_cast<std::size_t>(cfg_.in_features)) {
      throw Error(ErrorCode::ShapeMismatch, "input is " + std::to_string(input.rows()) + "x" +
                                                std::to_string(input.cols()) + ", model expects " +
                                                std::to_string(cfg_.seq_len) + "x" + std::to_string(cfg_.in_features));
    }
    Activations x{input.rows(), input.cols(), std::vector<double>(input.data().begin(), input.data().end())};
    if (cfg_.input_standardization) {
      const auto& mean = w_.tensor("input.mean").data;
      const auto& sd = w_.tensor("input.std").data;
      for (std::size_t i = 0; i < x.v.size(); ++i) {
        const std::size_t f = i % x.channels;
        x.v[i] = (x.v[i] - mean[f]) / static_cast<double>(sd[f]);
      }
    }
    for (int i = 0; i < cfg_.tcb.initial_convs; ++i) {
      x = conv_bn_elu(x, "tcb.initial." + std::to_string(i), cfg_.tcb.initial_dilation);
    }
    for (int b = 0; b < cfg_.tcb.residual_blocks; ++b) {
      Activations branch = x;
      for (std::size_t c = 0; c < cfg_.tcb.residual_dilations.size(); ++c) {
        branch = conv_bn_elu(branch, "tcb.res." + std::to_string(b) + "." + std::to_string(c),
                             cfg_.tcb.residual_dilations[c]);
      }
      for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] += branch.v[i];
    }
    return x;
  }

  std::vector<double> logits(const Matrix& input) const {
    // Position-major flatten: index = position * filters + filter.
    std::vector<double> h = temporal(input).v;
    for (std::size_t l = 0; l < cfg_.dtb.hidden.size(); ++l) {
      const std::string prefix = "dtb." + std::to_string(l);
      h = dense(h, prefix + ".dense");
      bn_elu(h, h.size(), prefix);
    }
    return dense(h, "head");
  }

 private:
  const WeightBundle& w_;
  const ModelConfig& cfg_;
};

}  // namespace

void ModelConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::CorruptBundle, "invalid config: " + what); };
  if (seq_len < 1 || in_features < 1) bad("seq_len and in_features must be positive");
  if (tcb.filters < 1) bad("filters must be positive");
  if (tcb.initial_kernel < 1 || tcb.residual_kernel < 1) bad("kernels must be positive");
  if (tcb.initial_dilation < 1) bad("dilations must be positive");
  if (tcb.initial_convs < 1 || tcb.residual_blocks < 0) bad("block counts");
  if (tcb.residual_blocks > 0 && tcb.residual_dilations.empty()) bad("residual blocks need dilations");
  for (int d : tcb.residual_dilations) {
    if (d < 1) bad("dilations must be positive");
  }
  if (dtb.hidden.empty()) bad("hidden layers must be non-empty");
  for (int h : dtb.hidden) {
    if (h < 1) bad("hidden widths must be positive");
  }
  if (n_classes != 27) bad("n_classes must be 27");
  if (!(bn_epsilon > 0.0)) bad("bn_epsilon must be positive");
  if (!feature_names.empty() && feature_names.size() != static_cast<std::size_t>(in_features)) {
    bad("feature_names length differs from in_features");
  }
}

nlohmann::json ModelConfig::to_json() const {
  nlohmann::json j;
  j["seq_len"] = seq_len;
  j["in_features"] = in_features;
  j["tcb"] = {{"initial_kernel", tcb.initial_kernel},       {"initial_dilation", tcb.initial_dilation},
              {"initial_convs", tcb.initial_convs},         {"residual_kernel", tcb.residual_kernel},
              {"residual_dilations", tcb.residual_dilations}, {"residual_blocks", tcb.residual_blocks},
              {"filters", tcb.filters},                     {"dropout", tcb.dropout}};
  j["dtb"] = {{"hidden", dtb.hidden}, {"dropout", dtb.dropout}, {"l2", dtb.l2}};
  j["n_classes"] = n_classes;
  j["bn_epsilon"] = bn_epsilon;
  j["elu_alpha"] = elu_alpha;
  j["input_standardization"] = input_standardization;
  if (!feature_names.empty()) j["feature_names"] = feature_names;
  return j;
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.seq_len = j.at("seq_len").get<int>();
    c.in_features = j.at("in_features").get<int>();
    if (j.contains("tcb")) {
      const auto& t = j["tcb"];
      c.tcb.initial_kernel = t.value("initial_kernel", c.tcb.initial_kernel);
      c.tcb.initial_dilation = t.value("initial_dilation", c.tcb.initial_dilation);
      c.tcb.initial_convs = t.value("initial_convs", c.tcb.initial_convs);
      c.tcb.residual_kernel = t.value("residual_kernel", c.tcb.residual_kernel);
      c.tcb.residual_dilations = t.value("residual_dilations", c.tcb.residual_dilations);
      c.tcb.residual_blocks = t.value("residual_blocks", c.tcb.residual_blocks);
      c.tcb.filters = t.value("filters", c.tcb.filters);
      c.tcb.dropout = t.value("dropout", c.tcb.dropout);
    }
    if (j.contains("dtb")) {
      const auto& d = j["dtb"];
      c.dtb.hidden = d.value("hidden", c.dtb.hidden);
      c.dtb.dropout = d.value("dropout", c.dtb.dropout);
      c.dtb.l2 = d.value("l2", c.dtb.l2);
    }
    c.n_classes = j.value("n_classes", c.n_classes);
    c.bn_epsilon = j.value("bn_epsilon", c.bn_epsilon);
    c.elu_alpha = j.value("elu_alpha", c.elu_alpha);
    c.input_standardization = j.value("input_standardization", false);
    c.feature_names = j.value("feature_names", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBundle, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::size_t Tensor::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<TensorSpec> expected_tensors(const ModelConfig& c) {
  std::vector<TensorSpec> out;
  if (c.input_standardization) {
    out.push_back({"input.mean", vec1(c.in_features)});
    out.push_back({"input.std", vec1(c.in_features)});
  }
  int in = c.in_features;
  for (int i = 0; i < c.tcb.initial_convs; ++i) {
    add_conv(out, "tcb.initial." + std::to_string(i), c.tcb.filters, in, c.tcb.initial_kernel);
    in = c.tcb.filters;
  }
  for (int b = 0; b < c.tcb.residual_blocks; ++b) {
    for (std::size_t k = 0; k < c.tcb.residual_dilations.size(); ++k) {
      add_conv(out, "tcb.res." + std::to_string(b) + "." + std::to_string(k), c.tcb.filters, c.tcb.filters,
               c.tcb.residual_kernel);
    }
  }
  int width = c.seq_len * c.tcb.filters;
  for (std::size_t l = 0; l < c.dtb.hidden.size(); ++l) {
    const std::string prefix = "dtb." + std::to_string(l);
    out.push_back({prefix + ".dense.weight",
                   {static_cast<std::size_t>(c.dtb.hidden[l]), static_cast<std::size_t>(width)}});
    out.push_back({prefix + ".dense.bias", vec1(c.dtb.hidden[l])});
    add_bn(out, prefix, c.dtb.hidden[l]);
    width = c.dtb.hidden[l];
  }
  out.push_back({"head.weight", {static_cast<std::size_t>(c.n_classes), static_cast<std::size_t>(width)}});
  out.push_back({"head.bias", vec1(c.n_classes)});
  return out;
}

WeightBundle::WeightBundle(ModelConfig config, std::vector<std::pair<std::string, Tensor>> tensors)
    : config_(std::move(config)) {
  config_.validate();
  std::map<std::string, Tensor> by_name;
  for (auto& [name, t] : tensors) {
    if (!by_name.emplace(name, std::move(t)).second) {
      throw Error(ErrorCode::CorruptBundle, "duplicate tensor '" + name + "'");
    }
  }
  for (const auto& spec : expected_tensors(config_)) {
    auto it = by_name.find(spec.name);
    if (it == by_name.end()) throw Error(ErrorCode::ShapeMismatch, spec.name + ": missing");
    Tensor& t = it->second;
    if (t.shape != spec.shape) {
      std::string got, want;
      for (auto d : t.shape) got += std::to_string(d) + ",";
      for (auto d : spec.shape) want += std::to_string(d) + ",";
      throw Error(ErrorCode::ShapeMismatch, spec.name + ": shape [" + got + "] expected [" + want + "]");
    }
    if (t.data.size() != t.size()) throw Error(ErrorCode::ShapeMismatch, spec.name + ": data length");
    for (float v : t.data) {
      if (!std::isfinite(v)) throw Error(ErrorCode::CorruptBundle, spec.name + ": non-finite value");
    }
    tensors_.emplace_back(spec.name, std::move(t));
    by_name.erase(it);
  }
  if (!by_name.empty()) throw Error(ErrorCode::CorruptBundle, "unknown tensor '" + by_name.begin()->first + "'");
}

WeightBundle WeightBundle::identity(const ModelConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, Tensor>> tensors;
  for (const auto& spec : expected_tensors(config)) {
    Tensor t{spec.shape, {}};
    const bool ones = spec.name.ends_with(".bn.gamma") || spec.name.ends_with(".bn.running_var") ||
                      spec.name == "input.std";
    t.data.assign(t.size(), ones ? 1.0f : 0.0f);
    tensors.emplace_back(spec.name, std::move(t));
  }
  return WeightBundle(config, std::move(tensors));
}

const Tensor& WeightBundle::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors_) {
    if (n == name) return t;
  }
  throw Error(ErrorCode::CorruptBundle, "no tensor '" + name + "'");
}

Tensor& WeightBundle::mutable_tensor(const std::string& name) {
  return const_cast<Tensor&>(std::as_const(*this).tensor(name));
}

std::vector<std::uint8_t> serialize_bundle(const WeightBundle& bundle) {
  nlohmann::json header;
  header["config"] = bundle.config().to_json();
  header["tensors"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& [name, t] : bundle.tensors()) {
    header["tensors"].push_back({{"name", name}, {"shape", t.shape}, {"dtype", "f32"}, {"byte_offset", offset}});
    offset += t.data.size() * sizeof(float);
  }
  const std::string text = header.dump();
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  append_u32(out, kBundleVersion);
  append_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& [name, t] : bundle.tensors()) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(t.data.data());
    out.insert(out.end(), p, p + t.data.size() * sizeof(float));
  }
  return out;
}

WeightBundle parse_bundle(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "not an EEWB bundle");
  }
  if (bytes.size() < 12) throw Error(ErrorCode::TruncatedPayload, "file ends inside the preamble");
  const std::uint32_t version = read_u32(bytes.data() + 4);
  if (version != kBundleVersion) throw Error(ErrorCode::CorruptBundle, "unsupported version " + std::to_string(version));
  const std::size_t header_len = read_u32(bytes.data() + 8);
  if (bytes.size() < 12 + header_len) throw Error(ErrorCode::TruncatedPayload, "file ends inside the header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBundle, std::string("header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("config") || !header.contains("tensors") ||
      !header["tensors"].is_array()) {
    throw Error(ErrorCode::CorruptBundle, "header lacks config or tensors");
  }
  const ModelConfig config = ModelConfig::from_json(header["config"]);

  const std::uint8_t* payload = bytes.data() + 12 + header_len;
  const std::size_t payload_len = bytes.size() - 12 - header_len;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::vector<std::pair<std::string, Tensor>> tensors;
  for (const auto& entry : header["tensors"]) {
    Tensor t;
    std::string name;
    std::size_t offset = 0;
    try {
      name = entry.at("name").get<std::string>();
      t.shape = entry.at("shape").get<std::vector<std::size_t>>();
      offset = entry.at("byte_offset").get<std::size_t>();
      if (entry.at("dtype").get<std::string>() != "f32") {
        throw Error(ErrorCode::CorruptBundle, name + ": dtype must be f32");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptBundle, std::string("tensor entry: ") + e.what());
    }
    const std::size_t nbytes = t.size() * sizeof(float);
    if (offset > payload_len || nbytes > payload_len - offset) {
      throw Error(ErrorCode::TruncatedPayload, name + ": payload ends before tensor data");
    }
    t.data.resize(t.size());
    std::memcpy(t.data.data(), payload + offset, nbytes);
    ranges.emplace_back(offset, offset + nbytes);
    tensors.emplace_back(std::move(name), std::move(t));
  }
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    if (ranges[i].first < ranges[i - 1].second) throw Error(ErrorCode::CorruptBundle, "overlapping tensors");
  }
  return WeightBundle(config, std::move(tensors));
}

WeightBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_bundle(bytes);
}

void save_bundle(const WeightBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = serialize_bundle(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) return {};
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += p[i] = std::exp(logits[i] - mx);
  for (double& v : p) v /= sum;
  return p;
}

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

Matrix temporal_block(const Matrix& input, const WeightBundle& weights) {
  const auto act = Forward(weights).temporal(input);
  return Matrix(act.len, act.channels, act.v);
}

PredictionResult forward(const Matrix& input, const WeightBundle& weights) {
  PredictionResult r;
  r.logits = Forward(weights).logits(input);
  r.probs = softmax(r.logits);
  r.label = argmax(r.probs);
  return r;
}

}  // namespace eegdec
