#include "eegdec/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>

#include "eegdec/error.hpp"

static_assert(std::endian::native == std::endian::little, "tensor I/O assumes a little-endian host");

namespace eegdec {

namespace {

constexpr char kMagic[4] = {'E', 'E', 'T', 'F'};

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

}  // namespace

std::size_t TensorFile::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& tensor) {
  if (tensor.element_count() != tensor.values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "tensor values do not match shape");
  }
  nlohmann::json header{{"dtype", "f64"}, {"shape", tensor.shape}, {"meta", tensor.meta}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(kMagic, 4);
  put_u32(out, kTensorFileVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(tensor.values.data()),
            static_cast<std::streamsize>(tensor.values.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char magic[4];
  std::uint32_t version = 0, header_len = 0;
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::BadMagic, path.string());
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&header_len), 4);
  if (!in || version != kTensorFileVersion) throw Error(ErrorCode::CorruptBundle, "unsupported tensor file version");

  std::string text(header_len, '\0');
  in.read(text.data(), header_len);
  if (!in) throw Error(ErrorCode::TruncatedPayload, "tensor header");

  TensorFile t;
  try {
    const auto header = nlohmann::json::parse(text);
    if (header.at("dtype") != "f64") throw Error(ErrorCode::CorruptBundle, "tensor dtype must be f64");
    t.shape = header.at("shape").get<std::vector<std::size_t>>();
    if (header.contains("meta")) t.meta = header.at("meta");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBundle, std::string("tensor header: ") + e.what());
  }
  t.values.resize(t.element_count());
  in.read(reinterpret_cast<char*>(t.values.data()), static_cast<std::streamsize>(t.values.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != t.values.size() * sizeof(double)) {
    throw Error(ErrorCode::TruncatedPayload, path.string());
  }
  return t;
}

TensorFile windows_to_tensor(const std::vector<CharacterWindow>& windows,
                             const std::vector<std::string>& channel_names) {
  if (windows.empty()) throw Error(ErrorCode::NoWindows, "no windows to serialise");
  const std::size_t channels = windows.front().n_channels();
  const std::size_t samples = windows.front().n_samples();
  TensorFile t;
  t.shape = {windows.size(), channels, samples};
  t.values.reserve(t.element_count());
  nlohmann::json labels = nlohmann::json::array();
  nlohmann::json subjects = nlohmann::json::array();
  nlohmann::json indices = nlohmann::json::array();
  for (const auto& w : windows) {
    if (w.n_channels() != channels || w.n_samples() != samples) {
      throw Error(ErrorCode::ShapeMismatch, "windows differ in shape");
    }
    t.values.insert(t.values.end(), w.data.data().begin(), w.data.data().end());
    labels.push_back(w.label ? nlohmann::json(*w.label) : nlohmann::json(nullptr));
    subjects.push_back(w.subject_id ? nlohmann::json(*w.subject_id) : nlohmann::json(nullptr));
    indices.push_back(w.window_index);
  }
  t.meta = {{"kind", "windows"},
            {"fs", windows.front().fs},
            {"labels", labels},
            {"subject_ids", subjects},
            {"window_index", indices}};
  if (!channel_names.empty()) t.meta["channel_names"] = channel_names;
  return t;
}

std::vector<CharacterWindow> tensor_to_windows(const TensorFile& t) {
  if (t.shape.size() != 3) throw Error(ErrorCode::ShapeMismatch, "window tensor must be 3-D");
  const std::size_t n = t.shape[0], channels = t.shape[1], samples = t.shape[2];
  const double fs = t.meta.value("fs", 256.0);
  std::vector<CharacterWindow> out;
  out.reserve(n);
  const std::size_t stride = channels * samples;
  for (std::size_t i = 0; i < n; ++i) {
    CharacterWindow w;
    w.data = Matrix(channels, samples,
                    std::vector<double>(t.values.begin() + static_cast<std::ptrdiff_t>(i * stride),
                                        t.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride)));
    w.fs = fs;
    w.window_index = static_cast<int>(i);
    if (t.meta.contains("labels") && !t.meta["labels"][i].is_null()) w.label = t.meta["labels"][i].get<int>();
    if (t.meta.contains("subject_ids") && !t.meta["subject_ids"][i].is_null()) {
      w.subject_id = t.meta["subject_ids"][i].get<std::string>();
    }
    if (t.meta.contains("window_index")) w.window_index = t.meta["window_index"][i].get<int>();
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace eegdec
