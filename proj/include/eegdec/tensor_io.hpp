#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegdec/signal.hpp"

namespace eegdec {

/// Binary tensor container shared by windows, feature matrices, correlation
/// matrices and wavelet coefficient dumps.
///
/// Layout (all integers little-endian):
///   bytes 0..3   magic "EETF"
///   u32          format version (1)
///   u32          header length in bytes
///   header       UTF-8 JSON: {"dtype":"f64","shape":[...],"meta":{...}}
///   payload      row-major little-endian f64, product(shape) values
struct TensorFile {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t element_count() const;
};

inline constexpr std::uint32_t kTensorFileVersion = 1;

void write_tensor_file(const std::filesystem::path& path, const TensorFile& tensor);
TensorFile read_tensor_file(const std::filesystem::path& path);

/// Windows as a [n_windows, channels, samples] tensor; fs, labels, subject ids
/// and window indices travel in meta.
TensorFile windows_to_tensor(const std::vector<CharacterWindow>& windows,
                             const std::vector<std::string>& channel_names = {});
std::vector<CharacterWindow> tensor_to_windows(const TensorFile& tensor);

}  // namespace eegdec
