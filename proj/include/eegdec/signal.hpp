#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eegdec/matrix.hpp"

namespace eegdec {

inline constexpr int kNumClasses = 27;

/// One of the 27 decoding targets: 'a'..'z' plus '~' for the rest class.
class ClassLabel {
 public:
  explicit ClassLabel(int index);
  static ClassLabel from_glyph(char glyph);

  int index() const noexcept { return index_; }
  char glyph() const noexcept;

  bool operator==(const ClassLabel&) const = default;

 private:
  int index_;
};

/// Multichannel recording in microvolts. Validated on construction:
/// at least one channel, fs > 0, names match rows, every sample finite.
class EegRecording {
 public:
  EegRecording(Matrix samples, double fs, std::vector<std::string> channel_names,
               std::optional<std::string> subject_id = std::nullopt);

  const Matrix& samples() const noexcept { return samples_; }
  double fs() const noexcept { return fs_; }
  const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }
  const std::optional<std::string>& subject_id() const noexcept { return subject_id_; }

  std::size_t n_channels() const noexcept { return samples_.rows(); }
  std::size_t n_samples() const noexcept { return samples_.cols(); }
  double duration_seconds() const noexcept { return static_cast<double>(n_samples()) / fs_; }

 private:
  Matrix samples_;
  double fs_;
  std::vector<std::string> channel_names_;
  std::optional<std::string> subject_id_;
};

struct CharacterWindow {
  Matrix data;  // [channels x samples], microvolts
  double fs = 256.0;
  std::optional<int> label;
  std::optional<std::string> subject_id;
  int window_index = 0;

  std::size_t n_channels() const noexcept { return data.rows(); }
  std::size_t n_samples() const noexcept { return data.cols(); }
};

/// Ordered channel -> CSV column assignments. Output rows follow this order.
struct ChannelMapping {
  std::vector<std::pair<std::string, std::string>> entries;  // (channel, column)
};

/// Parses `channel=column` lines. Blank lines and `#` comments are skipped.
ChannelMapping load_mapping(const std::filesystem::path& path);
ChannelMapping parse_mapping(const std::string& text);

EegRecording ingest_csv(const std::filesystem::path& path, const ChannelMapping& mapping,
                        double fs, char delimiter = ',');

/// Writes a `t` column followed by one column per channel, 9 significant digits.
void export_csv(const EegRecording& rec, const std::filesystem::path& path, char delimiter = ',');

/// Non-overlapping windows from sample 0; the trailing partial window is dropped.
/// `labels[i]` (when present) labels window i.
std::vector<CharacterWindow> segment_windows(const EegRecording& rec, double window_seconds,
                                             const std::optional<std::vector<int>>& labels = std::nullopt);

std::size_t window_length(double fs, double window_seconds);

// --- synthetic generator -------------------------------------------------

struct SineComponent {
  double freq_hz;
  double amplitude = 1.0;
  double phase_rad = 0.0;
};
struct NoiseComponent {
  double sigma;
};
struct SpikeComponent {
  double time_s;
  double amplitude;
};
using SynthComponent = std::variant<SineComponent, NoiseComponent, SpikeComponent>;

struct SynthChannel {
  std::string name;
  std::vector<SynthComponent> components;
};

/// Deterministic in (channels, fs, seconds, seed). Each channel draws its
/// noise from its own stream so adding a channel never perturbs the others.
EegRecording synth_eeg(const std::vector<SynthChannel>& channels, double fs, double seconds,
                       std::uint64_t seed);

/// Text form used by the CLI: `<channel> sine <hz> [amp] [phase]`,
/// `<channel> noise <sigma>`, `<channel> spike <t_s> <amp>`.
std::vector<SynthChannel> parse_synth_spec(const std::string& text);

/// Default component set when no spec is supplied: an alpha-band tone with a
/// per-channel frequency offset plus unit white noise.
std::vector<SynthChannel> default_synth_channels(std::size_t n_channels);

struct ClassDatasetSpec {
  int n_classes = kNumClasses;
  int per_class = 200;
  std::size_t n_channels = 4;
  double fs = 256.0;
  double window_seconds = 1.5;
  double noise_sigma = 0.3;
  int n_subjects = 5;
  std::uint64_t seed = 1;
};

/// Labelled windows where every class is a distinct mixture of two on-grid
/// tones per channel, with random phase, amplitude jitter and white noise.
/// Windows are interleaved by class (class = i % n_classes).
std::vector<CharacterWindow> make_class_dataset(const ClassDatasetSpec& spec);

}  // namespace eegdec
