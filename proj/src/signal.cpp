#include "eegdec/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delimiter)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidArgument, "matrix data size does not match shape");
  }
}

// --- ClassLabel ------------------------------------------------------------

ClassLabel::ClassLabel(int index) : index_(index) {
  if (index < 0 || index >= kNumClasses) {
    throw Error(ErrorCode::InvalidArgument, "class index out of range: " + std::to_string(index));
  }
}

ClassLabel ClassLabel::from_glyph(char glyph) {
  if (glyph == '~') return ClassLabel(26);
  if (glyph >= 'a' && glyph <= 'z') return ClassLabel(glyph - 'a');
  throw Error(ErrorCode::InvalidArgument, std::string("unknown class glyph '") + glyph + "'");
}

char ClassLabel::glyph() const noexcept {
  return index_ == 26 ? '~' : static_cast<char>('a' + index_);
}

// --- EegRecording ----------------------------------------------------------

EegRecording::EegRecording(Matrix samples, double fs, std::vector<std::string> channel_names,
                           std::optional<std::string> subject_id)
    : samples_(std::move(samples)),
      fs_(fs),
      channel_names_(std::move(channel_names)),
      subject_id_(std::move(subject_id)) {
  if (samples_.rows() < 1) throw Error(ErrorCode::InvalidArgument, "recording needs at least one channel");
  if (!(fs_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling rate must be positive");
  if (channel_names_.size() != samples_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "channel name count does not match channel rows");
  }
  for (double v : samples_.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "recording contains non-finite samples");
  }
}

// --- CSV -------------------------------------------------------------------

ChannelMapping parse_mapping(const std::string& text) {
  ChannelMapping mapping;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "mapping line lacks '=': " + t);
    }
    mapping.entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return mapping;
}

ChannelMapping load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mapping file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mapping(ss.str());
}

EegRecording ingest_csv(const std::filesystem::path& path, const ChannelMapping& mapping, double fs,
                        char delimiter) {
  if (mapping.entries.empty()) throw Error(ErrorCode::InvalidArgument, "channel mapping is empty");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw Error(ErrorCode::EmptyFile, path.string());
  const auto header = split(trim(line), delimiter);

  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) column_index.emplace(header[i], i);

  std::vector<std::size_t> selected;
  std::vector<std::string> names;
  for (const auto& [channel, column] : mapping.entries) {
    auto it = column_index.find(column);
    if (it == column_index.end()) throw Error(ErrorCode::MissingColumn, column);
    selected.push_back(it->second);
    names.push_back(channel);
  }

  std::vector<std::vector<double>> rows(selected.size());
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), delimiter);
    for (std::size_t c = 0; c < selected.size(); ++c) {
      const std::size_t col = selected[c];
      double v = 0.0;
      if (col >= cells.size() || !parse_double(cells[col], v)) {
        throw Error(ErrorCode::NonNumericCell,
                    "row " + std::to_string(row_number) + ", column '" + header[col] + "'");
      }
      rows[c].push_back(v);
    }
  }
  if (rows.front().empty()) throw Error(ErrorCode::EmptyFile, path.string() + " has no data rows");

  const std::size_t n = rows.front().size();
  Matrix samples(rows.size(), n);
  for (std::size_t c = 0; c < rows.size(); ++c) std::copy(rows[c].begin(), rows[c].end(), samples.row(c).begin());
  return EegRecording(std::move(samples), fs, std::move(names));
}

void export_csv(const EegRecording& rec, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << 't';
  for (const auto& name : rec.channel_names()) out << delimiter << name;
  out << '\n';
  char buf[64];
  for (std::size_t k = 0; k < rec.n_samples(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(k) / rec.fs());
    out << buf;
    for (std::size_t c = 0; c < rec.n_channels(); ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", rec.samples()(c, k));
      out << delimiter << buf;
    }
    out << '\n';
  }
}

// --- windowing -------------------------------------------------------------

std::size_t window_length(double fs, double window_seconds) {
  if (!(window_seconds > 0.0)) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
  const double exact = fs * window_seconds;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-9 || rounded < 1.0) {
    throw Error(ErrorCode::NonIntegralWindow, "fs * window_seconds = " + std::to_string(exact));
  }
  return static_cast<std::size_t>(rounded);
}

std::vector<CharacterWindow> segment_windows(const EegRecording& rec, double window_seconds,
                                             const std::optional<std::vector<int>>& labels) {
  const std::size_t len = window_length(rec.fs(), window_seconds);
  const std::size_t count = rec.n_samples() / len;
  std::vector<CharacterWindow> windows;
  windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    CharacterWindow win;
    win.data = Matrix(rec.n_channels(), len);
    for (std::size_t c = 0; c < rec.n_channels(); ++c) {
      auto src = rec.samples().row(c).subspan(w * len, len);
      std::copy(src.begin(), src.end(), win.data.row(c).begin());
    }
    win.fs = rec.fs();
    win.subject_id = rec.subject_id();
    win.window_index = static_cast<int>(w);
    if (labels && w < labels->size()) win.label = ClassLabel((*labels)[w]).index();
    windows.push_back(std::move(win));
  }
  return windows;
}

// --- synthetic generator ---------------------------------------------------

EegRecording synth_eeg(const std::vector<SynthChannel>& channels, double fs, double seconds,
                       std::uint64_t seed) {
  if (!(seconds > 0.0)) throw Error(ErrorCode::InvalidArgument, "seconds must be positive");
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "synth needs at least one channel");
  const auto n = static_cast<std::size_t>(std::llround(fs * seconds));
  Matrix samples(channels.size(), n);
  std::vector<std::string> names;

  for (std::size_t c = 0; c < channels.size(); ++c) {
    names.push_back(channels[c].name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    auto row = samples.row(c);
    for (const auto& comp : channels[c].components) {
      if (const auto* s = std::get_if<SineComponent>(&comp)) {
        for (std::size_t k = 0; k < n; ++k) {
          row[k] += s->amplitude *
                    std::sin(2.0 * std::numbers::pi * s->freq_hz * static_cast<double>(k) / fs + s->phase_rad);
        }
      } else if (const auto* g = std::get_if<NoiseComponent>(&comp)) {
        std::normal_distribution<double> dist(0.0, g->sigma);
        for (std::size_t k = 0; k < n; ++k) row[k] += dist(rng);
      } else if (const auto* p = std::get_if<SpikeComponent>(&comp)) {
        const auto idx = static_cast<std::size_t>(std::llround(p->time_s * fs));
        if (idx < n) row[idx] += p->amplitude;
      }
    }
  }
  return EegRecording(std::move(samples), fs, std::move(names));
}

std::vector<SynthChannel> parse_synth_spec(const std::string& text) {
  std::vector<SynthChannel> channels;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, kind;
    if (!(ls >> name)) continue;
    if (!(ls >> kind)) throw Error(ErrorCode::InvalidArgument, "synth spec line " + std::to_string(line_no));
    std::vector<double> params;
    for (double v; ls >> v;) params.push_back(v);

    auto it = std::find_if(channels.begin(), channels.end(), [&](const auto& ch) { return ch.name == name; });
    if (it == channels.end()) {
      channels.push_back({name, {}});
      it = std::prev(channels.end());
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (params.size() < lo || params.size() > hi) {
        throw Error(ErrorCode::InvalidArgument, "synth spec line " + std::to_string(line_no) + ": wrong arity");
      }
    };
    if (kind == "sine") {
      need(1, 3);
      it->components.push_back(SineComponent{params[0], params.size() > 1 ? params[1] : 1.0,
                                             params.size() > 2 ? params[2] : 0.0});
    } else if (kind == "noise") {
      need(1, 1);
      it->components.push_back(NoiseComponent{params[0]});
    } else if (kind == "spike") {
      need(2, 2);
      it->components.push_back(SpikeComponent{params[0], params[1]});
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown synth component '" + kind + "'");
    }
  }
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "synth spec defines no channels");
  return channels;
}

std::vector<SynthChannel> default_synth_channels(std::size_t n_channels) {
  std::vector<SynthChannel> out;
  for (std::size_t c = 0; c < n_channels; ++c) {
    out.push_back({"C" + std::to_string(c + 1),
                   {SineComponent{10.0 + 0.5 * static_cast<double>(c), 10.0, 0.0}, NoiseComponent{1.0}}});
  }
  return out;
}

std::vector<CharacterWindow> make_class_dataset(const ClassDatasetSpec& spec) {
  if (spec.n_classes < 1 || spec.n_classes > kNumClasses || spec.per_class < 1 || spec.n_channels < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid class dataset spec");
  }
  const std::size_t len = window_length(spec.fs, spec.window_seconds);
  const double bin_hz = spec.fs / static_cast<double>(len);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jitter(0.8, 1.2);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);

  const int total = spec.n_classes * spec.per_class;
  std::vector<CharacterWindow> windows;
  windows.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const int cls = i % spec.n_classes;
    CharacterWindow win;
    win.data = Matrix(spec.n_channels, len);
    win.fs = spec.fs;
    win.label = cls;
    win.subject_id = "S" + std::to_string(i % std::max(1, spec.n_subjects));
    win.window_index = i;
    for (std::size_t ch = 0; ch < spec.n_channels; ++ch) {
      const int c = static_cast<int>(ch);
      // Even bins carry the primary tone, odd bins the secondary, so the two never collide.
      const int primary_bin = 6 + ((cls + 5 * c) % kNumClasses) * 2;
      const int secondary_bin = 5 + ((7 * cls + 3 * c + 13) % kNumClasses) * 2;
      const double f1 = primary_bin * bin_hz;
      const double f2 = secondary_bin * bin_hz;
      const double a1 = jitter(rng);
      const double a2 = 0.5 * jitter(rng);
      const double p1 = phase(rng);
      const double p2 = phase(rng);
      auto row = win.data.row(ch);
      for (std::size_t k = 0; k < len; ++k) {
        const double t = static_cast<double>(k) / spec.fs;
        row[k] = a1 * std::sin(2.0 * std::numbers::pi * f1 * t + p1) +
                 a2 * std::sin(2.0 * std::numbers::pi * f2 * t + p2) + noise(rng);
      }
    }
    windows.push_back(std::move(win));
  }
  return windows;
}

}  // namespace eegdec
