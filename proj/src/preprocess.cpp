#include "eegdec/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegdec/error.hpp"

namespace eegdec {

using cplx = std::complex<double>;

std::complex<double> FilterCoefficients::response(double freq_hz, double fs) const {
  const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / fs);  // z^-1
  const cplx z2 = z1 * z1;
  cplx h = 1.0;
  for (const auto& s : sections) {
    h *= (s.b[0] + s.b[1] * z1 + s.b[2] * z2) / (s.a[0] + s.a[1] * z1 + s.a[2] * z2);
  }
  return h;
}

double FilterCoefficients::magnitude_db(double freq_hz, double fs) const {
  return 20.0 * std::log10(std::abs(response(freq_hz, fs)));
}

std::vector<std::complex<double>> FilterCoefficients::poles() const {
  std::vector<cplx> out;
  for (const auto& s : sections) {
    // z^2 + a1 z + a2 = 0
    const cplx disc = std::sqrt(cplx(s.a[1] * s.a[1] - 4.0 * s.a[0] * s.a[2], 0.0));
    out.push_back((-s.a[1] + disc) / (2.0 * s.a[0]));
    out.push_back((-s.a[1] - disc) / (2.0 * s.a[0]));
  }
  return out;
}

nlohmann::json FilterCoefficients::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : sections) j.push_back({s.b[0], s.b[1], s.b[2], s.a[0], s.a[1], s.a[2]});
  return {{"format", "sos"}, {"sections", j}};
}

FilterCoefficients FilterCoefficients::from_json(const nlohmann::json& j) {
  FilterCoefficients f;
  for (const auto& row : j.at("sections")) {
    const auto v = row.get<std::vector<double>>();
    if (v.size() != 6) throw Error(ErrorCode::InvalidArgument, "SOS rows need six coefficients");
    SecondOrderSection s;
    s.b = {v[0], v[1], v[2]};
    s.a = {v[3], v[4], v[5]};
    f.sections.push_back(s);
  }
  return f;
}

FilterCoefficients design_butterworth_bandpass(const BandpassSpec& spec) {
  const double nyquist = spec.fs / 2.0;
  if (!(spec.fs > 0.0) || !(spec.low_hz > 0.0) || !(spec.low_hz < spec.high_hz) || !(spec.high_hz < nyquist)) {
    throw Error(ErrorCode::InvalidBand, "need 0 < low < high < fs/2, got [" + std::to_string(spec.low_hz) + ", " +
                                            std::to_string(spec.high_hz) + "] at fs " + std::to_string(spec.fs));
  }
  if (spec.order < 2 || spec.order % 2 != 0) {
    throw Error(ErrorCode::InvalidBand, "order must be even and >= 2");
  }

  const double two_fs = 2.0 * spec.fs;
  const double w_lo = two_fs * std::tan(std::numbers::pi * spec.low_hz / spec.fs);
  const double w_hi = two_fs * std::tan(std::numbers::pi * spec.high_hz / spec.fs);
  const double w0_sq = w_lo * w_hi;
  const double bw = w_hi - w_lo;
  // Digital frequency that the analog centre sqrt(w_lo * w_hi) maps to.
  const double center_hz = spec.fs / std::numbers::pi * std::atan(std::sqrt(w0_sq) / two_fs);

  FilterCoefficients out;
  const int n = spec.order;
  for (int k = 0; k < n / 2; ++k) {
    // Upper-half-plane prototype pole; its conjugate yields the conjugate sections.
    const cplx p = std::polar(1.0, std::numbers::pi * (2.0 * k + n + 1) / (2.0 * n));
    const cplx pb = p * bw;
    const cplx root = std::sqrt(pb * pb - 4.0 * w0_sq);
    for (const cplx s : {(pb + root) / 2.0, (pb - root) / 2.0}) {
      const cplx z = (1.0 + s / two_fs) / (1.0 - s / two_fs);
      SecondOrderSection sec;
      sec.b = {1.0, 0.0, -1.0};
      sec.a = {1.0, -2.0 * z.real(), std::norm(z)};
      FilterCoefficients single{{sec}};
      const double g = 1.0 / std::abs(single.response(center_hz, spec.fs));
      for (double& b : sec.b) b *= g;
      out.sections.push_back(sec);
    }
  }
  return out;
}

namespace {

// Transposed direct form II, in place. `state` holds two values per section.
void run_sos(std::vector<double>& x, const FilterCoefficients& f, std::vector<double> state) {
  for (std::size_t s = 0; s < f.sections.size(); ++s) {
    const auto& sec = f.sections[s];
    double z0 = state[2 * s], z1 = state[2 * s + 1];
    for (double& v : x) {
      const double in = v;
      const double y = sec.b[0] * in + z0;
      z0 = sec.b[1] * in - sec.a[1] * y + z1;
      z1 = sec.b[2] * in - sec.a[2] * y;
      v = y;
    }
  }
}

// Steady-state state vector of the cascade for a unit step input.
std::vector<double> steady_state(const FilterCoefficients& f) {
  std::vector<double> zi(2 * f.sections.size());
  double scale = 1.0;
  for (std::size_t s = 0; s < f.sections.size(); ++s) {
    const auto& sec = f.sections[s];
    const double gain = (sec.b[0] + sec.b[1] + sec.b[2]) / (sec.a[0] + sec.a[1] + sec.a[2]);
    const double z1 = sec.b[2] - sec.a[2] * gain;
    const double z0 = sec.b[1] - sec.a[1] * gain + z1;
    zi[2 * s] = scale * z0;
    zi[2 * s + 1] = scale * z1;
    scale *= gain;
  }
  return zi;
}

std::vector<double> scaled(const std::vector<double>& v, double k) {
  std::vector<double> out(v);
  for (double& x : out) x *= k;
  return out;
}

}  // namespace

std::vector<double> filter_signal(std::span<const double> x, const FilterCoefficients& coeffs, FilterMode mode) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty() || coeffs.sections.empty()) return out;
  if (mode == FilterMode::Forward) {
    run_sos(out, coeffs, std::vector<double>(2 * coeffs.sections.size(), 0.0));
    return out;
  }

  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(3 * 2 * coeffs.sections.size(), n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = steady_state(coeffs);
  run_sos(ext, coeffs, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  run_sos(ext, coeffs, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

CharacterWindow apply_filter(const CharacterWindow& win, const FilterCoefficients& coeffs, FilterMode mode) {
  CharacterWindow out = win;
  for (std::size_t c = 0; c < win.n_channels(); ++c) {
    const auto y = filter_signal(win.data.row(c), coeffs, mode);
    std::copy(y.begin(), y.end(), out.data.row(c).begin());
  }
  return out;
}

std::vector<double> simplified_asr_channel(std::span<const double> x, const AsrSpec& spec) {
  if (!(spec.z_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "z threshold must be positive");
  std::vector<double> out(x.begin(), x.end());
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::TooShort, "empty channel");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (sd == 0.0) return out;

  std::vector<char> keep(n);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    keep[i] = std::abs(x[i] - mean) / sd <= spec.z_threshold;
    kept += keep[i];
  }
  if (kept == 0) throw Error(ErrorCode::AllSamplesRejected, "every sample exceeds the z threshold");
  if (kept == n) return out;

  std::size_t prev = n;  // last surviving index seen, n = none yet
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    if (prev == n) {
      for (std::size_t j = 0; j < i; ++j) out[j] = x[i];  // backward fill
    } else if (i - prev > 1) {
      const double span = static_cast<double>(i - prev);
      for (std::size_t j = prev + 1; j < i; ++j) {
        const double t = static_cast<double>(j - prev) / span;
        out[j] = x[prev] + t * (x[i] - x[prev]);
      }
    }
    prev = i;
  }
  for (std::size_t j = prev + 1; j < n; ++j) out[j] = x[prev];  // forward fill
  return out;
}

CharacterWindow simplified_asr(const CharacterWindow& win, const AsrSpec& spec) {
  if (win.n_samples() == 0) throw Error(ErrorCode::TooShort, "empty window");
  CharacterWindow out = win;
  for (std::size_t c = 0; c < win.n_channels(); ++c) {
    const auto y = simplified_asr_channel(win.data.row(c), spec);
    std::copy(y.begin(), y.end(), out.data.row(c).begin());
  }
  return out;
}

CharacterWindow preprocess_window(const CharacterWindow& win, const FilterCoefficients& coeffs, const AsrSpec& asr,
                                  FilterMode mode) {
  return simplified_asr(apply_filter(win, coeffs, mode), asr);
}

CharacterWindow preprocess_window(const CharacterWindow& win, const BandpassSpec& bandpass, const AsrSpec& asr,
                                  FilterMode mode) {
  return preprocess_window(win, design_butterworth_bandpass(bandpass), asr, mode);
}

}  // namespace eegdec
