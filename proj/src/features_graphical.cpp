#include "eegdec/features_graphical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegdec/error.hpp"

namespace eegdec {

namespace {

// Reconstruction lowpass filters, same values and orientation as PyWavelets.
const std::vector<double> kHaar{0.7071067811865476, 0.7071067811865476};
const std::vector<double> kDb2{0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037};
const std::vector<double> kDb3{0.33267055295008263,  0.8068915093110925,   0.45987750211849154,
                               -0.13501102001025458, -0.08544127388202666, 0.03522629188570953};
const std::vector<double> kDb4{0.2303778133088965,    0.7148465705529157,  0.6308807679298589,
                               -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
                               0.0328830116668852,    -0.010597401785069032};

Wavelet from_rec_lo(const std::string& name, const std::vector<double>& rec_lo) {
  Wavelet w;
  w.name = name;
  w.rec_lo = rec_lo;
  w.dec_lo.assign(rec_lo.rbegin(), rec_lo.rend());
  const std::size_t f = rec_lo.size();
  w.dec_hi.resize(f);
  for (std::size_t i = 0; i < f; ++i) w.dec_hi[i] = (i % 2 == 0 ? -1.0 : 1.0) * rec_lo[i];
  w.rec_hi.assign(w.dec_hi.rbegin(), w.dec_hi.rend());
  return w;
}

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x_{n-1} | x_{n-1} x_{n-2} ...
double symmetric_at(std::span<const double> x, long t) {
  const long n = static_cast<long>(x.size());
  const long period = 2 * n;
  long m = t % period;
  if (m < 0) m += period;
  return m < n ? x[static_cast<std::size_t>(m)] : x[static_cast<std::size_t>(period - 1 - m)];
}

std::vector<double> analysis_step(std::span<const double> x, const std::vector<double>& filter) {
  const std::size_t f = filter.size();
  const std::size_t out_len = dwt_coeff_length(x.size(), f);
  std::vector<double> out(out_len);
  for (std::size_t o = 0; o < out_len; ++o) {
    const long i = static_cast<long>(2 * o + 1);
    double s = 0.0;
    for (std::size_t j = 0; j < f; ++j) s += filter[j] * symmetric_at(x, i - static_cast<long>(j));
    out[o] = s;
  }
  return out;
}

// Upsample-by-two convolution keeping the 2N - F + 2 samples free of boundary effects.
std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const Wavelet& w) {
  const std::size_t n = approx.size();
  const std::size_t f = w.length();
  if (2 * n + 2 < f) throw Error(ErrorCode::TooShort, "too few coefficients to reconstruct");
  const std::size_t out_len = 2 * n + 2 - f;
  std::vector<double> out(out_len, 0.0);
  for (std::size_t o = 0; o < out_len; ++o) {
    const std::size_t t = o + f - 2;  // index into the full convolution
    double s = 0.0;
    // full[t] = sum_k c[k] * h[t - 2k]
    for (std::size_t k = 0; k < n; ++k) {
      if (2 * k > t) break;
      const std::size_t j = t - 2 * k;
      if (j >= f) continue;
      s += approx[k] * w.rec_lo[j] + detail[k] * w.rec_hi[j];
    }
    out[o] = s;
  }
  return out;
}

}  // namespace

Wavelet wavelet_by_name(const std::string& name) {
  if (name == "haar" || name == "db1") return from_rec_lo(name, kHaar);
  if (name == "db2") return from_rec_lo(name, kDb2);
  if (name == "db3") return from_rec_lo(name, kDb3);
  if (name == "db4") return from_rec_lo(name, kDb4);
  throw Error(ErrorCode::InvalidArgument, "unsupported wavelet '" + name + "'");
}

std::size_t dwt_coeff_length(std::size_t input_length, std::size_t filter_length) {
  return (input_length + filter_length - 1) / 2;
}

DwtDecomposition dwt_decompose(std::span<const double> x, const std::string& wavelet, int levels) {
  const Wavelet w = wavelet_by_name(wavelet);
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (x.size() < w.length()) {
    throw Error(ErrorCode::TooShort, "DWT input shorter than the " + wavelet + " filter");
  }
  DwtDecomposition dec;
  dec.wavelet_name = w.name;
  dec.levels = levels;
  dec.input_length = x.size();
  std::vector<double> current(x.begin(), x.end());
  for (int level = 0; level < levels; ++level) {
    auto detail = analysis_step(current, w.dec_hi);
    current = analysis_step(current, w.dec_lo);
    dec.details.push_back(std::move(detail));
  }
  dec.approximation = std::move(current);
  return dec;
}

std::vector<double> dwt_reconstruct(const DwtDecomposition& dec) {
  const Wavelet w = wavelet_by_name(dec.wavelet_name);
  std::vector<double> a = dec.approximation;
  for (int level = dec.levels - 1; level >= 0; --level) {
    const auto& d = dec.details[static_cast<std::size_t>(level)];
    if (a.size() == d.size() + 1) a.pop_back();
    if (a.size() != d.size()) throw Error(ErrorCode::ShapeMismatch, "coefficient lengths are inconsistent");
    a = synthesis_step(a, d, w);
  }
  if (dec.input_length > 0 && a.size() > dec.input_length) a.resize(dec.input_length);
  return a;
}

std::vector<Point2> poincare_embed(std::span<const double> c, int lag) {
  if (lag < 1) throw Error(ErrorCode::InvalidArgument, "lag must be >= 1");
  const auto l = static_cast<std::size_t>(lag);
  if (c.size() <= l) throw Error(ErrorCode::TooShort, "sequence not longer than lag");
  std::vector<Point2> pts;
  pts.reserve(c.size() - l);
  for (std::size_t k = 0; k + l < c.size(); ++k) pts.emplace_back(c[k], c[k + l]);
  return pts;
}

std::array<double, 13> PoincareDescriptors::as_array() const {
  return {ellipse_area, eccentricity, eig1, eig2, mean_dev_identity, mean_dist_origin, ssvl, covariance,
          mean_x,       mean_y,       std_x, std_y, ctm};
}

PoincareDescriptors poincare_descriptors(std::span<const Point2> points, double ctm_radius_factor) {
  if (points.size() < 3) throw Error(ErrorCode::TooFewPoints, "need at least 3 points");
  const double n = static_cast<double>(points.size());

  double sx = 0.0, sy = 0.0, dev = 0.0, dist = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    dev += std::abs(y - x);
    dist += std::hypot(x, y);
  }
  const double mx = sx / n, my = sy / n;
  const double mean_dist = dist / n;

  double vxx = 0.0, vyy = 0.0, vxy = 0.0, vdist = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = x - mx, dy = y - my;
    vxx += dx * dx;
    vyy += dy * dy;
    vxy += dx * dy;
    const double dd = std::hypot(x, y) - mean_dist;
    vdist += dd * dd;
  }
  vxx /= n;
  vyy /= n;
  vxy /= n;
  vdist /= n;

  const double half_trace = 0.5 * (vxx + vyy);
  const double disc = std::sqrt(0.25 * (vxx - vyy) * (vxx - vyy) + vxy * vxy);
  const double eig1 = half_trace + disc;
  const double eig2 = std::max(0.0, half_trace - disc);

  PoincareDescriptors d{};
  d.eig1 = eig1;
  d.eig2 = eig2;
  d.ellipse_area = std::numbers::pi * std::sqrt(eig1) * std::sqrt(eig2);
  d.eccentricity = eig1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - eig2 / eig1)) : 0.0;
  d.mean_dev_identity = dev / n / std::numbers::sqrt2;
  d.mean_dist_origin = mean_dist;
  d.ssvl = std::sqrt(vdist);
  d.covariance = vxy;
  d.mean_x = mx;
  d.mean_y = my;
  d.std_x = std::sqrt(vxx);
  d.std_y = std::sqrt(vyy);

  const double radius = ctm_radius_factor * std::sqrt(eig1 + eig2);
  std::size_t inside = 0;
  for (const auto& [x, y] : points) {
    if (std::hypot(x - mx, y - my) < radius) ++inside;
  }
  d.ctm = static_cast<double>(inside) / n;
  return d;
}

PoincareDescriptors subband_descriptors(const DwtDecomposition& dec, int subband, const GraphicalOptions& opts) {
  const auto& coeffs = subband == 0 ? dec.approximation : dec.details.at(static_cast<std::size_t>(subband - 1));
  const auto pts = poincare_embed(coeffs, opts.lag);
  return poincare_descriptors(pts, opts.ctm_radius_factor);
}

std::vector<double> graphical_features(std::span<const double> x, const GraphicalOptions& opts) {
  if (x.size() < 32) throw Error(ErrorCode::TooShort, "graphical features need at least 32 samples");
  const auto dec = dwt_decompose(x, opts.wavelet, opts.levels);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(opts.levels + 1) * 13);
  for (int band = 0; band <= opts.levels; ++band) {
    const auto a = subband_descriptors(dec, band, opts).as_array();
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

}  // namespace eegdec
