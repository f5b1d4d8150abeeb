#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eegdec {

/// Orthogonal wavelet filter bank (decomposition and reconstruction pairs).
struct Wavelet {
  std::string name;
  std::vector<double> dec_lo, dec_hi, rec_lo, rec_hi;

  std::size_t length() const { return dec_lo.size(); }
};

/// Supported names: haar, db1, db2, db3, db4.
Wavelet wavelet_by_name(const std::string& name);

struct DwtDecomposition {
  std::vector<double> approximation;         // A at the coarsest level
  std::vector<std::vector<double>> details;  // details[0] = D1 (finest) .. details[levels-1]
  std::string wavelet_name;
  int levels = 0;
  std::size_t input_length = 0;
};

/// Output length of one analysis step with symmetric extension.
std::size_t dwt_coeff_length(std::size_t input_length, std::size_t filter_length);

/// Mallat cascade with half-sample symmetric boundary extension.
DwtDecomposition dwt_decompose(std::span<const double> x, const std::string& wavelet = "db4", int levels = 4);
std::vector<double> dwt_reconstruct(const DwtDecomposition& dec);

using Point2 = std::pair<double, double>;

/// Lag embedding: (c[k], c[k + lag]) for k = 0 .. len - lag - 1.
std::vector<Point2> poincare_embed(std::span<const double> c, int lag = 1);

struct PoincareDescriptors {
  double ellipse_area, eccentricity, eig1, eig2, mean_dev_identity, mean_dist_origin, ssvl, covariance, mean_x,
      mean_y, std_x, std_y, ctm;

  std::array<double, 13> as_array() const;
};

inline constexpr double kDefaultCtmRadiusFactor = 0.2;

/// Shape descriptors of the point cloud from its population covariance:
/// eig1 >= eig2 >= 0, area pi * sqrt(eig1 * eig2), perpendicular distance to
/// the identity line, and CTM as the fraction of points strictly within
/// ctm_radius_factor * sqrt(eig1 + eig2) of the centroid.
PoincareDescriptors poincare_descriptors(std::span<const Point2> points,
                                         double ctm_radius_factor = kDefaultCtmRadiusFactor);

struct GraphicalOptions {
  std::string wavelet = "db4";
  int levels = 4;
  int lag = 1;
  double ctm_radius_factor = kDefaultCtmRadiusFactor;
};

/// 65 values: sub-bands A, D1, D2, D3, D4, 13 descriptors each, catalog order.
std::vector<double> graphical_features(std::span<const double> x, const GraphicalOptions& opts = {});

/// Descriptors for a single sub-band: 0 = A, 1..4 = D1..D4.
PoincareDescriptors subband_descriptors(const DwtDecomposition& dec, int subband, const GraphicalOptions& opts = {});

}  // namespace eegdec
