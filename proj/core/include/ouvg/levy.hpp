#pragma once

#include <array>
#include <span>
#include <vector>

#include "ouvg/types.hpp"

namespace ouvg {

/// Multivariate variance gamma process V = eta t + B(G(t)) where B is a
/// Brownian motion with drift mu and covariance sigma, and G is a gamma
/// subordinator with shape and rate b (unit mean).
class VGParams {
 public:
  VGParams(double b, Vector mu, Matrix sigma);
  VGParams(double b, Vector mu, Matrix sigma, Vector eta);

  double b() const { return b_; }
  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  const Vector& eta() const { return eta_; }
  Index dim() const { return mu_.size(); }

  /// Law of the sub-vector (Z_c)_{c in components}.
  VGParams marginal(std::span<const Index> components) const;

  bool operator==(const VGParams&) const = default;

 private:
  double b_;
  Vector mu_;
  Matrix sigma_;
  Vector eta_;
};

/// Sum of independent VG processes plus a linear drift (VG convolution).
/// The individual terms carry no drift of their own.
class VGCParams {
 public:
  VGCParams(std::vector<VGParams> terms, Vector eta);
  explicit VGCParams(std::vector<VGParams> terms);

  const std::vector<VGParams>& terms() const { return terms_; }
  const Vector& eta() const { return eta_; }
  Index dim() const { return eta_.size(); }
  std::size_t size() const { return terms_.size(); }

  VGCParams marginal(std::span<const Index> components) const;

  /// E[Z(1)] = eta + sum_j mu_j.
  Vector mean() const;
  /// Cov[Z(1)] = sum_j (Sigma_j + mu_j mu_j^T / b_j).
  Matrix covariance() const;

  bool operator==(const VGCParams&) const = default;

 private:
  std::vector<VGParams> terms_;
  Vector eta_;
};

/// Weak variance alpha-gamma process: common gamma clock of shape a scaled by
/// alpha_k plus idiosyncratic clocks of rate beta_k = (1 - a alpha_k) / alpha_k.
class WVAGParams {
 public:
  WVAGParams(double a, Vector alpha, Vector mu, Matrix sigma, Vector eta);

  double a() const { return a_; }
  const Vector& alpha() const { return alpha_; }
  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  const Vector& eta() const { return eta_; }
  Index dim() const { return mu_.size(); }
  double beta(Index k) const { return (1.0 - a_ * alpha_(k)) / alpha_(k); }

  /// mu <> alpha = (mu_k alpha_k)_k.
  Vector mu_diamond_alpha() const;
  /// Sigma <> alpha = (Sigma_ij min(alpha_i, alpha_j))_ij.
  Matrix sigma_diamond_alpha() const;

 private:
  double a_;
  Vector alpha_;
  Vector mu_;
  Matrix sigma_;
  Vector eta_;
};

struct Moments1D {
  double mean;
  double variance;
  double skewness;
  double kurtosis;  ///< fourth standardized moment (3 for a Gaussian)
};

/// K_theta = 1 - <mu, theta>/b - <theta, Sigma theta>/(2b), bilinear in theta.
Complex vg_K(const VGParams& params, const CVector& theta);
double vg_K(const VGParams& params, const Vector& theta);

bool vg_domain_contains(const VGParams& params, const Vector& theta);

/// t (<eta, theta> - b log K_theta). Requires Re(theta) in the domain.
Complex vg_cgf(const VGParams& params, const CVector& theta, double t = 1.0);
Complex vgc_cgf(const VGCParams& params, const CVector& theta, double t = 1.0);

/// WVAG cgf evaluated directly from (a, alpha, mu, Sigma, eta), without the
/// VG-convolution representation.
Complex wvag_cgf(const WVAGParams& params, const CVector& theta, double t = 1.0);

VGCParams wvag_to_vgc(const WVAGParams& params);

/// First four cumulants of a univariate VG, obtained by differentiating the cgf.
std::array<double, 4> vg_cumulants_1d(const VGParams& params);
Moments1D vg_moments_1d(const VGParams& params);
Moments1D moments_from_cumulants(const std::array<double, 4>& cumulants);

/// Both roots nu = 1/b of the three-moment equations, whether or not the implied
/// Sigma = var - mean^2 nu is nonnegative.
std::vector<double> vg_match_nu_roots(double mean, double variance, double third_central);
/// Univariate VG laws (eta = 0) whose mean, variance and third central moment
/// match the given values. Zero, one or two solutions, ordered by 1/b.
std::vector<VGParams> vg_match_three_moments(double mean, double variance, double third_central);

}  // namespace ouvg
