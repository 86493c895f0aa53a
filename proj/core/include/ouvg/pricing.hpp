#pragma once

#include <vector>

#include "ouvg/market.hpp"
#include "ouvg/types.hpp"

namespace ouvg {

/// Grid for the two-dimensional spread transform: N points per axis and
/// half-widths theta_bar per axis, so delta_theta = 2 theta_bar / N.
struct FFTGridSpec {
  int n = 2048;
  Vector theta_bar = Vector::Constant(2, 80.0);

  FFTGridSpec() = default;
  FFTGridSpec(int n_points, double half_width) : n(n_points), theta_bar(Vector::Constant(2, half_width)) {}
  FFTGridSpec(int n_points, Vector half_widths) : n(n_points), theta_bar(std::move(half_widths)) {}

  void validate() const;
  double delta_theta(Index k) const { return 2.0 * theta_bar(k) / n; }
  double delta_x(Index k) const { return 2.0 * kPi / (n * delta_theta(k)); }
};

/// cgf of R(t, T) = log S(T) - log S(t) given F_t under Q_h.
Complex log_return_cgf(const MarketModel& model, const MarketState& state, double T, const CVector& theta);

/// Same restricted to theta e_k.
Complex marginal_log_return_cgf(const MarketModel& model, const MarketState& state, Index k, double T,
                                Complex theta);

/// F_t = S_k(t) exp(kappa_{R_k}(1)).
double forward_price(const MarketModel& model, const MarketState& state, Index k, double T);

/// Supremum of admissible call dampening for component k of a WVAG driver, from
/// the real-world parameters.
double max_dampening(const MarketModel& model, Index k);
double max_dampening(const WVAGParams& wvag, Index k);

/// Carr-Madan call price with dampening eps, integrated adaptively.
double call_price(const MarketModel& model, const MarketState& state, Index k, double strike, double T,
                  double eps = 2.5);

/// Fourier transform of the unit-strike spread payoff,
/// Gamma(i(t1 + t2) - 1) Gamma(-i t2) / Gamma(i t1 + 1).
Complex phat(Complex theta1, Complex theta2);

/// Raw transform output f(x, 1) on the log-price grid, x_j = (j - N/2) dx per axis.
struct SpreadSurface {
  Vector x1;
  Vector x2;
  Matrix values;
  double max_imag = 0.0;  ///< largest imaginary residue before taking the real part
  double delta_x1 = 0.0;
  double delta_x2 = 0.0;

  /// Tensor-product cubic spline through the nodes of a local window around
  /// (y1, y2); throws DomainError outside the grid.
  double interpolate(double y1, double y2) const;
};

/// The strike anchor kept on the x-grid by rescaling delta_theta.
inline constexpr double kSpreadAnchor = 3.6;

SpreadSurface spread_price_unit(const MarketModel& model, const MarketState& state, Index k, Index l, double T,
                                const Vector& eps, const FFTGridSpec& grid);

/// Prices of (S_k(T) - S_l(T) - K)^+ for every strike, from one transform.
std::vector<double> spread_price_fft(const MarketModel& model, const MarketState& state, Index k, Index l,
                                     const std::vector<double>& strikes, double T, const Vector& eps,
                                     const FFTGridSpec& grid);

/// Default spread dampening (-3.5, 1).
Vector default_spread_dampening();

/// `preferred` when -preferred lies in the Q_h domain. Otherwise the point of a
/// 0.05-spaced grid that keeps the distances to eps_1 + eps_2 = -1, eps_2 = 0 and
/// the domain edge all as large as possible. Throws DomainError when none is admissible.
Vector admissible_spread_dampening(const MarketModel& model, Index k, Index l, const Vector& preferred);

/// Cov_Q[X(T) | F_t] = (1 - e^{-2 lambda tau}) Cov_Q[Z(1)] / 2.
Matrix conditional_covariance(const MarketModel& model, double tau);

/// Closed form of the off-diagonal entry for a WVAG driver with real-world parameters:
/// (1 - e^{-2 lambda tau}) a ((alpha_1 ^ alpha_2) Sigma_12 + alpha_1 alpha_2 mu_1 mu_2) / 2.
double wvag_conditional_covariance(const WVAGParams& wvag, double lambda, double tau, Index k, Index l);

/// E_Q[R(t, T) | F_t].
Vector risk_neutral_drift(const MarketModel& model, const MarketState& state, double T);

}  // namespace ouvg
