#pragma once

#include "ouvg/esscher.hpp"
#include "ouvg/ldoup.hpp"
#include "ouvg/types.hpp"

namespace ouvg {

/// Lambda_k(t) = b0 + b1 t + b2 cos(2 pi t / p) + b3 sin(2 pi t / p), one row of
/// coefficients per component.
class Seasonality {
 public:
  Seasonality(Matrix coeffs, double period);

  const Matrix& coeffs() const { return coeffs_; }
  double period() const { return period_; }
  Index dim() const { return coeffs_.rows(); }

  double value(Index k, double t) const;
  Vector operator()(double t) const;

 private:
  Matrix coeffs_;  // n x 4
  double period_;
};

/// Spot S(t) = exp(Lambda(t) + X(t)) with X an OU process; priced under the
/// Esscher measure Q_h, which is validated on construction.
class MarketModel {
 public:
  MarketModel(Seasonality seasonality, OUModel ou, double r, const Vector& h);

  const Seasonality& seasonality() const { return seasonality_; }
  /// Real-world dynamics.
  const OUModel& ou() const { return ou_; }
  /// Same lambda with the Q_h driver.
  const OUModel& ou_q() const { return ou_q_; }
  const EsscherMeasure& measure() const { return measure_; }
  const Vector& h() const { return measure_.h(); }
  double r() const { return r_; }
  Index dim() const { return ou_.dim(); }

  MarketModel with_h(const Vector& h) const;
  MarketModel with_ou(OUModel ou) const;

 private:
  Seasonality seasonality_;
  OUModel ou_;
  double r_;
  EsscherMeasure measure_;
  OUModel ou_q_;
};

class MarketState {
 public:
  MarketState(double t, Vector spot);

  double t() const { return t_; }
  const Vector& spot() const { return spot_; }
  /// Y(t) = log S(t).
  Vector log_spot() const { return spot_.array().log().matrix(); }
  /// X(t) = log S(t) - Lambda(t).
  Vector x(const Seasonality& s) const { return log_spot() - s(t_); }

 private:
  double t_;
  Vector spot_;
};

namespace reference {

/// Reference two-commodity setting: lambda = 18.25, r = 0.05, p = 1, current time 8,
/// spot (100, 96), h = (-0.1, -0.03), eta = -mu.
constexpr double kLambda = 18.25;
constexpr double kRate = 0.05;
constexpr double kPeriod = 1.0;
constexpr double kTe = 8.0;
constexpr double kTo = 8.5;
constexpr double kDt = 1.0 / 250.0;

/// WVAG parameters rounded to five significant digits.
WVAGParams wvag_rounded();
/// WVAG parameters with a and Sigma_12 set from their defining relations
/// a = 0.9 min(1/alpha_k) and rho = 0.95.
WVAGParams wvag();
/// Seasonality rounded to five significant digits.
Seasonality seasonality_rounded();
/// Seasonality with b0 set so that Lambda(T_e) = log S(T_e) exactly.
Seasonality seasonality();
Vector h();
MarketState state();
/// Model used for the reference price tables (defining relations applied).
MarketModel model();
MarketModel model_rounded();
/// 13 spread strikes 0.4, 1.2, ..., 10.0.
std::vector<double> spread_strikes();
/// Reference FFT spread prices at those strikes.
std::vector<double> fft_prices();
/// Reference Monte Carlo estimates and 95% intervals.
std::vector<double> mc_prices();
std::vector<std::pair<double, double>> mc_intervals();

}  // namespace reference

}  // namespace ouvg
