#include "ouvg/market.hpp"

#include <cmath>
#include <numbers>

#include "ouvg/errors.hpp"

namespace ouvg {

Seasonality::Seasonality(Matrix coeffs, double period) : coeffs_(std::move(coeffs)), period_(period) {
  if (coeffs_.cols() != 4 || coeffs_.rows() < 1) throw ValidationError("seasonality: expects n x 4 coefficients");
  if (!(std::isfinite(period_) && period_ > 0.0)) throw ValidationError("seasonality: period must be positive");
  if (!coeffs_.allFinite()) throw ValidationError("seasonality: non-finite coefficient");
}

double Seasonality::value(Index k, double t) const {
  const double w = 2.0 * std::numbers::pi * t / period_;
  return coeffs_(k, 0) + coeffs_(k, 1) * t + coeffs_(k, 2) * std::cos(w) + coeffs_(k, 3) * std::sin(w);
}

Vector Seasonality::operator()(double t) const {
  Vector out(dim());
  for (Index k = 0; k < dim(); ++k) out(k) = value(k, t);
  return out;
}

MarketModel::MarketModel(Seasonality seasonality, OUModel ou, double r, const Vector& h)
    : seasonality_(std::move(seasonality)),
      ou_(std::move(ou)),
      r_(r),
      measure_(vgc_esscher(ou_.bdlp(), h)),
      ou_q_(ou_.with_bdlp(measure_.bdlp_q())) {
  if (seasonality_.dim() != ou_.dim()) throw ValidationError("market: seasonality and driver dimensions differ");
  if (!std::isfinite(r_)) throw ValidationError("market: non-finite rate");
}

MarketModel MarketModel::with_h(const Vector& h) const { return MarketModel(seasonality_, ou_, r_, h); }

MarketModel MarketModel::with_ou(OUModel ou) const {
  return MarketModel(seasonality_, std::move(ou), r_, measure_.h());
}

MarketState::MarketState(double t, Vector spot) : t_(t), spot_(std::move(spot)) {
  if (!std::isfinite(t_)) throw ValidationError("state: non-finite time");
  if (spot_.size() < 1 || !(spot_.array() > 0.0).all() || !spot_.allFinite())
    throw ValidationError("state: spot prices must be positive");
}

namespace reference {

namespace {

Vector alpha() { return Vector{{0.17183, 0.28494}}; }
Vector mu() { return Vector{{-0.03071, -0.20335}}; }
Vector spot() { return Vector{{100.0, 96.0}}; }

Matrix rounded_coeffs() {
  return Matrix{{3.16132, 0.17500, 0.04385, 0.22986}, {2.04056, 0.31390, 0.01257, 0.06587}};
}

}  // namespace

WVAGParams wvag_rounded() {
  const Matrix sigma{{0.24598, 0.19452}, {0.19452, 0.17045}};
  return WVAGParams(3.15854, alpha(), mu(), sigma, -mu());
}

WVAGParams wvag() {
  const Vector al = alpha();
  const double a = 0.9 * std::min(1.0 / al(0), 1.0 / al(1));
  const double s11 = 0.24598, s22 = 0.17045;
  const double s12 = 0.95 * std::sqrt(s11 * s22);
  return WVAGParams(a, al, mu(), Matrix{{s11, s12}, {s12, s22}}, -mu());
}

Seasonality seasonality_rounded() { return Seasonality(rounded_coeffs(), kPeriod); }

Seasonality seasonality() {
  Matrix c = rounded_coeffs();
  const Seasonality s(c, kPeriod);
  const Vector target = spot().array().log().matrix();
  for (Index k = 0; k < 2; ++k) c(k, 0) += target(k) - s.value(k, kTe);
  return Seasonality(c, kPeriod);
}

Vector h() { return Vector{{-0.1, -0.03}}; }

MarketState state() { return MarketState(kTe, spot()); }

MarketModel model() { return MarketModel(seasonality(), OUModel(kLambda, wvag()), kRate, h()); }

MarketModel model_rounded() {
  return MarketModel(seasonality_rounded(), OUModel(kLambda, wvag_rounded()), kRate, h());
}

std::vector<double> spread_strikes() {
  std::vector<double> k(13);
  for (int i = 0; i < 13; ++i) k[i] = 0.4 + 0.8 * i;
  return k;
}

std::vector<double> fft_prices() {
  return {9.31079, 9.03505, 8.76650, 8.50503, 8.25053, 8.00289, 7.76200,
          7.52773, 7.29998, 7.07861, 6.86350, 6.65454, 6.45158};
}

std::vector<double> mc_prices() {
  return {9.32370, 9.04812, 8.77975, 8.51849, 8.26418, 8.01663, 7.77583,
          7.54163, 7.31393, 7.09258, 6.87758, 6.66877, 6.46594};
}

std::vector<std::pair<double, double>> mc_intervals() {
  return {{9.28429, 9.36311}, {9.00917, 9.08708}, {8.74125, 8.81826}, {8.48044, 8.55655},
          {8.22657, 8.30179}, {7.97947, 8.05379}, {7.73911, 7.81255}, {7.50535, 7.57790},
          {7.27808, 7.34977}, {7.05717, 7.12799}, {6.84261, 6.91256}, {6.63422, 6.70332},
          {6.43181, 6.50006}};
}

}  // namespace reference

}  // namespace ouvg
