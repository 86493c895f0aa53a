#include "ouvg/pricing.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "ouvg/errors.hpp"

namespace ouvg {

void FFTGridSpec::validate() const {
  if (n < 4 || (n & (n - 1)) != 0) throw ValidationError("grid: N must be a power of two, at least 4");
  if (theta_bar.size() != 2 || !(theta_bar.array() > 0.0).all() || !theta_bar.allFinite())
    throw ValidationError("grid: theta_bar must hold two positive half-widths");
}

namespace {

double time_to_maturity(const MarketState& state, double T) {
  const double tau = T - state.t();
  if (!(tau >= 0.0)) throw ValidationError("maturity precedes the current time");
  return tau;
}

void check_component(const MarketModel& model, Index k) {
  if (k < 0 || k >= model.dim()) throw ValidationError("component index out of range");
}

// Lambda(T) + X(t) e^{-lambda tau} - Y(t).
Vector conditional_shift(const MarketModel& model, const MarketState& state, double T, double decay) {
  if (state.spot().size() != model.dim()) throw ValidationError("state and model dimensions differ");
  return model.seasonality()(T) + state.x(model.seasonality()) * decay - state.log_spot();
}

}  // namespace

Complex log_return_cgf(const MarketModel& model, const MarketState& state, double T, const CVector& theta) {
  const double tau = time_to_maturity(state, T);
  if (theta.size() != model.dim()) throw ValidationError("log_return_cgf: dimension mismatch");
  const double lambda = model.ou().lambda();
  const double decay = std::exp(-lambda * tau);
  const Vector d = conditional_shift(model, state, T, decay);
  const Complex drift = (d.cast<Complex>().transpose() * theta).value();
  if (tau == 0.0) return drift;
  return drift + innovation_cgf(model.ou_q().bdlp(), lambda, tau, decay * theta);
}

Complex marginal_log_return_cgf(const MarketModel& model, const MarketState& state, Index k, double T,
                                Complex theta) {
  check_component(model, k);
  CVector full = CVector::Zero(model.dim());
  full(k) = theta;
  return log_return_cgf(model, state, T, full);
}

double forward_price(const MarketModel& model, const MarketState& state, Index k, double T) {
  check_component(model, k);
  return state.spot()(k) * std::exp(marginal_log_return_cgf(model, state, k, T, 1.0).real());
}

double max_dampening(const WVAGParams& w, Index k) {
  if (k < 0 || k >= w.dim()) throw ValidationError("component index out of range");
  const double s = w.sigma()(k, k), m = w.mu()(k), al = w.alpha()(k);
  if (!(s > 0.0)) return m <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (al * m) - 1.0;
  // sqrt(A^2 + B) - A written without cancellation when A > 0.
  const double A = m / s, B = 2.0 / (al * s);
  const double root = std::sqrt(A * A + B);
  return (A > 0.0 ? B / (root + A) : root - A) - 1.0;
}

double max_dampening(const MarketModel& model, Index k) {
  if (!model.ou().wvag()) throw ValidationError("max_dampening: needs a WVAG driver");
  return max_dampening(*model.ou().wvag(), k);
}

double call_price(const MarketModel& model, const MarketState& state, Index k, double strike, double T,
                  double eps) {
  check_component(model, k);
  if (!(strike > 0.0)) throw ValidationError("call_price: strike must be positive");
  if (!(eps > 0.0)) throw DampeningError("call_price: dampening must be positive");
  const double tau = time_to_maturity(state, T);
  Vector probe = Vector::Zero(model.dim());
  probe(k) = eps + 1.0;
  if (!domain_contains(model.ou_q().bdlp(), probe))
    throw DampeningError("call_price: (eps + 1) e_k outside the pricing-measure domain");

  const double s = state.spot()(k);
  if (tau == 0.0) return std::max(s - strike, 0.0);
  const double logm = std::log(s / strike);
  const double scale = std::exp(-model.r() * tau + (eps + 1.0) * std::log(s) - eps * std::log(strike)) / kPi;

  auto integrand = [&](double v) {
    const Complex z(eps + 1.0, v);
    const Complex num = std::exp(Complex(0.0, v * logm) + marginal_log_return_cgf(model, state, k, T, z));
    const Complex den(eps * eps + eps - v * v, (2.0 * eps + 1.0) * v);
    return num / den;
  };

  // Truncate where |integrand| drops below 1e-12 in price units, capped at 1e4.
  constexpr double kCap = 1e4;
  double vmax = 1.0;
  while (vmax < kCap && scale * std::abs(integrand(vmax)) >= 1e-12) vmax *= 1.25;
  vmax = std::min(vmax, kCap);

  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double v) { return integrand(v).real(); };
  double total = 0.0, lo = 0.0;
  while (lo < vmax) {
    const double hi = std::min(vmax, lo + std::max(2.0, 0.25 * lo));
    total += gauss_kronrod<double, 31>::integrate(re, lo, hi, 12, 1e-13);
    lo = hi;
  }
  return scale * total;
}

Matrix conditional_covariance(const MarketModel& model, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("conditional_covariance: negative horizon");
  const double lambda = model.ou().lambda();
  return 0.5 * (1.0 - std::exp(-2.0 * lambda * tau)) * model.ou_q().bdlp().covariance();
}

double wvag_conditional_covariance(const WVAGParams& w, double lambda, double tau, Index k, Index l) {
  if (k == l || k < 0 || l < 0 || k >= w.dim() || l >= w.dim())
    throw ValidationError("wvag_conditional_covariance: needs two distinct components");
  const double ak = w.alpha()(k), al = w.alpha()(l);
  return 0.5 * (1.0 - std::exp(-2.0 * lambda * tau)) * w.a() *
         (std::min(ak, al) * w.sigma()(k, l) + ak * al * w.mu()(k) * w.mu()(l));
}

Vector risk_neutral_drift(const MarketModel& model, const MarketState& state, double T) {
  const double tau = time_to_maturity(state, T);
  const double decay = std::exp(-model.ou().lambda() * tau);
  return conditional_shift(model, state, T, decay) + (1.0 - decay) * model.ou_q().bdlp().mean();
}

}  // namespace ouvg
