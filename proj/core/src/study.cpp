#include "ouvg/study.hpp"

#include <cmath>

#include "ouvg/errors.hpp"
#include "ouvg/ldoup.hpp"
#include "ouvg/random.hpp"

namespace ouvg {

Replication run_replication(const MarketModel& truth, const MarketState& state, const std::vector<double>& strikes,
                            std::uint64_t seed, std::uint64_t index, const StudyOptions& options) {
  Replication rep;
  rep.index = index;
  try {
    Rng rng = make_stream(seed, index);
    const double dt = reference::kDt;
    const Matrix x = simulate_path(InnovationSpec(truth.ou(), dt), options.m, options.n_sub, options.burn_in, rng);
    Matrix y(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) y.row(i) = x.row(i) + truth.seasonality()(i * dt).transpose();
    const EstimationResult est = estimate_3step(ObservedPanel(0.0, dt, y), truth.seasonality().period(),
                                                options.estimation);
    rep.lambda = est.lambda;
    rep.on_boundary = est.on_boundary;

    const MarketModel fitted(est.seasonality, est.ou(), truth.r(), Vector::Zero(truth.dim()));
    const Vector h0 = Vector::Zero(truth.dim());
    const double T = state.t() + options.maturity;
    auto fit_and_price = [&](const std::vector<CalibrationInstrument>& panel, Vector& h, Vector& drift,
                             std::vector<double>& prices) {
      h = calibrate_mpr(fitted, state, panel, h0).h;
      const MarketModel m = fitted.with_h(h);
      drift = risk_neutral_drift(m, state, T);
      const Vector eps = admissible_spread_dampening(m, 0, 1, default_spread_dampening());
      prices = spread_price_fft(m, state, 0, 1, strikes, T, eps, options.pricing_grid);
    };
    fit_and_price(default_forward_instruments(truth, state), rep.h_forward, rep.drift_forward, rep.prices_forward);
    fit_and_price(default_call_instruments(truth, state), rep.h_call, rep.drift_call, rep.prices_call);
    rep.ok = true;
  } catch (const Error& e) {
    rep.failure = e.what();
  }
  return rep;
}

double rrmse(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw ValidationError("rrmse: no estimates");
  if (truth == 0.0) throw ValidationError("rrmse: truth must be nonzero");
  double s = 0.0;
  for (double e : estimates) s += (e - truth) * (e - truth);
  return std::sqrt(s / static_cast<double>(estimates.size())) / std::abs(truth);
}

}  // namespace ouvg
