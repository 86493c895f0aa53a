#include <algorithm>
#include <cmath>
#include <limits>

#include "ouvg/errors.hpp"
#include "ouvg/esscher.hpp"
#include "ouvg/inference.hpp"

namespace ouvg {

double instrument_price(const MarketModel& model, const MarketState& state, const CalibrationInstrument& inst,
                        double call_eps) {
  if (inst.component < 0 || inst.component >= model.dim()) throw ValidationError("instrument: component out of range");
  const double T = state.t() + inst.maturity;
  if (inst.kind == InstrumentKind::kForward) return forward_price(model, state, inst.component, T);
  // Any admissible dampening gives the same price, so stay inside the Q_h domain.
  Vector e = Vector::Zero(model.dim());
  e(inst.component) = 1.0;
  const double radius = domain_radius(model.ou_q().bdlp(), e);
  const double eps = std::min(call_eps, 0.5 * (radius - 1.0));
  if (!(eps > 0.0)) throw DampeningError("instrument: no admissible call dampening under Q_h");
  return call_price(model, state, inst.component, inst.strike, T, eps);
}

std::vector<CalibrationInstrument> default_forward_instruments(const MarketModel& truth, const MarketState& state) {
  std::vector<CalibrationInstrument> out;
  for (Index k = 0; k < truth.dim(); ++k)
    for (int i = 1; i <= 20; ++i) {
      CalibrationInstrument inst{InstrumentKind::kForward, k, 0.125 * i, 0.0, 0.0};
      inst.price = instrument_price(truth, state, inst);
      out.push_back(inst);
    }
  return out;
}

std::vector<CalibrationInstrument> default_call_instruments(const MarketModel& truth, const MarketState& state) {
  std::vector<CalibrationInstrument> out;
  for (Index k = 0; k < truth.dim(); ++k)
    for (int i = 0; i < 20; ++i) {
      CalibrationInstrument inst{InstrumentKind::kCall, k, 0.5, 25.0 + 150.0 * i / 19.0, 0.0};
      inst.price = instrument_price(truth, state, inst);
      out.push_back(inst);
    }
  return out;
}

double calibration_objective(const MarketModel& model, const MarketState& state,
                             const std::vector<CalibrationInstrument>& instruments) {
  double sum = 0.0;
  for (const auto& inst : instruments) {
    const double d = inst.price - instrument_price(model, state, inst);
    sum += d * d;
  }
  return sum;
}

CalibrationResult calibrate_mpr(const MarketModel& model, const MarketState& state,
                                const std::vector<CalibrationInstrument>& instruments, const Vector& h_init,
                                const SimplexOptions& options) {
  if (instruments.empty()) throw ValidationError("calibrate_mpr: no instruments");
  if (h_init.size() != model.dim()) throw ValidationError("calibrate_mpr: h has the wrong dimension");
  auto objective = [&](const Vector& h) {
    // Outside D_Z the measure does not exist; with_h throws and the simplex sees +inf.
    return calibration_objective(model.with_h(h), state, instruments);
  };
  SimplexResult fit = minimize_simplex(objective, h_init, Vector::Constant(h_init.size(), 0.05), options);
  if (!std::isfinite(fit.value)) throw NumericalError("calibrate_mpr: objective is not finite at the optimum");
  return CalibrationResult{fit.x, fit.value, std::move(fit)};
}

}  // namespace ouvg
