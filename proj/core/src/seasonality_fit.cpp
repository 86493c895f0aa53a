#include <cmath>
#include <numbers>

#include "ouvg/errors.hpp"
#include "ouvg/inference.hpp"

namespace ouvg {

ObservedPanel::ObservedPanel(double t0, double dt, Matrix log_prices) : t0_(t0), dt_(dt), y_(std::move(log_prices)) {
  if (!(std::isfinite(dt_) && dt_ > 0.0)) throw ValidationError("panel: dt must be positive");
  if (y_.rows() < 2 || y_.cols() < 1) throw ValidationError("panel: needs at least two observations");
  if (!y_.allFinite()) throw ValidationError("panel: non-finite log price");
}

namespace {

double check_spacing(const Vector& times) {
  if (times.size() < 2) throw ValidationError("panel: needs at least two observations");
  const double dt = (times(times.size() - 1) - times(0)) / static_cast<double>(times.size() - 1);
  for (Index i = 1; i < times.size(); ++i) {
    const double step = times(i) - times(i - 1);
    if (!(step > 0.0) || std::abs(step - dt) > 1e-8 * std::max(1.0, std::abs(times(i))))
      throw ValidationError("panel: times must be strictly increasing and equally spaced");
  }
  return dt;
}

}  // namespace

ObservedPanel::ObservedPanel(const Vector& times, Matrix log_prices)
    : ObservedPanel(times.size() > 0 ? times(0) : 0.0, check_spacing(times), std::move(log_prices)) {
  if (times.size() != y_.rows()) throw ValidationError("panel: times and prices differ in length");
}

Vector ObservedPanel::times() const {
  Vector t(size());
  for (Index i = 0; i < size(); ++i) t(i) = time(i);
  return t;
}

SeasonalityFit fit_seasonality(const ObservedPanel& panel, double period) {
  if (!(period > 0.0)) throw ValidationError("fit_seasonality: period must be positive");
  const Index m = panel.size();
  if (m < 9) throw ValidationError("fit_seasonality: needs more observations than regressors");
  Matrix design(m, 4);
  for (Index i = 0; i < m; ++i) {
    const double t = panel.time(i);
    const double w = 2.0 * std::numbers::pi * t / period;
    design.row(i) << 1.0, t, std::cos(w), std::sin(w);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < 4) throw NumericalError("fit_seasonality: design matrix is rank deficient");
  const Matrix coef = qr.solve(panel.log_prices());  // 4 x n
  Matrix residuals = panel.log_prices() - design * coef;
  return {Seasonality(coef.transpose(), period), std::move(residuals)};
}

}  // namespace ouvg
