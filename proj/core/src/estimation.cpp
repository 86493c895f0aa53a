#include <algorithm>
#include <cmath>
#include <limits>

#include "ouvg/errors.hpp"
#include "ouvg/inference.hpp"

namespace ouvg {

LikelihoodValue log_likelihood_detail(const OUModel& model, const Matrix& x, double dt, const PdfGridSpec& grid) {
  const Index n = x.cols();
  if (n != model.dim()) throw ValidationError("log_likelihood: observation and model dimensions differ");
  if (x.rows() < 2) throw ValidationError("log_likelihood: needs at least two observations");
  if (!(dt > 0.0)) throw ValidationError("log_likelihood: dt must be positive");
  const double lambda = model.lambda();
  const double growth = std::exp(lambda * dt);
  const Index m = x.rows() - 1;

  LikelihoodValue out;
  out.value = static_cast<double>(m * n) * lambda * dt;
  auto accumulate = [&](std::optional<double> f, double floor) {
    if (f && *f > 0.0) {
      out.value += std::log(*f);
    } else {
      out.value += std::log(floor);
      ++out.floored;
    }
  };

  if (n == 1) {
    const double hw = grid.half_width.size() >= 1 ? grid.half_width(0) : 0.0;
    const PdfGrid1D g = innovation_pdf_grid_1d(model.bdlp(), lambda, dt, grid.n, hw);
    if (!(g.min_positive > 0.0)) throw NumericalError("log_likelihood: density grid is identically zero");
    const double floor = g.min_positive * 1e-3;
    for (Index i = 1; i <= m; ++i) accumulate(g.value(growth * x(i, 0) - x(i - 1, 0)), floor);
  } else if (n == 2) {
    const PdfGrid2D g = innovation_pdf_grid_2d(model.bdlp(), lambda, dt, grid.n,
                                               grid.half_width.size() == 2 ? grid.half_width : Vector());
    if (!(g.min_positive > 0.0)) throw NumericalError("log_likelihood: density grid is identically zero");
    const double floor = g.min_positive * 1e-3;
    for (Index i = 1; i <= m; ++i)
      accumulate(g.value(growth * x(i, 0) - x(i - 1, 0), growth * x(i, 1) - x(i - 1, 1)), floor);
  } else {
    throw ValidationError("log_likelihood: only one or two dimensions are supported");
  }
  return out;
}

double log_likelihood(const OUModel& model, const Matrix& x, double dt, const PdfGridSpec& grid) {
  return log_likelihood_detail(model, x, dt, grid).value;
}

double estimate_lambda(const Matrix& x, double dt, double* rho) {
  if (x.rows() < 3) throw ValidationError("estimate_lambda: needs at least three observations");
  if (!(dt > 0.0)) throw ValidationError("estimate_lambda: dt must be positive");
  double sum = 0.0;
  for (Index k = 0; k < x.cols(); ++k) {
    const Vector c = x.col(k).array() - x.col(k).mean();
    const double denom = c.squaredNorm();
    if (!(denom > 0.0)) throw NumericalError("estimate_lambda: constant series");
    sum += c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / denom;
  }
  const double r = sum / static_cast<double>(x.cols());
  if (rho != nullptr) *rho = r;
  if (!(r > 0.0) || !(r < 1.0))
    throw NumericalError("estimate_lambda: lag-1 autocorrelation " + std::to_string(r) + " is outside (0, 1)");
  return -std::log(r) / dt;
}

namespace {

double logistic(double p) { return 1.0 / (1.0 + std::exp(-p)); }
double logit(double u) { return std::log(u / (1.0 - u)); }

OUModel marginal_model(double lambda, double alpha, double mu, double sigma) {
  VGParams term(1.0 / alpha, Vector::Constant(1, mu), Matrix::Constant(1, 1, sigma));
  return OUModel(lambda, VGCParams({term}, Vector::Constant(1, -mu)));
}

// Starting values from the sample cumulants of the innovations, mapped back to Z(1)
// through kappa_j(Z*(dt)) = kappa_j(Z(1)) (e^{j lambda dt} - 1) / j.
Vector marginal_start(const Vector& x, double lambda, double dt) {
  const double growth = std::exp(lambda * dt);
  const Vector z = (growth * x.tail(x.size() - 1) - x.head(x.size() - 1)).eval();
  const Vector c = z.array() - z.mean();
  const double nz = static_cast<double>(c.size());
  const double m2 = c.array().square().sum() / nz;
  const double m3 = c.array().cube().sum() / nz;
  const double m4 = c.array().square().square().sum() / nz;
  const double k2 = m2 * 2.0 / (growth * growth - 1.0);
  const double k3 = m3 * 3.0 / (std::pow(growth, 3) - 1.0);
  const double k4 = (m4 - 3.0 * m2 * m2) * 4.0 / (std::pow(growth, 4) - 1.0);
  const double nu = std::clamp(k4 / (3.0 * k2 * k2), 0.05, 20.0);
  const double mu = k3 / (3.0 * k2 * nu);
  const double s = std::max(k2 - mu * mu * nu, 0.5 * k2);
  return Vector{{std::log(nu), mu, std::log(s)}};
}

}  // namespace

EstimationResult estimate_3step(const ObservedPanel& panel, double period, const EstimationOptions& options) {
  if (panel.dim() != 2) throw ValidationError("estimate_3step: expects a bivariate panel");
  SeasonalityFit sf = fit_seasonality(panel, period);
  const Matrix& x = sf.residuals;
  const double dt = panel.dt();
  double rho1 = 0.0;
  const double lambda = estimate_lambda(x, dt, &rho1);

  // Step 2: univariate fits, (log alpha, mu, log Sigma_kk).
  std::vector<SimplexResult> marginal_fits;
  Vector alpha(2), mu(2), sdiag(2);
  const PdfGridSpec grid1{options.n_1d, Vector()};
  for (Index k = 0; k < 2; ++k) {
    const Matrix xk = x.col(k);
    auto objective = [&](const Vector& p) {
      return -log_likelihood(marginal_model(lambda, std::exp(p(0)), p(1), std::exp(p(2))), xk, dt, grid1);
    };
    const Vector p0 = marginal_start(x.col(k), lambda, dt);
    const double zscale = std::exp(0.5 * p0(2));
    const Vector step{{0.5, 0.5 * std::abs(p0(1)) + 0.2 * zscale, 0.5}};
    SimplexResult fit = minimize_simplex(objective, p0, step, options.marginal);
    if (!std::isfinite(fit.value)) throw NumericalError("estimate_3step: marginal likelihood is not finite");
    alpha(k) = std::exp(fit.x(0));
    mu(k) = fit.x(1);
    sdiag(k) = std::exp(fit.x(2));
    marginal_fits.push_back(std::move(fit));
  }

  // Step 3: common clock a in (0, min 1/alpha) and correlation of the Brownian part.
  const double a_max = 1.0 / alpha.maxCoeff();
  const double sd12 = std::sqrt(sdiag(0) * sdiag(1));
  auto build = [&](const Vector& p) {
    const double a = a_max * logistic(p(0));
    const double rho = 2.0 * logistic(p(1)) - 1.0;
    Matrix sigma{{sdiag(0), rho * sd12}, {rho * sd12, sdiag(1)}};
    return WVAGParams(a, alpha, mu, sigma, -mu);
  };
  const PdfGridSpec grid2{options.n_2d, Vector()};
  auto objective = [&](const Vector& p) { return -log_likelihood(OUModel(lambda, build(p)), x, dt, grid2); };

  // Start at a = a_max / 2 and the correlation implied by the innovation covariance.
  const double growth = std::exp(lambda * dt);
  const Matrix z = (growth * x.bottomRows(x.rows() - 1) - x.topRows(x.rows() - 1)).eval();
  const Matrix zc = z.rowwise() - z.colwise().mean();
  const double cov_z1 = (zc.col(0).dot(zc.col(1)) / static_cast<double>(zc.rows())) * 2.0 / (growth * growth - 1.0);
  const double a0 = 0.5 * a_max;
  const double s12 = (cov_z1 / a0 - alpha(0) * alpha(1) * mu(0) * mu(1)) / std::min(alpha(0), alpha(1));
  const double rho0 = std::clamp(s12 / sd12, -0.9, 0.9);
  const Vector p0{{0.0, logit(0.5 * (rho0 + 1.0))}};
  SimplexResult joint = minimize_simplex(objective, p0, Vector::Constant(2, 1.0), options.joint);
  if (!std::isfinite(joint.value)) throw NumericalError("estimate_3step: joint likelihood is not finite");

  const double u_a = logistic(joint.x(0)), u_r = logistic(joint.x(1));
  constexpr double kEdge = 1e-6;
  const bool on_boundary = u_a < kEdge || u_a > 1.0 - kEdge || u_r < kEdge || u_r > 1.0 - kEdge;
  WVAGParams wvag = build(joint.x);
  return EstimationResult{std::move(sf.seasonality), lambda, std::move(wvag), rho1,
                          std::move(marginal_fits), std::move(joint), on_boundary};
}

}  // namespace ouvg
