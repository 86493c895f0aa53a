#include "ouvg/ldoup.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cassert>
#include <cmath>
#include <string>

#include "ouvg/errors.hpp"
#include "ouvg/specfun.hpp"

namespace ouvg {

OUModel::OUModel(double lambda, VGCParams bdlp) : lambda_(lambda), bdlp_(std::move(bdlp)) {
  if (!(std::isfinite(lambda_) && lambda_ > 0.0)) throw ValidationError("OU: lambda must be positive");
}

OUModel::OUModel(double lambda, const WVAGParams& bdlp) : OUModel(lambda, wvag_to_vgc(bdlp)) {
  wvag_ = bdlp;
}

OUModel OUModel::with_bdlp(VGCParams bdlp) const { return OUModel(lambda_, std::move(bdlp)); }

InnovationSpec::InnovationSpec(OUModel model, double dt) : model_(std::move(model)), dt_(dt) {
  if (!(std::isfinite(dt_) && dt_ > 0.0)) throw ValidationError("innovation: dt must be positive");
}

namespace {

void check_innovation_domain(const VGParams& vg, double c, const CVector& theta) {
  if (!vg_domain_contains(vg, c * theta.real()))
    throw DomainError("innovation cgf: e^{lambda t} Re(theta) outside the domain");
}

}  // namespace

Complex vg_innovation_cgf(const VGParams& vg, double lambda, double t, const CVector& theta) {
  if (theta.size() != vg.dim()) throw ValidationError("innovation cgf: dimension mismatch");
  if (!(t >= 0.0)) throw ValidationError("innovation cgf: t must be nonnegative");
  const double c = std::exp(lambda * t);
  check_innovation_domain(vg, c, theta);
  if (t == 0.0) return 0.0;

  const Complex mt = (vg.mu().cast<Complex>().transpose() * theta).value();
  const Complex q = (theta.transpose() * vg.sigma().cast<Complex>() * theta).value();
#ifndef NDEBUG
  if (theta.imag().isZero(0.0) && q != 0.0) {
    // Real arguments: -cB < -B <= 0 <= A < cA < 1.
    const double root = std::sqrt(mt.real() * mt.real() + 2.0 * vg.b() * q.real());
    const double A = (root + mt.real()) / (2.0 * vg.b()), B = (root - mt.real()) / (2.0 * vg.b());
    assert(A >= 0.0 && B >= 0.0 && c * A < 1.0);
  }
#endif
  return detail::vg_innovation_kernel(vg.b(), c, mt, q);
}

namespace detail {

Complex vg_innovation_kernel(double b, double c, Complex mt, Complex q) {
  if (q == 0.0) {
    const Complex at = mt / b;
    return b * (dilog(c * at) - dilog(at));
  }
  // A and -B swap under a sign change of the root, so align the root with mt and
  // take B = q / (root + mt) to avoid cancellation.
  Complex root = std::sqrt(mt * mt + 2.0 * b * q);
  if (std::real(root * std::conj(mt)) < 0.0) root = -root;
  const Complex sum = root + mt;
  if (sum == 0.0) return 0.0;
  const Complex A = sum / (2.0 * b);
  const Complex B = q / sum;
  return b * (dilog(c * A) - dilog(A) + dilog(-c * B) - dilog(-B));
}

}  // namespace detail

Complex vg_innovation_cgf_1d(const VGParams& vg, double lambda, double t, Complex theta,
                             ThetaConvention convention) {
  if (vg.dim() != 1) throw ValidationError("innovation cgf 1d: expects a univariate law");
  const double sigma = vg.sigma()(0, 0);
  if (!(sigma > 0.0)) throw ValidationError("innovation cgf 1d: needs Sigma > 0");
  if (!(t >= 0.0)) throw ValidationError("innovation cgf: t must be nonnegative");
  const double c = std::exp(lambda * t);
  const double b = vg.b(), mu = vg.mu()(0);
  if (!vg_domain_contains(vg, Vector::Constant(1, c * theta.real())))
    throw DomainError("innovation cgf: e^{lambda t} Re(theta) outside the domain");
  if (t == 0.0 || theta == 0.0) return 0.0;

  // |theta| continues analytically as sqrt(theta^2) off the real axis.
  const Complex mod = convention == ThetaConvention::kModulus
                          ? (theta.imag() == 0.0 ? Complex(std::abs(theta.real())) : std::sqrt(theta * theta))
                          : theta;
  const double s = std::sqrt(mu * mu + 2.0 * b * sigma) / (2.0 * b);
  const Complex A = s * mod + mu * theta / (2.0 * b);
  const Complex B = s * mod - mu * theta / (2.0 * b);
  return b * (dilog(c * A) - dilog(A) + dilog(-c * B) - dilog(-B));
}

Complex innovation_cgf(const VGCParams& bdlp, double lambda, double t, const CVector& theta) {
  if (theta.size() != bdlp.dim()) throw ValidationError("innovation cgf: dimension mismatch");
  const double c = std::exp(lambda * t);
  Complex sum = (c - 1.0) * (bdlp.eta().cast<Complex>().transpose() * theta).value();
  for (std::size_t j = 0; j < bdlp.size(); ++j) {
    try {
      sum += vg_innovation_cgf(bdlp.terms()[j], lambda, t, theta);
    } catch (const DomainError&) {
      throw DomainError("innovation cgf: e^{lambda t} Re(theta) outside the domain of term " +
                        std::to_string(j));
    }
  }
  return sum;
}

Complex innovation_cgf(const InnovationSpec& spec, const CVector& theta, double t) {
  return innovation_cgf(spec.model().bdlp(), spec.model().lambda(), t, theta);
}

Complex innovation_cgf_by_quadrature(const VGCParams& bdlp, double lambda, double t,
                                     const CVector& theta, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double upper = lambda * t;
  if (upper == 0.0) return 0.0;
  auto integrand = [&](double s) { return vgc_cgf(bdlp, std::exp(s) * theta); };
  auto re = [&](double s) { return integrand(s).real(); };
  auto im = [&](double s) { return integrand(s).imag(); };
  const double vr = gauss_kronrod<double, 31>::integrate(re, 0.0, upper, 30, tol);
  const double vi = gauss_kronrod<double, 31>::integrate(im, 0.0, upper, 30, tol);
  return {vr, vi};
}

DriverSampler::DriverSampler(const VGCParams& bdlp, double h)
    : n_(bdlp.dim()), drift_(static_cast<std::size_t>(n_)), z_(static_cast<std::size_t>(n_)) {
  if (!(h > 0.0)) throw ValidationError("driver sampler: h must be positive");
  for (Index i = 0; i < n_; ++i) drift_[i] = bdlp.eta()(i) * h;
  for (const auto& term : bdlp.terms()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(term.sigma());
    const Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix root = es.eigenvectors() * ev.asDiagonal();
    Term tm{std::gamma_distribution<double>(term.b() * h, 1.0 / term.b()),
            std::vector<double>(term.mu().data(), term.mu().data() + n_),
            std::vector<double>(static_cast<std::size_t>(n_ * n_)), !term.sigma().isZero(0.0)};
    for (Index i = 0; i < n_; ++i)
      for (Index j = 0; j < n_; ++j) tm.root[i * n_ + j] = root(i, j);
    terms_.push_back(std::move(tm));
  }
}

void DriverSampler::add_increment(Rng& rng, double weight, double* out) {
  for (Index i = 0; i < n_; ++i) out[i] += weight * drift_[i];
  for (auto& tm : terms_) {
    const double g = tm.clock(rng);
    if (g <= 0.0) continue;
    for (Index i = 0; i < n_; ++i) out[i] += weight * tm.mu[i] * g;
    if (!tm.gaussian) continue;
    const double sg = weight * std::sqrt(g);
    for (Index j = 0; j < n_; ++j) z_[j] = normal_(rng);
    for (Index i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < n_; ++j) acc += tm.root[i * n_ + j] * z_[j];
      out[i] += sg * acc;
    }
  }
}

void DriverSampler::reset() {
  normal_.reset();
  for (auto& tm : terms_) tm.clock.reset();
}

Vector simulate_innovation(const VGCParams& bdlp, double lambda, double t, int n_sub, Rng& rng) {
  if (n_sub < 1) throw ValidationError("simulate_innovation: n_sub must be at least 1");
  const double h = lambda * t / n_sub;
  Vector out = Vector::Zero(bdlp.dim());
  if (h == 0.0) return out;
  // The drift integrates exactly; only the jump part is discretized.
  out = std::expm1(lambda * t) * bdlp.eta();
  DriverSampler sampler(VGCParams(bdlp.terms(), Vector::Zero(bdlp.dim())), h);
  for (int i = 0; i < n_sub; ++i) sampler.add_increment(rng, std::exp(i * h), out.data());
  return out;
}

Vector simulate_innovation(const InnovationSpec& spec, int n_sub, Rng& rng) {
  return simulate_innovation(spec.model().bdlp(), spec.model().lambda(), spec.dt(), n_sub, rng);
}

Matrix simulate_path(const InnovationSpec& spec, int m, int n_sub, double burn_in_fraction, Rng& rng) {
  if (m < 1) throw ValidationError("simulate_path: m must be at least 1");
  if (n_sub < 1) throw ValidationError("simulate_path: n_sub must be at least 1");
  if (!(burn_in_fraction >= 0.0)) throw ValidationError("simulate_path: negative burn-in");
  const auto& bdlp = spec.model().bdlp();
  const double decay = spec.decay();
  const double h = spec.model().lambda() * spec.dt() / n_sub;
  DriverSampler sampler(VGCParams(bdlp.terms(), Vector::Zero(bdlp.dim())), h);
  const Vector drift = decay * std::expm1(spec.model().lambda() * spec.dt()) * bdlp.eta();
  std::vector<double> weights(static_cast<std::size_t>(n_sub));
  for (int i = 0; i < n_sub; ++i) weights[i] = decay * std::exp(i * h);

  const Index n = bdlp.dim();
  Vector x = bdlp.mean();
  auto step = [&]() {
    Vector next = decay * x + drift;
    for (int i = 0; i < n_sub; ++i) sampler.add_increment(rng, weights[i], next.data());
    x = next;
  };
  const int burn = static_cast<int>(std::ceil(burn_in_fraction * m));
  for (int i = 0; i < burn; ++i) step();

  Matrix path(m + 1, n);
  path.row(0) = x.transpose();
  for (int i = 1; i <= m; ++i) {
    step();
    path.row(i) = x.transpose();
  }
  return path;
}

Matrix stationary_covariance(const OUModel& model) { return 0.5 * model.bdlp().covariance(); }

}  // namespace ouvg
