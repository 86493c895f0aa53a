#include "ouvg/levy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "ouvg/errors.hpp"

namespace ouvg {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool symmetric_psd(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!m.isApprox(m.transpose(), 1e-12) && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-12 * scale;
}

Complex bilinear(const Matrix& s, const CVector& theta) {
  return (theta.transpose() * s.cast<Complex>() * theta).value();
}

Complex dot(const Vector& v, const CVector& theta) {
  return (v.cast<Complex>().transpose() * theta).value();
}

}  // namespace

VGParams::VGParams(double b, Vector mu, Matrix sigma)
    : VGParams(b, mu, std::move(sigma), Vector::Zero(mu.size())) {}

VGParams::VGParams(double b, Vector mu, Matrix sigma, Vector eta)
    : b_(b), mu_(std::move(mu)), sigma_(std::move(sigma)), eta_(std::move(eta)) {
  require(std::isfinite(b_) && b_ > 0.0, "VG: b must be positive");
  require(mu_.size() >= 1, "VG: empty dimension");
  require(sigma_.rows() == mu_.size() && sigma_.cols() == mu_.size(), "VG: sigma has wrong shape");
  require(eta_.size() == mu_.size(), "VG: eta has wrong length");
  require(mu_.allFinite() && sigma_.allFinite() && eta_.allFinite(), "VG: non-finite parameter");
  require(symmetric_psd(sigma_), "VG: sigma must be symmetric positive semidefinite");
}

VGParams VGParams::marginal(std::span<const Index> components) const {
  const Index m = static_cast<Index>(components.size());
  Vector mu(m), eta(m);
  Matrix sigma(m, m);
  for (Index i = 0; i < m; ++i) {
    require(components[i] >= 0 && components[i] < dim(), "VG: marginal index out of range");
    mu(i) = mu_(components[i]);
    eta(i) = eta_(components[i]);
    for (Index j = 0; j < m; ++j) sigma(i, j) = sigma_(components[i], components[j]);
  }
  return VGParams(b_, mu, sigma, eta);
}

VGCParams::VGCParams(std::vector<VGParams> terms, Vector eta)
    : terms_(std::move(terms)), eta_(std::move(eta)) {
  require(!terms_.empty(), "VGC: needs at least one term");
  for (const auto& t : terms_) {
    require(t.dim() == eta_.size(), "VGC: term dimensions disagree");
    require(t.eta().isZero(0.0), "VGC: terms must carry no drift");
  }
  require(eta_.allFinite(), "VGC: non-finite eta");
}

VGCParams::VGCParams(std::vector<VGParams> terms)
    : VGCParams(terms, terms.empty() ? Vector() : Vector::Zero(terms.front().dim())) {}

VGCParams VGCParams::marginal(std::span<const Index> components) const {
  std::vector<VGParams> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.marginal(components));
  Vector eta(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) eta(static_cast<Index>(i)) = eta_(components[i]);
  return VGCParams(std::move(out), eta);
}

Vector VGCParams::mean() const {
  Vector m = eta_;
  for (const auto& t : terms_) m += t.mu();
  return m;
}

Matrix VGCParams::covariance() const {
  Matrix c = Matrix::Zero(dim(), dim());
  for (const auto& t : terms_) c += t.sigma() + t.mu() * t.mu().transpose() / t.b();
  return c;
}

WVAGParams::WVAGParams(double a, Vector alpha, Vector mu, Matrix sigma, Vector eta)
    : a_(a), alpha_(std::move(alpha)), mu_(std::move(mu)), sigma_(std::move(sigma)), eta_(std::move(eta)) {
  require(std::isfinite(a_) && a_ > 0.0, "WVAG: a must be positive");
  require(mu_.size() >= 2, "WVAG: dimension must be at least 2");
  require(alpha_.size() == mu_.size() && eta_.size() == mu_.size(), "WVAG: vector lengths disagree");
  require(sigma_.rows() == mu_.size() && sigma_.cols() == mu_.size(), "WVAG: sigma has wrong shape");
  require(alpha_.allFinite() && mu_.allFinite() && sigma_.allFinite() && eta_.allFinite(),
          "WVAG: non-finite parameter");
  for (Index k = 0; k < alpha_.size(); ++k) {
    require(alpha_(k) > 0.0, "WVAG: alpha must be positive");
    require(a_ * alpha_(k) < 1.0, "WVAG: need a * alpha_k < 1");
  }
  require(symmetric_psd(sigma_), "WVAG: sigma must be symmetric positive semidefinite");
}

Vector WVAGParams::mu_diamond_alpha() const { return mu_.cwiseProduct(alpha_); }

Matrix WVAGParams::sigma_diamond_alpha() const {
  Matrix out(dim(), dim());
  for (Index i = 0; i < dim(); ++i)
    for (Index j = 0; j < dim(); ++j) out(i, j) = sigma_(i, j) * std::min(alpha_(i), alpha_(j));
  return out;
}

Complex vg_K(const VGParams& p, const CVector& theta) {
  if (theta.size() != p.dim()) throw ValidationError("vg_K: dimension mismatch");
  return 1.0 - dot(p.mu(), theta) / p.b() - bilinear(p.sigma(), theta) / (2.0 * p.b());
}

double vg_K(const VGParams& p, const Vector& theta) {
  if (theta.size() != p.dim()) throw ValidationError("vg_K: dimension mismatch");
  return 1.0 - p.mu().dot(theta) / p.b() - theta.dot(p.sigma() * theta) / (2.0 * p.b());
}

bool vg_domain_contains(const VGParams& p, const Vector& theta) { return vg_K(p, theta) > 0.0; }

Complex vg_cgf(const VGParams& p, const CVector& theta, double t) {
  if (!vg_domain_contains(p, theta.real()))
    throw DomainError("vg_cgf: Re(theta) outside the exponential moment domain");
  return t * (dot(p.eta(), theta) - p.b() * std::log(vg_K(p, theta)));
}

Complex vgc_cgf(const VGCParams& p, const CVector& theta, double t) {
  if (theta.size() != p.dim()) throw ValidationError("vgc_cgf: dimension mismatch");
  Complex sum = t * dot(p.eta(), theta);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!vg_domain_contains(p.terms()[j], theta.real()))
      throw DomainError("vgc_cgf: Re(theta) outside the domain of term " + std::to_string(j));
    sum += vg_cgf(p.terms()[j], theta, t);
  }
  return sum;
}

Complex wvag_cgf(const WVAGParams& p, const CVector& theta, double t) {
  if (theta.size() != p.dim()) throw ValidationError("wvag_cgf: dimension mismatch");
  const Index n = p.dim();
  // Common clock of shape a scaled by alpha, then one idiosyncratic clock per component.
  auto common = [&](const auto& th) {
    using T = std::decay_t<decltype(th(0))>;
    T lin(0.0), quad(0.0);
    for (Index i = 0; i < n; ++i) {
      lin += p.mu()(i) * p.alpha()(i) * th(i);
      for (Index j = 0; j < n; ++j)
        quad += th(i) * p.sigma()(i, j) * std::min(p.alpha()(i), p.alpha()(j)) * th(j);
    }
    return T(1.0) - lin - T(0.5) * quad;
  };
  auto own = [&](Index k, auto x) {
    const double al = p.alpha()(k);
    return decltype(x)(1.0) - al * p.mu()(k) * x - decltype(x)(0.5 * al * p.sigma()(k, k)) * x * x;
  };
  const Vector re = theta.real();
  if (!(common(re) > 0.0)) throw DomainError("wvag_cgf: common-clock term outside the domain");
  Complex sum = -p.a() * std::log(common(theta));
  for (Index k = 0; k < n; ++k) {
    if (!(own(k, re(k)) > 0.0)) throw DomainError("wvag_cgf: idiosyncratic term outside the domain");
    sum += p.eta()(k) * theta(k) - p.beta(k) * std::log(own(k, theta(k)));
  }
  return t * sum;
}

VGCParams wvag_to_vgc(const WVAGParams& p) {
  const Index n = p.dim();
  std::vector<VGParams> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  terms.emplace_back(p.a(), p.a() * p.mu_diamond_alpha(), p.a() * p.sigma_diamond_alpha());
  for (Index k = 0; k < n; ++k) {
    const double ab = p.alpha()(k) * p.beta(k);
    Vector mu = Vector::Zero(n);
    Matrix sigma = Matrix::Zero(n, n);
    mu(k) = ab * p.mu()(k);
    sigma(k, k) = ab * p.sigma()(k, k);
    terms.emplace_back(p.beta(k), mu, sigma);
  }
  return VGCParams(std::move(terms), p.eta());
}

std::array<double, 4> vg_cumulants_1d(const VGParams& p) {
  if (p.dim() != 1) throw ValidationError("vg_cumulants_1d: expects a univariate law");
  const double b = p.b(), m = p.mu()(0), s = p.sigma()(0, 0);
  return {p.eta()(0) + m, s + m * m / b, 3.0 * s * m / b + 2.0 * m * m * m / (b * b),
          3.0 * s * s / b + 12.0 * s * m * m / (b * b) + 6.0 * m * m * m * m / (b * b * b)};
}

Moments1D moments_from_cumulants(const std::array<double, 4>& k) {
  Moments1D out{k[0], k[1], 0.0, 3.0};
  if (k[1] > 0.0) {
    out.skewness = k[2] / std::pow(k[1], 1.5);
    out.kurtosis = 3.0 + k[3] / (k[1] * k[1]);
  }
  return out;
}

Moments1D vg_moments_1d(const VGParams& p) { return moments_from_cumulants(vg_cumulants_1d(p)); }

std::vector<double> vg_match_nu_roots(double mean, double variance, double third) {
  if (!(variance > 0.0)) throw ValidationError("vg_match_nu_roots: variance must be positive");
  // With nu = 1/b: var = S + mu^2 nu and k3 = 3 S mu nu + 2 mu^3 nu^2, mean = mu.
  // Eliminating S gives mu^3 nu^2 - 3 var mu nu + k3 = 0.
  std::vector<double> nus;
  const double mu = mean;
  // A symmetric target leaves nu undetermined by three moments.
  if (mu == 0.0) return nus;
  const double qa = mu * mu * mu, qb = -3.0 * variance * mu, qc = third;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return nus;
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  if (q != 0.0) {
    nus.push_back(q / qa);
    nus.push_back(qc / q);
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

std::vector<VGParams> vg_match_three_moments(double mean, double variance, double third) {
  std::vector<VGParams> out;
  for (double nu : vg_match_nu_roots(mean, variance, third)) {
    const double s = variance - mean * mean * nu;
    if (nu > 0.0 && s >= 0.0) out.emplace_back(1.0 / nu, Vector::Constant(1, mean), Matrix::Constant(1, 1, s));
  }
  return out;
}

}  // namespace ouvg
