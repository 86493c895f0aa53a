#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "ouvg/errors.hpp"
#include "ouvg/inference.hpp"

namespace ouvg {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_n(int n) {
  if (n < 4 || (n & (n - 1)) != 0) throw ValidationError("pdf grid: N must be a power of two, at least 4");
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw NumericalError("pdf grid: FFT buffer allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

template <typename MakePlan>
void run_plan(MakePlan make) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = make();
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double min_positive(const double* v, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] > 0.0) best = std::min(best, v[i]);
  return std::isfinite(best) ? best : 0.0;
}

}  // namespace

Vector innovation_std(const VGCParams& bdlp, double lambda, double dt) {
  const double factor = 0.5 * (std::exp(2.0 * lambda * dt) - 1.0);
  return (bdlp.covariance().diagonal() * factor).cwiseSqrt();
}

std::optional<double> PdfGrid1D::value(double y) const {
  const double s = (y - x(0)) / dx;
  const Index n = x.size();
  if (!(s >= 0.0) || s > static_cast<double>(n - 1)) return std::nullopt;
  const Index i = std::min<Index>(static_cast<Index>(s), n - 2);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * pdf(i) + t * pdf(i + 1);
}

std::optional<double> PdfGrid2D::value(double y1, double y2) const {
  const double s1 = (y1 - x1(0)) / dx1, s2 = (y2 - x2(0)) / dx2;
  const Index n1 = x1.size(), n2 = x2.size();
  if (!(s1 >= 0.0) || !(s2 >= 0.0) || s1 > static_cast<double>(n1 - 1) || s2 > static_cast<double>(n2 - 1))
    return std::nullopt;
  const Index i = std::min<Index>(static_cast<Index>(s1), n1 - 2);
  const Index j = std::min<Index>(static_cast<Index>(s2), n2 - 2);
  const double t = s1 - static_cast<double>(i), u = s2 - static_cast<double>(j);
  return (1.0 - t) * (1.0 - u) * pdf(i, j) + t * (1.0 - u) * pdf(i + 1, j) + (1.0 - t) * u * pdf(i, j + 1) +
         t * u * pdf(i + 1, j + 1);
}

PdfGrid1D innovation_pdf_grid_1d(const VGCParams& bdlp, double lambda, double dt, int n, double half_width) {
  check_n(n);
  if (bdlp.dim() != 1) throw ValidationError("pdf grid 1d: expects a univariate driver");
  double xbar = half_width;
  if (!(xbar > 0.0)) xbar = 30.0 * innovation_std(bdlp, lambda, dt)(0);
  if (!(xbar > 0.0) || !std::isfinite(xbar)) throw NumericalError("pdf grid 1d: degenerate innovation");

  const int half = n / 2;
  const double dx = 2.0 * xbar / n;
  const double du = 2.0 * kPi / (n * dx);
  FftwBuffer buf(static_cast<std::size_t>(n));
  auto* c = reinterpret_cast<Complex*>(buf.data);
  CVector theta(1);
  for (int k = 0; k < n; ++k) {
    theta(0) = Complex(0.0, (k - half) * du);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    c[k] = sign * std::exp(innovation_cgf(bdlp, lambda, dt, theta));
  }
  run_plan([&] { return fftw_plan_dft_1d(n, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE); });

  PdfGrid1D g;
  g.dx = dx;
  g.x.resize(n);
  g.pdf.resize(n);
  for (int j = 0; j < n; ++j) {
    g.x(j) = (j - half) * dx;
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    g.pdf(j) = std::max(0.0, sign * du / (2.0 * kPi) * c[j].real());
  }
  g.min_positive = min_positive(g.pdf.data(), static_cast<std::size_t>(n));
  return g;
}

PdfGrid2D innovation_pdf_grid_2d(const VGCParams& bdlp, double lambda, double dt, int n, const Vector& half_width) {
  check_n(n);
  if (bdlp.dim() != 2) throw ValidationError("pdf grid 2d: expects a bivariate driver");
  Vector xbar = half_width;
  if (xbar.size() != 2) xbar = 30.0 * innovation_std(bdlp, lambda, dt);
  if (!(xbar.array() > 0.0).all() || !xbar.allFinite()) throw NumericalError("pdf grid 2d: degenerate innovation");

  const int half = n / 2;
  const double dx1 = 2.0 * xbar(0) / n, dx2 = 2.0 * xbar(1) / n;
  const double du1 = 2.0 * kPi / (n * dx1), du2 = 2.0 * kPi / (n * dx2);
  const double growth = std::exp(lambda * dt);

  // Terms acting on one axis only are tabulated once per axis.
  std::vector<Complex> axis1(n), axis2(n);
  std::vector<const VGParams*> joint;
  for (int k = 0; k < n; ++k) {
    axis1[k] = (growth - 1.0) * bdlp.eta()(0) * Complex(0.0, (k - half) * du1);
    axis2[k] = (growth - 1.0) * bdlp.eta()(1) * Complex(0.0, (k - half) * du2);
  }
  for (const auto& t : bdlp.terms()) {
    const bool uses1 = t.mu()(0) != 0.0 || t.sigma()(0, 0) != 0.0 || t.sigma()(0, 1) != 0.0;
    const bool uses2 = t.mu()(1) != 0.0 || t.sigma()(1, 1) != 0.0 || t.sigma()(0, 1) != 0.0;
    if (uses1 && uses2) {
      joint.push_back(&t);
      continue;
    }
    const int ax = uses2 ? 1 : 0;
    for (int k = 0; k < n; ++k) {
      const Complex w(0.0, (k - half) * (ax == 0 ? du1 : du2));
      auto& slot = ax == 0 ? axis1[k] : axis2[k];
      slot += detail::vg_innovation_kernel(t.b(), growth, t.mu()(ax) * w, t.sigma()(ax, ax) * w * w);
    }
  }

  FftwBuffer buf(static_cast<std::size_t>(n) * n);
  auto* c = reinterpret_cast<Complex*>(buf.data);
#pragma omp parallel for schedule(static)
  for (int k1 = 0; k1 < n; ++k1) {
    const Complex w1(0.0, (k1 - half) * du1);
    for (int k2 = 0; k2 < n; ++k2) {
      const Complex w2(0.0, (k2 - half) * du2);
      Complex acc = axis1[k1] + axis2[k2];
      for (const VGParams* t : joint) {
        const Complex mt = t->mu()(0) * w1 + t->mu()(1) * w2;
        const Complex q = t->sigma()(0, 0) * w1 * w1 + 2.0 * t->sigma()(0, 1) * w1 * w2 + t->sigma()(1, 1) * w2 * w2;
        acc += detail::vg_innovation_kernel(t->b(), growth, mt, q);
      }
      const double sign = (k1 + k2) % 2 == 0 ? 1.0 : -1.0;
      c[static_cast<std::size_t>(k1) * n + k2] = sign * std::exp(acc);
    }
  }
  run_plan([&] { return fftw_plan_dft_2d(n, n, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE); });

  PdfGrid2D g;
  g.dx1 = dx1;
  g.dx2 = dx2;
  g.x1.resize(n);
  g.x2.resize(n);
  g.pdf.resize(n, n);
  for (int j = 0; j < n; ++j) {
    g.x1(j) = (j - half) * dx1;
    g.x2(j) = (j - half) * dx2;
  }
  const double scale = du1 * du2 / (4.0 * kPi * kPi);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const double sign = (j1 + j2) % 2 == 0 ? 1.0 : -1.0;
      g.pdf(j1, j2) = std::max(0.0, sign * scale * c[static_cast<std::size_t>(j1) * n + j2].real());
    }
  g.min_positive = min_positive(g.pdf.data(), static_cast<std::size_t>(n) * n);
  return g;
}

}  // namespace ouvg
