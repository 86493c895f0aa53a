#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include "ouvg/errors.hpp"
#include "ouvg/pricing.hpp"
#include "ouvg/specfun.hpp"

namespace ouvg {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Half-width of the interpolation window in nodes. Natural end conditions
// perturb the interior by roughly 0.27^k at k nodes from the edge.
constexpr int kSplineHalfWindow = 12;

// Natural cubic spline through y[0..m) on unit spacing, evaluated at s in [0, m-1].
double spline_eval(const double* y, int m, double s) {
  std::array<double, 2 * kSplineHalfWindow> c{}, d{}, mm{};
  // Thomas algorithm for M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}), M_0 = M_{m-1} = 0.
  const int inner = m - 2;
  for (int i = 0; i < inner; ++i) {
    const double rhs = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
    const double denom = 4.0 - (i > 0 ? c[i - 1] : 0.0);
    c[i] = 1.0 / denom;
    d[i] = (rhs - (i > 0 ? d[i - 1] : 0.0)) / denom;
  }
  mm[0] = 0.0;
  mm[m - 1] = 0.0;
  for (int i = inner - 1; i >= 0; --i) mm[i + 1] = d[i] - c[i] * (i + 1 < inner ? mm[i + 2] : 0.0);
  int j = static_cast<int>(std::floor(s));
  j = std::clamp(j, 0, m - 2);
  const double t = s - j, u = 1.0 - t;
  return u * y[j] + t * y[j + 1] + ((u * u * u - u) * mm[j] + (t * t * t - t) * mm[j + 1]) / 6.0;
}

// Rows [lo, lo + count) of a window that fits inside [0, n) around position s.
std::pair<int, int> window(double s, int n) {
  const int i = static_cast<int>(std::floor(s));
  if (i < 1 || i + 2 > n - 1) return {-1, 0};
  const int lo = std::max(0, i - kSplineHalfWindow + 1);
  const int hi = std::min(n - 1, i + kSplineHalfWindow);
  return {lo, hi - lo + 1};
}

}  // namespace

double SpreadSurface::interpolate(double y1, double y2) const {
  const int n = static_cast<int>(x1.size());
  const double s1 = (y1 - x1(0)) / delta_x1;
  const double s2 = (y2 - x2(0)) / delta_x2;
  const auto [lo1, m1] = window(s1, n);
  const auto [lo2, m2] = window(s2, n);
  if (lo1 < 0 || lo2 < 0) throw DomainError("spread surface: point outside the x-grid");
  std::array<double, 2 * kSplineHalfWindow> col{}, row{};
  for (int a = 0; a < m1; ++a) {
    for (int b = 0; b < m2; ++b) row[b] = values(lo1 + a, lo2 + b);
    col[a] = spline_eval(row.data(), m2, s2 - lo2);
  }
  return spline_eval(col.data(), m1, s1 - lo1);
}

Complex phat(Complex theta1, Complex theta2) {
  const Complex I(0.0, 1.0);
  return std::exp(log_gamma(I * (theta1 + theta2) - 1.0) + log_gamma(-I * theta2) - log_gamma(I * theta1 + 1.0));
}

Vector default_spread_dampening() { return Vector{{-3.5, 1.0}}; }

Vector admissible_spread_dampening(const MarketModel& model, Index k, Index l, const Vector& preferred) {
  if (k == l || k < 0 || l < 0 || k >= model.dim() || l >= model.dim())
    throw ValidationError("spread: needs two distinct components");
  if (preferred.size() != 2 || !(preferred(0) + preferred(1) < -1.0 && preferred(1) > 0.0))
    throw DampeningError("spread: need eps_1 + eps_2 < -1 and eps_2 > 0");
  const VGCParams& q = model.ou_q().bdlp();
  auto probe = [&](const Vector& e) {
    Vector p = Vector::Zero(model.dim());
    p(k) = -e(0);
    p(l) = -e(1);
    return p;
  };
  if (domain_contains(q, probe(preferred))) return preferred;

  // Weak dampening slows the decay of the transform as much as sitting on the
  // domain edge does, so keep the smallest of the three margins as large as possible.
  Vector best;
  double best_margin = 0.0;
  for (int i = 1; i <= 80; ++i) {
    const double strip = 0.05 * i;  // -1 - eps_1 - eps_2
    for (int j = 1; j <= 40; ++j) {
      const double e2 = 0.05 * j;
      const Vector e{{-1.0 - strip - e2, e2}};
      const Vector p = probe(e);
      const double norm = p.norm();
      const double slack = domain_radius(q, p / norm) - norm;
      const double margin = std::min({strip, e2, slack});
      if (margin > best_margin) {
        best_margin = margin;
        best = e;
      }
    }
  }
  if (best.size() == 0) throw DomainError("spread: no admissible dampening under Q_h");
  return best;
}

SpreadSurface spread_price_unit(const MarketModel& model, const MarketState& state, Index k, Index l, double T,
                                const Vector& eps, const FFTGridSpec& grid) {
  grid.validate();
  if (k == l || k < 0 || l < 0 || k >= model.dim() || l >= model.dim())
    throw ValidationError("spread: needs two distinct components");
  if (eps.size() != 2) throw ValidationError("spread: dampening must have two entries");
  if (!(eps(0) + eps(1) < -1.0 && eps(1) > 0.0))
    throw DampeningError("spread: need eps_1 + eps_2 < -1 and eps_2 > 0");
  const double tau = T - state.t();
  if (!(tau > 0.0)) throw ValidationError("spread: maturity must follow the current time");
  Vector probe = Vector::Zero(model.dim());
  probe(k) = -eps(0);
  probe(l) = -eps(1);
  if (!domain_contains(model.ou_q().bdlp(), probe))
    throw DomainError("spread: -eps outside the pricing-measure domain");

  const int n = grid.n;
  const int half = n / 2;
  const std::array<Index, 2> comps{k, l};

  // Rescale each axis so that log(S / anchor) sits exactly on a node.
  std::array<double, 2> dth{}, dx{};
  for (int a = 0; a < 2; ++a) {
    const double y = std::log(state.spot()(comps[a]) / kSpreadAnchor);
    const double dx0 = 2.0 * kPi / (n * grid.delta_theta(a));
    long j = std::lround(y / dx0);
    if (y != 0.0 && j == 0) j = y > 0.0 ? 1 : -1;
    if (std::labs(j) > half - 2) throw DomainError("spread: anchor falls outside the x-grid");
    dx[a] = y == 0.0 ? dx0 : y / static_cast<double>(j);
    dth[a] = 2.0 * kPi / (n * dx[a]);
  }

  const VGCParams q = model.ou_q().bdlp().marginal(comps);
  const double lambda = model.ou().lambda();
  const double decay = std::exp(-lambda * tau), growth = std::exp(lambda * tau);
  const Vector shift = model.seasonality()(T) + state.x(model.seasonality()) * decay - state.log_spot();
  const double d1 = shift(k), d2 = shift(l);
  const Complex I(0.0, 1.0);

  // Terms touching a single axis are tabulated once per axis.
  enum class Axis { kFirst, kSecond, kBoth };
  std::vector<Axis> axis(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto& t = q.terms()[j];
    const bool uses1 = t.mu()(0) != 0.0 || t.sigma()(0, 0) != 0.0 || t.sigma()(0, 1) != 0.0;
    const bool uses2 = t.mu()(1) != 0.0 || t.sigma()(1, 1) != 0.0 || t.sigma()(0, 1) != 0.0;
    axis[j] = uses1 && uses2 ? Axis::kBoth : (uses2 ? Axis::kSecond : Axis::kFirst);
  }

  std::vector<Complex> z1(n), z2(n), log1(n), log2(n);
  for (int i = 0; i < n; ++i) {
    z1[i] = Complex((i - half) * dth[0], eps(0));
    z2[i] = Complex((i - half) * dth[1], eps(1));
    const Complex th1 = I * z1[i], th2 = I * z2[i];
    const Complex w1 = decay * th1, w2 = decay * th2;
    log1[i] = (d1 + (1.0 - decay) * q.eta()(0)) * th1 - log_gamma(th1 + 1.0);
    log2[i] = (d2 + (1.0 - decay) * q.eta()(1)) * th2 + log_gamma(-th2);
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto& t = q.terms()[j];
      if (axis[j] == Axis::kFirst)
        log1[i] += detail::vg_innovation_kernel(t.b(), growth, t.mu()(0) * w1, t.sigma()(0, 0) * w1 * w1);
      else if (axis[j] == Axis::kSecond)
        log2[i] += detail::vg_innovation_kernel(t.b(), growth, t.mu()(1) * w2, t.sigma()(1, 1) * w2 * w2);
    }
  }

  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
  if (buf == nullptr) throw NumericalError("spread: FFT buffer allocation failed");
  auto* h = reinterpret_cast<Complex*>(buf);

#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < n; ++i1) {
    const Complex w1 = decay * I * z1[i1];
    for (int i2 = 0; i2 < n; ++i2) {
      Complex& out = h[static_cast<std::size_t>(i1) * n + i2];
      // The first row and column have no mirror image; dropping them keeps H Hermitian.
      if (i1 == 0 || i2 == 0) {
        out = 0.0;
        continue;
      }
      const Complex w2 = decay * I * z2[i2];
      Complex acc = log1[i1] + log2[i2] + log_gamma(I * (z1[i1] + z2[i2]) - 1.0);
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (axis[j] != Axis::kBoth) continue;
        const auto& t = q.terms()[j];
        const Complex mt = t.mu()(0) * w1 + t.mu()(1) * w2;
        const Complex qq = t.sigma()(0, 0) * w1 * w1 + 2.0 * t.sigma()(0, 1) * w1 * w2 + t.sigma()(1, 1) * w2 * w2;
        acc += detail::vg_innovation_kernel(t.b(), growth, mt, qq);
      }
      out = ((i1 + i2) % 2 == 0 ? 1.0 : -1.0) * std::exp(acc);
    }
  }

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  SpreadSurface surf;
  surf.delta_x1 = dx[0];
  surf.delta_x2 = dx[1];
  surf.x1.resize(n);
  surf.x2.resize(n);
  for (int j = 0; j < n; ++j) {
    surf.x1(j) = (j - half) * dx[0];
    surf.x2(j) = (j - half) * dx[1];
  }
  surf.values.resize(n, n);
  const double pre = std::exp(-model.r() * tau) / (4.0 * kPi * kPi) * dth[0] * dth[1];
  double max_imag = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const Complex v = h[static_cast<std::size_t>(j1) * n + j2];
      const double sign = (j1 + j2) % 2 == 0 ? 1.0 : -1.0;
      max_imag = std::max(max_imag, pre * std::abs(v.imag()));
      surf.values(j1, j2) = pre * sign * std::exp(-eps(0) * surf.x1(j1) - eps(1) * surf.x2(j2)) * v.real();
    }
  }
  surf.max_imag = max_imag;
  fftw_free(buf);
  return surf;
}

std::vector<double> spread_price_fft(const MarketModel& model, const MarketState& state, Index k, Index l,
                                     const std::vector<double>& strikes, double T, const Vector& eps,
                                     const FFTGridSpec& grid) {
  for (double K : strikes)
    if (!(K > 0.0)) throw ValidationError("spread: strikes must be positive");
  const SpreadSurface surf = spread_price_unit(model, state, k, l, T, eps, grid);
  std::vector<double> out;
  out.reserve(strikes.size());
  for (double K : strikes) {
    const double y1 = std::log(state.spot()(k) / K), y2 = std::log(state.spot()(l) / K);
    out.push_back(K * surf.interpolate(y1, y2));
  }
  return out;
}

}  // namespace ouvg
