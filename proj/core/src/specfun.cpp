#include "ouvg/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ouvg/errors.hpp"

namespace ouvg {
namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;

// B_{2k} / (2k+1)! for k = 1..20, the coefficients of the Bernoulli series
// Li2(z) = u - u^2/4 + sum_k B_{2k} u^{2k+1} / (2k+1)!,  u = -log(1 - z).
// The series converges for |u| < 2 pi; after the reductions below |u| < 1.26.
constexpr std::array<double, 20> bernoulli_coefficients() {
  constexpr std::array<double, 20> b2k = {
      1.0 / 6.0,
      -1.0 / 30.0,
      1.0 / 42.0,
      -1.0 / 30.0,
      5.0 / 66.0,
      -691.0 / 2730.0,
      7.0 / 6.0,
      -3617.0 / 510.0,
      43867.0 / 798.0,
      -174611.0 / 330.0,
      854513.0 / 138.0,
      -236364091.0 / 2730.0,
      8553103.0 / 6.0,
      -23749461029.0 / 870.0,
      8615841276005.0 / 14322.0,
      -7709321041217.0 / 510.0,
      2577687858367.0 / 6.0,
      -26315271553053477373.0 / 1919190.0,
      2929993913841559.0 / 6.0,
      -261082718496449122051.0 / 13530.0,
  };
  std::array<double, 20> out{};
  double factorial = 1.0;  // (2k+1)!
  int m = 1;
  for (std::size_t k = 0; k < b2k.size(); ++k) {
    factorial *= static_cast<double>(m + 1) * static_cast<double>(m + 2);
    m += 2;
    out[k] = b2k[k] / factorial;
  }
  return out;
}

constexpr auto kBernoulli = bernoulli_coefficients();

template <typename T>
T bernoulli_series(T u) {
  const T u2 = u * u;
  T sum = kBernoulli.back();
  for (std::size_t k = kBernoulli.size() - 1; k-- > 0;) sum = sum * u2 + kBernoulli[k];
  return u - u2 / 4.0 + u * u2 * sum;
}

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// log Gamma(z) for Re(z) >= 1/2.
Complex log_gamma_lanczos(Complex z) {
  z -= 1.0;
  Complex series = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k)
    series += kLanczos[k] / (z + static_cast<double>(k));
  const Complex t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// Some branch of log(sin(pi z)), safe for large |Im z|.
Complex log_sin_pi(Complex z) {
  const double y = z.imag();
  if (std::abs(y) < 20.0) return std::log(std::sin(std::numbers::pi * z));
  const Complex i(0.0, 1.0);
  // sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) / (-2i) for Im z > 0, mirrored below.
  if (y > 0.0) {
    return -i * std::numbers::pi * z + std::log(1.0 - std::exp(2.0 * i * std::numbers::pi * z)) -
           std::log(Complex(0.0, -2.0));
  }
  return i * std::numbers::pi * z + std::log(1.0 - std::exp(-2.0 * i * std::numbers::pi * z)) -
         std::log(Complex(0.0, 2.0));
}

}  // namespace

double dilog(double x) {
  if (!(x <= 1.0)) {
    std::ostringstream msg;
    msg << "dilog: real argument " << x << " lies on the branch cut (x > 1)";
    throw DomainError(msg.str());
  }
  if (x == 1.0) return kPi2Over6;
  if (x == 0.0) return 0.0;
  if (x < -1.0) {
    const double l = std::log(-x);
    return -kPi2Over6 - 0.5 * l * l - dilog(1.0 / x);
  }
  if (x > 0.5) return kPi2Over6 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
  return bernoulli_series(-std::log1p(-x));
}

Complex dilog(Complex z) {
  if (z.imag() == 0.0) {
    if (z.real() >= 1.0) {
      std::ostringstream msg;
      msg << "dilog: argument " << z.real() << " lies on the branch cut [1, inf)";
      throw DomainError(msg.str());
    }
    return dilog(z.real());
  }
  if (std::norm(z) > 1.0) {
    const Complex l = std::log(-z);
    return -dilog(1.0 / z) - kPi2Over6 - 0.5 * l * l;
  }
  if (z.real() > 0.5) return -dilog(1.0 - z) + kPi2Over6 - std::log(z) * std::log(1.0 - z);
  return bernoulli_series(-std::log(1.0 - z));
}

Complex log_gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "log_gamma: pole at " << z.real();
    throw DomainError(msg.str());
  }
  if (z.real() >= 0.5) return log_gamma_lanczos(z);

  // Reflection; the 2 pi i correction keeps the result on the branch that is
  // continuous off the negative real axis (Hare, 1997).
  const double correction =
      std::copysign(2.0 * std::numbers::pi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
  Complex log_sin = log_sin_pi(z);
  // Reduce to the principal logarithm before applying the correction.
  log_sin.imag(std::remainder(log_sin.imag(), 2.0 * std::numbers::pi));
  if (log_sin.imag() <= -std::numbers::pi) log_sin.imag(log_sin.imag() + 2.0 * std::numbers::pi);
  return Complex(std::log(std::numbers::pi), correction) - log_sin - log_gamma_lanczos(1.0 - z);
}

}  // namespace ouvg
