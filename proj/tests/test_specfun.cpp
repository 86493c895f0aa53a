#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ouvg/errors.hpp"
#include "ouvg/specfun.hpp"

using namespace ouvg;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// Stirling series at z + 20, walked back with the recurrence.
Complex log_gamma_oracle(Complex z) {
  Complex shift = 0.0;
  for (int k = 0; k < 20; ++k) shift += std::log(z + static_cast<double>(k));
  const Complex w = z + 20.0;
  const Complex w2 = w * w;
  Complex series = 1.0 / (12.0 * w) - 1.0 / (360.0 * w * w2) + 1.0 / (1260.0 * w * w2 * w2) -
                   1.0 / (1680.0 * w * w2 * w2 * w2) + 1.0 / (1188.0 * w * w2 * w2 * w2 * w2);
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

}  // namespace

TEST(Dilog, RealValues) {
  EXPECT_EQ(dilog(0.0), 0.0);
  EXPECT_NEAR(dilog(1.0), kPi2 / 6.0, 1e-13);
  // Alternating series sum_k (-1)^k / k^2, averaging the last two partial sums.
  double s = 0.0, prev = 0.0;
  for (long k = 1; k <= 2000000; ++k) {
    prev = s;
    s += (k % 2 == 0 ? 1.0 : -1.0) / (static_cast<double>(k) * static_cast<double>(k));
  }
  EXPECT_NEAR(dilog(-1.0), 0.5 * (s + prev), 1e-13);
  EXPECT_NEAR(dilog(-1.0), -kPi2 / 12.0, 1e-13);
}

TEST(Dilog, RealDomain) {
  EXPECT_THROW(dilog(1.0 + 1e-12), DomainError);
  EXPECT_THROW(dilog(3.0), DomainError);
  EXPECT_NO_THROW(dilog(-1e6));
}

TEST(Dilog, ComplexValues) {
  EXPECT_EQ(dilog(Complex(0.0, 0.0)), Complex(0.0, 0.0));
  const Complex half = dilog(Complex(0.5, 0.0));
  EXPECT_NEAR(half.real(), dilog(0.5), 1e-12);
  EXPECT_NEAR(half.imag(), 0.0, 1e-15);

  // sum_k i^k / k^2: even k give the real part, odd k the imaginary part.
  double re = 0.0, re_prev = 0.0, im = 0.0, im_prev = 0.0;
  for (long j = 1; j <= 1000000; ++j) {
    const double e = 2.0 * j, o = 2.0 * j - 1.0;
    re_prev = re;
    im_prev = im;
    re += (j % 2 == 0 ? 1.0 : -1.0) / (e * e);
    im += (j % 2 == 1 ? 1.0 : -1.0) / (o * o);
  }
  const Complex li_i = dilog(Complex(0.0, 1.0));
  EXPECT_NEAR(li_i.real(), 0.5 * (re + re_prev), 1e-12);
  EXPECT_NEAR(li_i.imag(), 0.5 * (im + im_prev), 1e-12);
}

TEST(Dilog, BranchCut) {
  EXPECT_THROW(dilog(Complex(1.0, 0.0)), DomainError);
  EXPECT_THROW(dilog(Complex(2.5, 0.0)), DomainError);
  EXPECT_NO_THROW(dilog(Complex(2.5, 1e-9)));
}

TEST(Dilog, RealAxisAgreement) {
  for (double x = -20.0; x < 1.0; x += 0.173) EXPECT_NEAR(dilog(Complex(x, 0.0)).real(), dilog(x), 1e-12) << x;
}

TEST(Dilog, DuplicationIdentity) {
  for (double x = -0.99; x < 1.0; x += 0.01)
    EXPECT_NEAR(dilog(x) + dilog(-x), 0.5 * dilog(x * x), 1e-12) << x;
}

TEST(Dilog, ReflectionIdentity) {
  for (double x = 0.005; x < 1.0; x += 0.01)
    EXPECT_NEAR(dilog(x) + dilog(1.0 - x), kPi2 / 6.0 - std::log(x) * std::log(1.0 - x), 1e-12) << x;
}

TEST(Dilog, ConjugationSymmetry) {
  for (double re = -4.0; re <= 4.0; re += 0.7)
    for (double im = -3.0; im <= 3.0; im += 0.9) {
      if (im == 0.0 && re >= 1.0) continue;
      const Complex z(re, im);
      const Complex a = dilog(std::conj(z)), b = std::conj(dilog(z));
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-13) << z;
    }
}

TEST(LogGamma, Values) {
  EXPECT_NEAR(std::abs(log_gamma(Complex(1.0, 0.0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(log_gamma(Complex(2.0, 0.0))), 0.0, 1e-14);
  const Complex h = log_gamma(Complex(0.5, 0.0));
  EXPECT_NEAR(h.real(), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_NEAR(h.imag(), 0.0, 1e-15);
  const Complex z(1.0, 1.0);
  EXPECT_NEAR(std::abs(log_gamma(z) - log_gamma_oracle(z)), 0.0, 1e-12);
}

TEST(LogGamma, AgainstOracleOnStrip) {
  for (double re = 0.25; re <= 6.0; re += 0.5)
    for (double im = -200.0; im <= 200.0; im += 13.7) {
      const Complex z(re, im);
      const Complex d = log_gamma(z) - log_gamma_oracle(z);
      // The imaginary part is only defined modulo 2 pi between branches.
      const double dim = std::remainder(d.imag(), 2.0 * std::numbers::pi);
      const double scale = std::max(1.0, std::abs(log_gamma_oracle(z)));
      EXPECT_LT(std::abs(Complex(d.real(), dim)) / scale, 1e-12) << z;
    }
}

TEST(LogGamma, RealAxisMatchesStd) {
  for (double x = 0.1; x < 30.0; x += 0.37) EXPECT_NEAR(log_gamma(Complex(x, 0.0)).real(), std::lgamma(x), 1e-12);
}

TEST(LogGamma, Poles) {
  EXPECT_THROW(log_gamma(Complex(0.0, 0.0)), DomainError);
  EXPECT_THROW(log_gamma(Complex(-3.0, 0.0)), DomainError);
  EXPECT_NO_THROW(log_gamma(Complex(-3.0, 1e-6)));
}

TEST(LogGamma, Recurrence) {
  for (double re = -7.3; re <= 7.0; re += 0.61)
    for (double im = -40.0; im <= 40.0; im += 3.3) {
      const Complex z(re, im);
      const Complex ratio = std::exp(log_gamma(z + 1.0) - log_gamma(z));
      EXPECT_LT(std::abs(ratio - z) / std::abs(z), 1e-10) << z;
    }
}

TEST(LogGamma, ConjugationSymmetry) {
  for (double re = -5.5; re <= 5.0; re += 0.9)
    for (double im = 0.3; im <= 50.0; im += 4.1) {
      const Complex z(re, im);
      EXPECT_LT(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))), 1e-12) << z;
    }
}
