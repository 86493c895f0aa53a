#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ouvg/errors.hpp"
#include "ouvg/ldoup.hpp"
#include "ouvg/market.hpp"
#include "ouvg/random.hpp"
#include "test_util.hpp"

using namespace ouvg;
using namespace ouvg::testing;

namespace {

constexpr double kLam = reference::kLambda;
constexpr double kDt = reference::kDt;

VGParams reference_v0() { return wvag_to_vgc(reference::wvag()).terms()[0]; }

// Random complex theta whose real part lies in e^{-lambda t} D.
CVector random_theta(const VGCParams& p, double lambda, double t, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  const Vector re = std::exp(-lambda * t) * random_in_domain(p, rng, 0.95);
  CVector th(p.dim());
  for (Index i = 0; i < p.dim(); ++i) th(i) = Complex(re(i), 4.0 * n01(rng));
  return th;
}

}  // namespace

TEST(VgInnovationCgf, Trivial) {
  const VGParams v0 = reference_v0();
  EXPECT_EQ(vg_innovation_cgf(v0, kLam, 0.0, cv({0.3, -0.2})), Complex(0.0, 0.0));
  EXPECT_EQ(vg_innovation_cgf(v0, kLam, kDt, CVector::Zero(2)), Complex(0.0, 0.0));
}

TEST(VgInnovationCgf, MatchesQuadrature) {
  const VGParams v0 = reference_v0();
  const VGCParams c({v0});
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const CVector th = random_theta(c, kLam, kDt, rng);
    const Complex a = vg_innovation_cgf(v0, kLam, kDt, th);
    const Complex q = innovation_cgf_by_quadrature(c, kLam, kDt, th);
    EXPECT_LT(std::abs(a - q), 1e-9) << th.transpose();
  }
}

TEST(VgInnovationCgf, DomainError) {
  const VGParams v = vg1(1.0, 0.0, 1.0);
  // D_V = (-sqrt 2, sqrt 2); e^{lambda t} theta must stay inside.
  EXPECT_THROW(vg_innovation_cgf(v, 1.0, 1.0, cv({1.0})), DomainError);
  EXPECT_NO_THROW(vg_innovation_cgf(v, 1.0, 1.0, cv({0.5})));
}

TEST(VgInnovationCgf1d, Basics) {
  const VGParams sym = vg1(2.0, 0.0, 0.7);
  EXPECT_EQ(vg_innovation_cgf_1d(sym, 1.3, 0.4, 0.0), Complex(0.0, 0.0));
  for (double th : {0.1, 0.5, 0.9}) {
    const Complex a = vg_innovation_cgf_1d(sym, 1.3, 0.4, th), b = vg_innovation_cgf_1d(sym, 1.3, 0.4, -th);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14);
  }
}

TEST(VgInnovationCgf1d, SignedConventionAgrees) {
  const VGParams v = vg1(1.5, -0.3, 0.4);
  for (double th : {-1.1, -0.4, -0.05, 0.05, 0.4, 0.9}) {
    const Complex a = vg_innovation_cgf_1d(v, 2.0, 0.3, th, ThetaConvention::kModulus);
    const Complex b = vg_innovation_cgf_1d(v, 2.0, 0.3, th, ThetaConvention::kSigned);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12) << th;
  }
}

TEST(VgInnovationCgf1d, EqualsMultivariate) {
  const VGParams v = vg1(0.8, 0.25, 0.6);
  for (double th : {-0.7, -0.2, 0.3, 0.6}) {
    const Complex a = vg_innovation_cgf_1d(v, 5.0, 0.1, th);
    const Complex b = vg_innovation_cgf(v, 5.0, 0.1, cv({th}));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14 * std::max(1.0, std::abs(a)));
  }
}

TEST(InnovationCgf, SingleTermWithoutDrift) {
  const VGParams v0 = reference_v0();
  const CVector th = cv({{0.2, 1.0}, {-0.1, 2.0}});
  EXPECT_EQ(innovation_cgf(VGCParams({v0}), kLam, kDt, th), vg_innovation_cgf(v0, kLam, kDt, th));
}

TEST(InnovationCgf, ImaginaryAxisMatchesQuadrature) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 40; ++i) {
    const CVector th = Complex(0.0, 1.0) * Vector{{10.0 * n01(rng), 10.0 * n01(rng)}}.cast<Complex>();
    const Complex a = innovation_cgf(c, kLam, kDt, th), q = innovation_cgf_by_quadrature(c, kLam, kDt, th);
    EXPECT_LT(std::abs(a - q), 1e-9);
  }
}

TEST(InnovationCgf, LawScaling) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const CVector th = random_theta(c, kLam, kDt, rng);
    for (double s : {0.25, 3.0}) {
      const Complex a = innovation_cgf(c, kLam, kDt, th), b = innovation_cgf(c, s * kLam, kDt / s, th);
      EXPECT_LT(std::abs(a - b), 1e-13 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(InnovationCgf, SpecOverloadUsesItsOwnHorizon) {
  const OUModel ou = reference::model().ou();
  const InnovationSpec spec(ou, kDt);
  const CVector th = cv({0.3, 0.1});
  EXPECT_EQ(innovation_cgf(spec, th, 2.0 * kDt), innovation_cgf(ou.bdlp(), ou.lambda(), 2.0 * kDt, th));
}

TEST(SimulateInnovation, MeanMatchesCgfDerivative) {
  const VGParams v = vg1(3.0, 0.4, 0.3);
  const VGCParams c({v}, Vector::Constant(1, 0.2));
  const double lambda = 2.0, t = 0.5, h = 1e-5;
  const double mean = (innovation_cgf(c, lambda, t, cv({h})).real() - innovation_cgf(c, lambda, t, cv({-h})).real()) /
                      (2.0 * h);
  Rng rng = make_stream(1, 0);
  const int n = 40000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = simulate_innovation(c, lambda, t, 500, rng)(0);
    s += z;
    s2 += z * z;
  }
  const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
  EXPECT_NEAR(m, mean, 4.0 * se);
}

TEST(SimulateInnovation, DriftOnlyIsDeterministic) {
  const VGCParams c({VGParams(1.0, Vector::Zero(2), Matrix::Zero(2, 2))}, Vector{{0.3, -0.1}});
  Rng rng = make_stream(2, 0);
  const Vector z = simulate_innovation(c, kLam, kDt, 37, rng);
  const Vector expect = std::expm1(kLam * kDt) * c.eta();
  EXPECT_NEAR((z - expect).norm(), 0.0, 1e-15);
}

TEST(SimulateInnovation, VarianceConvergesFromBelow) {
  const VGCParams c({vg1(50.0, 0.0, 1.0)});
  const double lambda = 1.0, t = 1.0, h = 1e-3;
  auto f = [&](double x) { return innovation_cgf(c, lambda, t, cv({x})).real(); };
  const double analytic = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
  double prev = 0.0;
  for (int n_sub : {1, 2, 8, 64}) {
    Rng rng = make_stream(3, static_cast<std::uint64_t>(n_sub));
    const int n = 40000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = simulate_innovation(c, lambda, t, n_sub, rng)(0);
      s += z;
      s2 += z * z;
    }
    const double var = s2 / n - (s / n) * (s / n);
    EXPECT_GT(var, prev) << n_sub;
    EXPECT_LT(var, analytic * 1.03) << n_sub;
    prev = var;
  }
  EXPECT_NEAR(prev / analytic, 1.0, 0.03);
}

TEST(SimulateInnovation, EmpiricalCharacteristicFunction) {
  const OUModel ou = reference::model().ou();
  Rng rng = make_stream(4, 0);
  const int n = 50000;
  std::vector<Vector> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i) draws.push_back(simulate_innovation(ou.bdlp(), ou.lambda(), kDt, 50, rng));
  std::mt19937_64 pick(6);
  std::normal_distribution<double> n01;
  for (int j = 0; j < 20; ++j) {
    const Vector u{{3.0 * n01(pick), 3.0 * n01(pick)}};
    Complex acc = 0.0;
    for (const auto& z : draws) acc += std::exp(Complex(0.0, u.dot(z)));
    acc /= static_cast<double>(n);
    const Complex phi = std::exp(innovation_cgf(ou.bdlp(), ou.lambda(), kDt, Complex(0.0, 1.0) * u.cast<Complex>()));
    EXPECT_LT(std::abs(acc - phi), 4.0 / std::sqrt(static_cast<double>(n))) << u.transpose();
  }
}

TEST(SimulatePath, FastReversionIsUncorrelated) {
  const OUModel ou(1e4, VGCParams({vg1(2.0, 0.1, 0.5)}, Vector::Constant(1, -0.1)));
  Rng rng = make_stream(5, 0);
  const Matrix x = simulate_path(InnovationSpec(ou, kDt), 10000, 4, 0.2, rng);
  ASSERT_EQ(x.rows(), 10001);
  const Vector c = x.col(0).array() - x.col(0).mean();
  const double rho = c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.squaredNorm();
  EXPECT_NEAR(rho, 0.0, 0.05);
}

TEST(SimulatePath, DeterministicDriverSitsAtFixedPoint) {
  const OUModel ou(kLam, VGCParams({VGParams(1.0, Vector::Zero(2), Matrix::Zero(2, 2))}, Vector{{0.3, -0.2}}));
  Rng rng = make_stream(6, 0);
  const Matrix x = simulate_path(InnovationSpec(ou, kDt), 50, 10, 0.2, rng);
  for (Index i = 0; i < x.rows(); ++i) EXPECT_NEAR((x.row(i).transpose() - ou.bdlp().eta()).norm(), 0.0, 1e-13);
}

TEST(SimulatePath, StationaryVariance) {
  // One 2000-step path has about 13% sampling error on its variance, so pool eight.
  const OUModel ou = reference::model().ou();
  const Matrix s = stationary_covariance(ou);
  Vector ratio = Vector::Zero(2);
  const int paths = 8;
  for (int r = 0; r < paths; ++r) {
    Rng rng = make_stream(7, static_cast<std::uint64_t>(r));
    const Matrix x = simulate_path(InnovationSpec(ou, kDt), 2000, 100, 0.2, rng);
    for (Index k = 0; k < 2; ++k) {
      const Vector c = x.col(k).array() - x.col(k).mean();
      ratio(k) += c.squaredNorm() / static_cast<double>(c.size() - 1) / s(k, k) / paths;
    }
  }
  EXPECT_NEAR(ratio(0), 1.0, 0.15);
  EXPECT_NEAR(ratio(1), 1.0, 0.15);
}

TEST(SimulatePath, Reproducible) {
  const InnovationSpec spec(reference::model().ou(), kDt);
  Rng a = make_stream(9, 3), b = make_stream(9, 3), c = make_stream(9, 4);
  const Matrix xa = simulate_path(spec, 30, 20, 0.2, a), xb = simulate_path(spec, 30, 20, 0.2, b);
  const Matrix xc = simulate_path(spec, 30, 20, 0.2, c);
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
}

TEST(OUModel, Validation) {
  EXPECT_THROW(OUModel(0.0, reference::wvag()), ValidationError);
  EXPECT_THROW(InnovationSpec(reference::model().ou(), 0.0), ValidationError);
  EXPECT_TRUE(reference::model().ou().wvag().has_value());
}
