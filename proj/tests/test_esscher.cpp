#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ouvg/errors.hpp"
#include "ouvg/esscher.hpp"
#include "ouvg/market.hpp"
#include "test_util.hpp"

using namespace ouvg;
using namespace ouvg::testing;

namespace {

// Example with a = 0.5, alpha = (1, 1), mu = eta = 0, Sigma = I.
WVAGParams nonclosure_example() {
  return WVAGParams(0.5, Vector{{1.0, 1.0}}, Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2));
}

// Cumulants of Z_1 under Q_h, added over the terms that load on component 0.
std::array<double, 4> first_component_cumulants(const VGCParams& q) {
  std::array<double, 4> k{0.0, 0.0, 0.0, 0.0};
  const std::array<Index, 1> first{0};
  for (const auto& t : q.terms()) {
    const VGParams m = t.marginal(first);
    if (m.mu()(0) == 0.0 && m.sigma()(0, 0) == 0.0) continue;
    const auto c = vg_cumulants_1d(m);
    for (int i = 0; i < 4; ++i) k[i] += c[i];
  }
  k[0] += q.eta()(0);
  return k;
}

}  // namespace

TEST(VgEsscher, ZeroIsIdentity) {
  const VGParams p(1.3, Vector{{0.2, -0.1}}, Matrix{{0.5, 0.1}, {0.1, 0.4}});
  EXPECT_EQ(vg_esscher(p, Vector::Zero(2)), p);
}

TEST(VgEsscher, IsotropicArithmetic) {
  const double b = 2.0;
  const VGParams p(b, Vector::Zero(2), Matrix::Identity(2, 2));
  const Vector h{{0.6, 0.8}};
  const double K = 1.0 - h.squaredNorm() / (2.0 * b);
  const VGParams q = vg_esscher(p, h);
  EXPECT_EQ(q.b(), b);
  EXPECT_TRUE(q.sigma().isApprox(Matrix::Identity(2, 2) / K, 1e-15));
  EXPECT_TRUE(q.mu().isApprox(h / K, 1e-15));
}

TEST(VgEsscher, MeasureMustExist) {
  const VGParams p(0.5, Vector::Zero(2), Matrix::Identity(2, 2));
  EXPECT_THROW(vg_esscher(p, Vector{{1.0, 0.5}}), MeasureError);
  EXPECT_THROW(vg_esscher(p, Vector{{1.0, 0.0}}), MeasureError);  // K_h = 0 exactly
}

TEST(VgcEsscher, Basics) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  const EsscherMeasure id = vgc_esscher(c, Vector::Zero(2));
  EXPECT_EQ(id.bdlp_q(), c);
  const EsscherMeasure q = vgc_esscher(c, reference::h());
  EXPECT_EQ(q.bdlp_q().eta(), c.eta());
  EXPECT_EQ(q.bdlp_q().size(), c.size());
  EXPECT_EQ(q.h(), reference::h());
}

TEST(VgcEsscher, MeanByImportanceSampling) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  const Vector h = reference::h();
  const Vector target = vgc_esscher(c, h).bdlp_q().mean();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  const int n = 400000;
  Vector sw = Vector::Zero(2);
  double w_sum = 0.0;
  std::vector<Vector> zs;
  std::vector<double> ws;
  zs.reserve(n);
  ws.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector z = c.eta();
    for (const auto& t : c.terms()) {
      std::gamma_distribution<double> g(t.b(), 1.0 / t.b());
      const double gi = g(rng);
      Eigen::SelfAdjointEigenSolver<Matrix> es(t.sigma());
      const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
      z += t.mu() * gi + std::sqrt(gi) * root * Vector{{n01(rng), n01(rng)}};
    }
    const double w = std::exp(h.dot(z));
    sw += w * z;
    w_sum += w;
    zs.push_back(z);
    ws.push_back(w);
  }
  const Vector est = sw / w_sum;
  // Delta-method standard error of the self-normalized estimator.
  Vector var = Vector::Zero(2);
  for (int i = 0; i < n; ++i) var += ((ws[i] / w_sum) * (zs[i] - est)).array().square().matrix();
  for (Index k = 0; k < 2; ++k) EXPECT_NEAR(est(k), target(k), 4.0 * std::sqrt(var(k))) << k;
}

TEST(WvagEsscher, ZeroMatchesConversion) {
  const WVAGParams w = reference::wvag();
  EXPECT_EQ(wvag_esscher(w, Vector::Zero(2)).bdlp_q(), wvag_to_vgc(w));
}

TEST(WvagEsscher, CompositionIsExact) {
  const WVAGParams w = reference::wvag();
  const Vector h{{0.4, -0.7}};
  EXPECT_EQ(wvag_esscher(w, h).bdlp_q(), vgc_esscher(wvag_to_vgc(w), h).bdlp_q());
}

TEST(WvagEsscher, NonClosureKurtosis) {
  const EsscherMeasure q = wvag_esscher(nonclosure_example(), Vector{{1.0, 0.5}});
  const auto k = first_component_cumulants(q.bdlp_q());
  // Hand computation: V0 -> VG(1/2, 4/3, 4/3), V1 -> VG(1/2, 1, 1), so
  // kappa_2 = 71/9, kappa_4 = 30630/81 and Kurt = 3 + kappa_4 / kappa_2^2 = 45753/5041.
  EXPECT_NEAR(k[1], 71.0 / 9.0, 1e-13);
  EXPECT_NEAR(k[3], 30630.0 / 81.0, 1e-11);
  EXPECT_NEAR(moments_from_cumulants(k).kurtosis, 45753.0 / 5041.0, 1e-13);
}

TEST(WvagEsscher, NonClosureMomentMatchedFits) {
  const EsscherMeasure q = wvag_esscher(nonclosure_example(), Vector{{1.0, 0.5}});
  const auto k = first_component_cumulants(q.bdlp_q());
  const auto nus = vg_match_nu_roots(k[0], k[1], k[2]);
  ASSERT_EQ(nus.size(), 2u);
  EXPECT_NEAR(nus[0], 1.03788, 1e-5);
  EXPECT_NEAR(nus[1], 3.30906, 1e-5);
  // mean 7/3, var 71/9: the larger root needs Sigma = 71/9 - 49/9 nu < 0, so only one VG exists.
  const auto fits = vg_match_three_moments(k[0], k[1], k[2]);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_NEAR(1.0 / fits[0].b(), nus[0], 1e-14);
  const double kurt = moments_from_cumulants(k).kurtosis;
  EXPECT_GT(std::abs(vg_moments_1d(fits[0]).kurtosis - kurt), 0.05);
}

TEST(DomainContains, Values) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  EXPECT_TRUE(domain_contains(c, Vector::Zero(2)));
  EXPECT_TRUE(domain_contains(c, Vector{{3.5, 0.0}}));
  EXPECT_TRUE(domain_contains(c, Vector{{0.0, 3.5}}));
  EXPECT_TRUE(domain_contains(c, reference::h()));
}

TEST(DomainContains, BisectionFindsRadius) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 20; ++i) {
    const Vector dir = Vector{{n01(rng), n01(rng)}}.normalized();
    double lo = 0.0, hi = 1.0;
    while (domain_contains(c, hi * dir)) hi *= 2.0;
    for (int it = 0; it < 80; ++it) (domain_contains(c, 0.5 * (lo + hi) * dir) ? lo : hi) = 0.5 * (lo + hi);
    EXPECT_NEAR(domain_radius(c, dir), lo, 1e-10 * lo);
    EXPECT_FALSE(domain_contains(c, 1.0001 * lo * dir));
  }
}

TEST(EsscherProperties, MeasureChangeIdentity) {
  const VGCParams c = wvag_to_vgc(reference::wvag());
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Vector h = random_in_domain(c, rng, 0.5);
    const EsscherMeasure q = vgc_esscher(c, h);
    // theta + h has to stay in D_Z.
    const Vector th = random_in_domain(q.bdlp_q(), rng, 0.5);
    if (!domain_contains(c, th + h)) continue;
    const Complex lhs = vgc_cgf(q.bdlp_q(), th.cast<Complex>());
    const Complex rhs = vgc_cgf(c, (th + h).cast<Complex>()) - vgc_cgf(c, h.cast<Complex>());
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(EsscherProperties, SecondComponentMovesFirstMarginal) {
  const WVAGParams w = reference::wvag();
  auto var1 = [&](double h2) { return wvag_esscher(w, Vector{{-0.1, h2}}).bdlp_q().covariance()(0, 0); };
  EXPECT_GT(std::abs(var1(-0.03) - var1(0.5)), 1e-4);
}
