#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ouvg/errors.hpp"
#include "ouvg/pricing.hpp"
#include "test_util.hpp"

using namespace ouvg;
using namespace ouvg::testing;

namespace {

const MarketModel& model() {
  static const MarketModel m = reference::model();
  return m;
}
const MarketState& state() {
  static const MarketState s = reference::state();
  return s;
}
constexpr double kT = reference::kTo;

std::vector<double> small_panel(const MarketModel& m, const MarketState& s, const FFTGridSpec& g,
                                const Vector& eps = default_spread_dampening()) {
  return spread_price_fft(m, s, 0, 1, reference::spread_strikes(), kT, eps, g);
}

}  // namespace

TEST(LogReturnCgf, Trivial) {
  const CVector th = cv({{0.4, 2.0}, {-0.3, -1.0}});
  EXPECT_NEAR(std::abs(log_return_cgf(model(), state(), state().t(), th)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(log_return_cgf(model(), state(), kT, CVector::Zero(2))), 0.0, 1e-15);
  EXPECT_THROW(log_return_cgf(model(), state(), state().t() - 0.1, th), ValidationError);
}

TEST(LogReturnCgf, MarginalIsRestriction) {
  for (Index k = 0; k < 2; ++k)
    for (Complex z : {Complex(1.0, 0.0), Complex(2.5, 7.0), Complex(-1.2, -3.0)}) {
      CVector th = CVector::Zero(2);
      th(k) = z;
      EXPECT_EQ(marginal_log_return_cgf(model(), state(), k, kT, z), log_return_cgf(model(), state(), kT, th));
    }
}

TEST(LogReturnCgf, DomainError) {
  EXPECT_THROW(log_return_cgf(model(), state(), kT, cv({1e3, 0.0})), DomainError);
}

TEST(Forward, ZeroHorizonIsSpot) {
  for (Index k = 0; k < 2; ++k) EXPECT_NEAR(forward_price(model(), state(), k, state().t()), state().spot()(k), 1e-12);
}

TEST(Forward, ZeroMprMatchesRealWorldRoute) {
  const MarketModel m0 = model().with_h(Vector::Zero(2));
  const double tau = 0.7, T = state().t() + tau;
  const double decay = std::exp(-m0.ou().lambda() * tau);
  for (Index k = 0; k < 2; ++k) {
    CVector th = CVector::Zero(2);
    th(k) = decay;
    const double shift = m0.seasonality().value(k, T) + state().x(m0.seasonality())(k) * decay - state().log_spot()(k);
    const double direct = state().spot()(k) *
                          std::exp(shift + innovation_cgf(m0.ou().bdlp(), m0.ou().lambda(), tau, th).real());
    EXPECT_NEAR(forward_price(m0, state(), k, T), direct, 1e-10 * direct);
  }
}

TEST(Forward, CurveRisesOverTheLongRun) {
  for (Index k = 0; k < 2; ++k) {
    const double f0 = forward_price(model(), state(), k, state().t() + 0.125);
    const double f1 = forward_price(model(), state(), k, state().t() + 2.5);
    EXPECT_GT(f1, f0);
  }
}

TEST(MaxDampening, Values) {
  const WVAGParams w(1.0, Vector{{2.0 / 9.0, 0.5}}, Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2));
  EXPECT_NEAR(max_dampening(w, 0), 2.0, 1e-14);
  EXPECT_GT(max_dampening(model(), 0), 2.5);
  EXPECT_GT(max_dampening(model(), 1), 2.5);
  double prev = 0.0;
  for (double s : {1.0, 0.1, 1e-2, 1e-4, 1e-8}) {
    const WVAGParams ws(1.0, Vector{{0.3, 0.5}}, Vector{{0.1, 0.0}}, Matrix{{s, 0.0}, {0.0, 1.0}}, Vector::Zero(2));
    const double d = max_dampening(ws, 0);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(Call, SmallStrikeApproachesDiscountedForward) {
  const double tau = 0.5, T = state().t() + tau;
  const double disc = std::exp(-model().r() * tau);
  const double fwd = forward_price(model(), state(), 0, T) * disc;
  // Deep in the money the call is the forward less the discounted strike. A small
  // dampening keeps K^{-eps} from swamping the integral at tiny strikes.
  for (double K : {1.0, 0.1, 0.01}) EXPECT_NEAR(call_price(model(), state(), 0, K, T, 1.0), fwd - disc * K, 1e-6);
}

TEST(Call, DampeningInvariance) {
  for (double K : {60.0, 100.0, 140.0}) {
    const double a = call_price(model(), state(), 0, K, kT, 2.5), b = call_price(model(), state(), 0, K, kT, 1.5);
    EXPECT_NEAR(a, b, 1e-6) << K;
  }
}

TEST(Call, NoArbitrageBounds) {
  for (Index k = 0; k < 2; ++k) {
    const double disc = std::exp(-model().r() * 0.5);
    const double F = forward_price(model(), state(), k, kT);
    for (double K = 25.0; K <= 175.0; K += 15.0) {
      const double c = call_price(model(), state(), k, K, kT);
      EXPECT_GE(c, std::max(0.0, disc * (F - K)) - 1e-9);
      EXPECT_LE(c, disc * F + 1e-9);
    }
  }
}

TEST(Call, DampeningOutsideDomain) {
  EXPECT_THROW(call_price(model(), state(), 0, 100.0, kT, 50.0), DampeningError);
  EXPECT_THROW(call_price(model(), state(), 0, 100.0, kT, 0.0), DampeningError);
}

TEST(Phat, ConjugationSymmetry) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  const Vector eps = default_spread_dampening();
  for (int i = 0; i < 10; ++i) {
    const Complex t1(u(rng), eps(0)), t2(u(rng), eps(1));
    const Complex a = phat(-std::conj(t1), -std::conj(t2)), b = std::conj(phat(t1, t2));
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(b));
  }
}

TEST(Phat, DecaysAlongRays) {
  const Vector eps = default_spread_dampening();
  double prev = std::numeric_limits<double>::infinity();
  for (double r = 5.0; r <= 200.0; r *= 1.5) {
    const double m = std::abs(phat(Complex(r, eps(0)), Complex(0.6 * r, eps(1))));
    EXPECT_LT(m, prev);
    EXPECT_TRUE(std::isfinite(m));
    prev = m;
  }
}

TEST(Spread, DampeningStrip) {
  const FFTGridSpec g(256, 40.0);
  EXPECT_THROW(small_panel(model(), state(), g, Vector{{-0.5, 0.2}}), DampeningError);
  EXPECT_THROW(small_panel(model(), state(), g, Vector{{-3.0, -0.5}}), DampeningError);
  EXPECT_THROW(small_panel(model(), state(), g, Vector{{-30.0, 1.0}}), DomainError);
}

TEST(Spread, AdmissibleDampening) {
  EXPECT_EQ(admissible_spread_dampening(model(), 0, 1, default_spread_dampening()), default_spread_dampening());
  // the first-leg domain ends below 3.5, so -eps = (3.5, -1) is out
  const WVAGParams w(0.5, Vector{{1.6, 0.5}}, Vector::Zero(2), Matrix{{0.2, 0.06}, {0.06, 0.2}}, Vector::Zero(2));
  ASSERT_LT(max_dampening(w, 0), 3.5);
  const MarketModel narrow(model().seasonality(), OUModel(model().ou().lambda(), w), model().r(), Vector::Zero(2));
  const FFTGridSpec g(512, 40.0);
  EXPECT_THROW(small_panel(narrow, state(), g), DomainError);
  const Vector eps = admissible_spread_dampening(narrow, 0, 1, default_spread_dampening());
  EXPECT_LT(eps(0) + eps(1), -1.0);
  EXPECT_GT(eps(1), 0.0);
  // the selected point is as accurate as a hand-picked interior one
  const auto a = small_panel(narrow, state(), g, eps);
  const auto b = small_panel(narrow, state(), g, Vector{{-2.0, 0.5}});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-5 * b[i]) << i;
  EXPECT_THROW(admissible_spread_dampening(narrow, 0, 0, default_spread_dampening()), ValidationError);
  EXPECT_THROW(admissible_spread_dampening(narrow, 0, 1, Vector{{-0.5, 0.2}}), DampeningError);
}

TEST(Spread, MonotoneConvexAndBounded) {
  const auto p = small_panel(model(), state(), FFTGridSpec(512, 40.0));
  const double bound = forward_price(model(), state(), 0, kT) * std::exp(-model().r() * 0.5);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GT(p[i], 0.0);
    EXPECT_LT(p[i], bound);
    if (i > 0) EXPECT_LT(p[i], p[i - 1]);
    if (i > 1) EXPECT_GT(p[i] - 2.0 * p[i - 1] + p[i - 2], 0.0);  // equal spacing
  }
}

TEST(Spread, StrikeScaling) {
  // Scaling spot and strike by 1/c (with the seasonality shifted by -log c so X(t) is
  // unchanged) scales the price by 1/c. The anchor strike stays at 3.6, so the grids
  // differ and agreement is at the discretization level.
  const FFTGridSpec g(256, 40.0);
  const auto base = small_panel(model(), state(), g);
  for (double c : {0.5, 2.0}) {
    const MarketState scaled(state().t(), state().spot() / c);
    std::vector<double> ks = reference::spread_strikes();
    for (double& k : ks) k /= c;
    Matrix coeffs = model().seasonality().coeffs();
    coeffs.col(0).array() -= std::log(c);
    const MarketModel shifted(Seasonality(coeffs, model().seasonality().period()), model().ou(), model().r(),
                              model().h());
    const auto q = spread_price_fft(shifted, scaled, 0, 1, ks, kT, default_spread_dampening(), g);
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(c * q[i], base[i], 3e-4);
  }
}

TEST(Spread, SurfaceIsRealAndInterpolatesNodes) {
  const FFTGridSpec g(256, 40.0);
  const SpreadSurface s = spread_price_unit(model(), state(), 0, 1, kT, default_spread_dampening(), g);
  EXPECT_LT(s.max_imag, 1e-8);
  const Index n = s.x1.size();
  for (Index i : {n / 2 - 3, n / 2, n / 2 + 5})
    for (Index j : {n / 2 - 4, n / 2 + 1})
      EXPECT_NEAR(s.interpolate(s.x1(i), s.x2(j)), s.values(i, j), 1e-12);
  EXPECT_THROW(s.interpolate(s.x1(0) - 1.0, 0.0), DomainError);
}

TEST(Spread, GridRefinement) {
  const auto a = small_panel(model(), state(), FFTGridSpec(256, 40.0));
  const auto b = small_panel(model(), state(), FFTGridSpec(1024, 40.0));
  double avg = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) avg += std::abs(a[i] - b[i]) / a.size();
  EXPECT_LT(avg, 1e-4);
}

TEST(Sensitivity, ConditionalCovarianceClosedForm) {
  const MarketModel m0 = model().with_h(Vector::Zero(2));
  const WVAGParams& w = *m0.ou().wvag();
  for (double tau : {0.1, 0.5, 2.0}) {
    const double cf = wvag_conditional_covariance(w, m0.ou().lambda(), tau, 0, 1);
    EXPECT_NEAR(conditional_covariance(m0, tau)(0, 1), cf, 1e-14);
  }
  EXPECT_THROW(wvag_conditional_covariance(w, 1.0, 1.0, 1, 1), ValidationError);
}

TEST(Sensitivity, RiskNeutralDriftIsCgfDerivative) {
  const Vector d = risk_neutral_drift(model(), state(), kT);
  const double h = 1e-5;
  for (Index k = 0; k < 2; ++k) {
    const double fd = (marginal_log_return_cgf(model(), state(), k, kT, h).real() -
                       marginal_log_return_cgf(model(), state(), k, kT, -h).real()) /
                      (2.0 * h);
    EXPECT_NEAR(d(k), fd, 1e-6);
  }
  EXPECT_NEAR(d(0), -0.0280674, 1e-6);
  EXPECT_NEAR(d(1), 0.1155876, 1e-6);
}

TEST(GridSpec, Validation) {
  EXPECT_THROW(FFTGridSpec(100, 40.0).validate(), ValidationError);
  EXPECT_THROW(FFTGridSpec(2, 40.0).validate(), ValidationError);
  EXPECT_THROW(FFTGridSpec(256, -1.0).validate(), ValidationError);
  const FFTGridSpec g(256, 40.0);
  EXPECT_DOUBLE_EQ(g.delta_theta(0), 80.0 / 256.0);
  EXPECT_DOUBLE_EQ(g.delta_x(0), 2.0 * kPi / 80.0);
}
