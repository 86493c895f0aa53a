#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "ouvg/levy.hpp"
#include "ouvg/random.hpp"
#include "ouvg/types.hpp"

namespace ouvg {

/// dX(t) = -lambda X(t) dt + dZ(lambda t) with a VGC background driver Z.
class OUModel {
 public:
  OUModel(double lambda, VGCParams bdlp);
  /// The WVAG parameters are kept alongside their VGC representation.
  OUModel(double lambda, const WVAGParams& bdlp);

  double lambda() const { return lambda_; }
  const VGCParams& bdlp() const { return bdlp_; }
  const std::optional<WVAGParams>& wvag() const { return wvag_; }
  Index dim() const { return bdlp_.dim(); }

  /// Same lambda, different driver (used for measure changes).
  OUModel with_bdlp(VGCParams bdlp) const;

 private:
  double lambda_;
  VGCParams bdlp_;
  std::optional<WVAGParams> wvag_;
};

/// The AR(1) view at sampling interval dt: X(t_i) = e^{-lambda dt} X(t_{i-1}) + e^{-lambda dt} Z*(dt).
class InnovationSpec {
 public:
  InnovationSpec(OUModel model, double dt);

  const OUModel& model() const { return model_; }
  double dt() const { return dt_; }
  double decay() const { return std::exp(-model_.lambda() * dt_); }

 private:
  OUModel model_;
  double dt_;
};

/// cgf of V*(t) = int_0^{lambda t} e^u dV(u) for a driftless VG term, in closed form
/// through dilogarithms. Re(theta) must satisfy e^{lambda t} Re(theta) in D_V.
Complex vg_innovation_cgf(const VGParams& vg, double lambda, double t, const CVector& theta);

/// How |theta| enters the univariate formula. kSigned replaces |theta| with theta,
/// which gives the same value because A and -B swap.
namespace detail {
/// Dilogarithm kernel given mt = <mu, theta>, q = theta^T Sigma theta and c = e^{lambda t}.
/// No domain checks; callers validate Re(theta) once for a whole grid.
Complex vg_innovation_kernel(double b, double c, Complex mt, Complex q);
}  // namespace detail

enum class ThetaConvention { kModulus, kSigned };

Complex vg_innovation_cgf_1d(const VGParams& vg, double lambda, double t, Complex theta,
                             ThetaConvention convention = ThetaConvention::kModulus);

/// cgf of Z*(t) for the whole driver: (e^{lambda t} - 1)<eta, theta> plus the VG terms.
Complex innovation_cgf(const VGCParams& bdlp, double lambda, double t, const CVector& theta);
Complex innovation_cgf(const InnovationSpec& spec, const CVector& theta, double t);

/// int_0^{lambda t} kappa_Z(e^s theta) ds by adaptive Gauss-Kronrod. Reference only.
Complex innovation_cgf_by_quadrature(const VGCParams& bdlp, double lambda, double t,
                                     const CVector& theta, double tol = 1e-11);

/// Draws increments of Z over a fixed clock interval h. Holds distribution state,
/// so each thread needs its own copy.
class DriverSampler {
 public:
  DriverSampler(const VGCParams& bdlp, double h);

  /// Adds weight * (Z(s + h) - Z(s)) to out.
  void add_increment(Rng& rng, double weight, double* out);
  /// Clears cached distribution state so a fresh generator reproduces its draws.
  void reset();
  Index dim() const { return n_; }

 private:
  struct Term {
    std::gamma_distribution<double> clock;
    std::vector<double> mu;
    std::vector<double> root;  // n x n, row-major, root * root^T = Sigma
    bool gaussian;
  };
  Index n_;
  std::vector<double> drift_;
  std::vector<Term> terms_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<double> z_;
};

/// One approximate draw of Z*(t), discretizing [0, lambda t] into n_sub pieces
/// with left-endpoint weights e^{u_i}.
Vector simulate_innovation(const VGCParams& bdlp, double lambda, double t, int n_sub, Rng& rng);
Vector simulate_innovation(const InnovationSpec& spec, int n_sub, Rng& rng);

/// m + 1 states (rows) sampled every dt. The start value comes from running the
/// chain for burn_in_fraction * m steps beyond the stationary mean.
Matrix simulate_path(const InnovationSpec& spec, int m, int n_sub, double burn_in_fraction, Rng& rng);

/// Stationary covariance of X: lambda int_0^inf e^{-2 lambda s} Cov[Z(1)] ds = Cov[Z(1)] / 2.
Matrix stationary_covariance(const OUModel& model);

}  // namespace ouvg
