#pragma once

#include <optional>
#include <vector>

#include "ouvg/market.hpp"
#include "ouvg/optimize.hpp"
#include "ouvg/pricing.hpp"
#include "ouvg/types.hpp"

namespace ouvg {

/// Log prices Y(t_i) (rows) observed at t_i = t0 + i dt.
class ObservedPanel {
 public:
  ObservedPanel(double t0, double dt, Matrix log_prices);
  /// Validates that times are equally spaced before storing them.
  ObservedPanel(const Vector& times, Matrix log_prices);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  const Matrix& log_prices() const { return y_; }
  Index size() const { return y_.rows(); }
  Index dim() const { return y_.cols(); }
  double time(Index i) const { return t0_ + static_cast<double>(i) * dt_; }
  Vector times() const;

 private:
  double t0_;
  double dt_;
  Matrix y_;
};

struct SeasonalityFit {
  Seasonality seasonality;
  Matrix residuals;  ///< filtered OU observations x_i
};

/// Per-component least squares on (1, t, cos(2 pi t/p), sin(2 pi t/p)).
SeasonalityFit fit_seasonality(const ObservedPanel& panel, double period);

/// FFT grid for the innovation density: N points and half-widths per axis.
/// A non-positive half-width means 30 standard deviations of Z*_k(dt).
struct PdfGridSpec {
  int n = 4096;
  Vector half_width;

  static PdfGridSpec one_d() { return {4096, Vector()}; }
  static PdfGridSpec two_d() { return {256, Vector()}; }
};

struct PdfGrid1D {
  Vector x;
  Vector pdf;
  double dx = 0.0;
  double min_positive = 0.0;

  /// Linear interpolation; nullopt outside the grid.
  std::optional<double> value(double y) const;
  double mass() const { return pdf.sum() * dx; }
};

struct PdfGrid2D {
  Vector x1;
  Vector x2;
  Matrix pdf;
  double dx1 = 0.0;
  double dx2 = 0.0;
  double min_positive = 0.0;

  /// Bilinear interpolation; nullopt outside the grid.
  std::optional<double> value(double y1, double y2) const;
  double mass() const { return pdf.sum() * dx1 * dx2; }
};

/// Density of Z*(dt) by discrete Fourier inversion of exp(kappa(i u)); negative
/// ripples are clipped to zero.
PdfGrid1D innovation_pdf_grid_1d(const VGCParams& bdlp, double lambda, double dt, int n, double half_width = 0.0);
PdfGrid2D innovation_pdf_grid_2d(const VGCParams& bdlp, double lambda, double dt, int n,
                                 const Vector& half_width = Vector());

/// Standard deviations of the components of Z*(dt) from the cumulant relation
/// kappa_2(Z*(dt)) = kappa_2(Z(1)) (e^{2 lambda dt} - 1) / 2.
Vector innovation_std(const VGCParams& bdlp, double lambda, double dt);

struct LikelihoodValue {
  double value = 0.0;
  long floored = 0;  ///< observations that fell outside the grid or on a zero density
};

/// log L = m n lambda dt + sum_i log f(e^{lambda dt} x_i - x_{i-1}); rows of x are the
/// filtered observations. Uses the 1-d grid for one column and the 2-d grid for two.
LikelihoodValue log_likelihood_detail(const OUModel& model, const Matrix& x, double dt, const PdfGridSpec& grid);
double log_likelihood(const OUModel& model, const Matrix& x, double dt, const PdfGridSpec& grid);

struct EstimationOptions {
  int n_1d = 4096;
  int n_2d = 256;
  SimplexOptions marginal{1e-5, 800};
  SimplexOptions joint{1e-5, 400};
};

struct EstimationResult {
  Seasonality seasonality;
  double lambda = 0.0;
  WVAGParams wvag;
  double lag1_autocorrelation = 0.0;
  std::vector<SimplexResult> marginal_fits;
  SimplexResult joint_fit;
  bool on_boundary = false;  ///< joint optimum pressed against the (a, rho) box

  OUModel ou() const { return OUModel(lambda, wvag); }
};

/// Seasonality by least squares, lambda from the averaged lag-1 autocorrelation,
/// (alpha_k, mu_k, Sigma_kk) by univariate likelihood with lambda fixed, then
/// (a, Sigma_12) by bivariate likelihood; eta = -mu.
EstimationResult estimate_3step(const ObservedPanel& panel, double period, const EstimationOptions& options = {});

/// lambda = -log(rho_1) / dt from the averaged lag-1 autocorrelation of the columns.
double estimate_lambda(const Matrix& x, double dt, double* rho = nullptr);

enum class InstrumentKind { kForward, kCall };

struct CalibrationInstrument {
  InstrumentKind kind = InstrumentKind::kForward;
  Index component = 0;
  double maturity = 0.0;
  double strike = 0.0;  ///< calls only
  double price = 0.0;
};

/// Price of an instrument under the model (forward or Carr-Madan call).
double instrument_price(const MarketModel& model, const MarketState& state, const CalibrationInstrument& inst,
                        double call_eps = 2.5);

/// 20 forwards per component, maturities t + 0.125, ..., t + 2.5, priced by `truth`.
std::vector<CalibrationInstrument> default_forward_instruments(const MarketModel& truth, const MarketState& state);
/// 20 calls per component, maturity t + 0.5, strikes 25, ..., 175, priced by `truth`.
std::vector<CalibrationInstrument> default_call_instruments(const MarketModel& truth, const MarketState& state);

struct CalibrationResult {
  Vector h;
  double objective = 0.0;
  SimplexResult fit;
};

/// argmin over h in D_Z of sum (O_i - E_i)^2 with the fitted real-world dynamics held fixed.
CalibrationResult calibrate_mpr(const MarketModel& model, const MarketState& state,
                                const std::vector<CalibrationInstrument>& instruments, const Vector& h_init,
                                const SimplexOptions& options = {1e-7, 600});

double calibration_objective(const MarketModel& model, const MarketState& state,
                             const std::vector<CalibrationInstrument>& instruments);

}  // namespace ouvg
