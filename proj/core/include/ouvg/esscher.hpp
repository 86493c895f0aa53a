#pragma once

#include "ouvg/levy.hpp"
#include "ouvg/types.hpp"

namespace ouvg {

struct MarketPriceOfRisk {
  Vector h;
};

/// Q_h with dQ_h/dP = e^{<h, Z(t)>} / E[e^{<h, Z(t)>}]. Built only through the
/// transforms below, which check h in D_Z first.
class EsscherMeasure {
 public:
  const MarketPriceOfRisk& mpr() const { return mpr_; }
  const Vector& h() const { return mpr_.h; }
  /// Driver parameters under Q_h.
  const VGCParams& bdlp_q() const { return bdlp_q_; }

 private:
  EsscherMeasure(MarketPriceOfRisk mpr, VGCParams q) : mpr_(std::move(mpr)), bdlp_q_(std::move(q)) {}
  friend EsscherMeasure vgc_esscher(const VGCParams&, const Vector&);

  MarketPriceOfRisk mpr_;
  VGCParams bdlp_q_;
};

/// b unchanged, mu_h = (mu + Sigma h)/K_h, Sigma_h = Sigma/K_h. Throws MeasureError if K_h <= 0.
VGParams vg_esscher(const VGParams& params, const Vector& h);

/// Termwise transform; eta is unchanged.
EsscherMeasure vgc_esscher(const VGCParams& params, const Vector& h);

/// The result is a VGC law: WVAG is not closed under the transform.
EsscherMeasure wvag_esscher(const WVAGParams& params, const Vector& h);

/// theta in D_Z, i.e. K_theta > 0 for every term.
bool domain_contains(const VGCParams& params, const Vector& theta);

/// Largest s with s * direction in D_Z (infinity if the ray never leaves it).
double domain_radius(const VGCParams& params, const Vector& direction);

}  // namespace ouvg
