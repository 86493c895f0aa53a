#include "ouvg/esscher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ouvg/errors.hpp"

namespace ouvg {

VGParams vg_esscher(const VGParams& params, const Vector& h) {
  if (h.size() != params.dim()) throw ValidationError("esscher: dimension mismatch");
  const double k = vg_K(params, h);
  if (!(k > 0.0)) throw MeasureError("esscher: h outside the domain, K_h = " + std::to_string(k));
  return VGParams(params.b(), (params.mu() + params.sigma() * h) / k, params.sigma() / k, params.eta());
}

EsscherMeasure vgc_esscher(const VGCParams& params, const Vector& h) {
  if (h.size() != params.dim()) throw ValidationError("esscher: dimension mismatch");
  std::vector<VGParams> terms;
  terms.reserve(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double k = vg_K(params.terms()[j], h);
    if (!(k > 0.0))
      throw MeasureError("esscher: h outside the domain of term " + std::to_string(j) +
                         ", K_h = " + std::to_string(k));
    terms.push_back(vg_esscher(params.terms()[j], h));
  }
  return EsscherMeasure(MarketPriceOfRisk{h}, VGCParams(std::move(terms), params.eta()));
}

EsscherMeasure wvag_esscher(const WVAGParams& params, const Vector& h) {
  return vgc_esscher(wvag_to_vgc(params), h);
}

bool domain_contains(const VGCParams& params, const Vector& theta) {
  if (theta.size() != params.dim()) throw ValidationError("domain_contains: dimension mismatch");
  for (const auto& t : params.terms())
    if (!(vg_K(t, theta) > 0.0)) return false;
  return true;
}

double domain_radius(const VGCParams& params, const Vector& d) {
  // K_{s d} = 1 - s <mu,d>/b - s^2 <d,Sigma d>/(2b); take the smallest positive root over terms.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : params.terms()) {
    const double qa = d.dot(t.sigma() * d) / (2.0 * t.b());
    const double qb = t.mu().dot(d) / t.b();
    double root = std::numeric_limits<double>::infinity();
    if (qa > 0.0) {
      const double disc = std::sqrt(qb * qb + 4.0 * qa);
      root = qb >= 0.0 ? 2.0 / (qb + disc) : (disc - qb) / (2.0 * qa);
    } else if (qb > 0.0) {
      root = 1.0 / qb;
    }
    best = std::min(best, root);
  }
  return best;
}

}  // namespace ouvg
