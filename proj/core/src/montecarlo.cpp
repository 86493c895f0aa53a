#include "ouvg/montecarlo.hpp"

#include <cmath>

#include "ouvg/errors.hpp"

namespace ouvg {

void MCConfig::validate() const {
  if (n_paths < 100) throw ValidationError("mc: n_paths must be at least 100");
  if (n_sub < 1) throw ValidationError("mc: n_sub must be at least 1");
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

namespace {

// Draws S(T) with a prebuilt sampler; weights are used by the integral scheme only.
class TerminalSampler {
 public:
  TerminalSampler(const MarketModel& model, const MarketState& state, double T, const MCConfig& config)
      : config_(config),
        tau_(T - state.t()),
        lambda_(model.ou().lambda()),
        x0_(state.x(model.seasonality())),
        season_(model.seasonality()(T)),
        sampler_(config.scheme == MCScheme::kIntegral
                     ? VGCParams(model.ou_q().bdlp().terms(), Vector::Zero(model.dim()))
                     : model.ou_q().bdlp(),
                 tau_ > 0.0 ? lambda_ * tau_ / config.n_sub : 1.0),
        drift_(-std::expm1(-lambda_ * tau_) * model.ou_q().bdlp().eta()) {
    if (!(tau_ >= 0.0)) throw ValidationError("mc: maturity precedes the current time");
    if (config_.scheme == MCScheme::kIntegral) {
      const double h = lambda_ * tau_ / config_.n_sub;
      const double decay = std::exp(-lambda_ * tau_);
      weights_.resize(static_cast<std::size_t>(config_.n_sub));
      for (int i = 0; i < config_.n_sub; ++i) weights_[i] = decay * std::exp(i * h);
    }
  }

  Vector draw(Rng& rng) {
    sampler_.reset();
    Vector x = x0_;
    if (tau_ > 0.0) {
      if (config_.scheme == MCScheme::kIntegral) {
        x = x * std::exp(-lambda_ * tau_) + drift_;
        for (int i = 0; i < config_.n_sub; ++i) sampler_.add_increment(rng, weights_[i], x.data());
      } else {
        const double keep = 1.0 - lambda_ * tau_ / config_.n_sub;
        for (int i = 0; i < config_.n_sub; ++i) {
          x *= keep;
          sampler_.add_increment(rng, 1.0, x.data());
        }
      }
    }
    return (season_ + x).array().exp().matrix();
  }

 private:
  MCConfig config_;
  double tau_;
  double lambda_;
  Vector x0_;
  Vector season_;
  DriverSampler sampler_;
  Vector drift_;  // exact drift of the integral scheme
  std::vector<double> weights_;
};

MCResult summarize(const std::vector<double>& v, double discount) {
  const std::size_t n = v.size();
  const double mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  MCResult r;
  r.estimate = discount * mean;
  r.std_error = discount * std::sqrt(var / static_cast<double>(n));
  r.ci_lo = r.estimate - 1.959963984540054 * r.std_error;
  r.ci_hi = r.estimate + 1.959963984540054 * r.std_error;
  return r;
}

}  // namespace

Vector sample_terminal(const MarketModel& model, const MarketState& state, double T, const MCConfig& config,
                       Rng& rng) {
  if (config.n_sub < 1) throw ValidationError("mc: n_sub must be at least 1");
  TerminalSampler sampler(model, state, T, config);
  return sampler.draw(rng);
}

std::vector<MCResult> mc_generic(const MarketModel& model, const MarketState& state,
                                 const std::vector<Payoff>& payoffs, double T, const MCConfig& config) {
  config.validate();
  const std::size_t np = static_cast<std::size_t>(config.n_paths);
  const std::size_t nf = payoffs.size();
  std::vector<double> values(np * nf);
  TerminalSampler prototype(model, state, T, config);

#pragma omp parallel
  {
    TerminalSampler sampler = prototype;
#pragma omp for schedule(static)
    for (long i = 0; i < config.n_paths; ++i) {
      Rng rng = make_stream(config.seed, static_cast<std::uint64_t>(i));
      const Vector s = sampler.draw(rng);
      for (std::size_t f = 0; f < nf; ++f) values[f * np + static_cast<std::size_t>(i)] = payoffs[f](s);
    }
  }

  const double discount = std::exp(-model.r() * (T - state.t()));
  std::vector<MCResult> out;
  out.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    std::vector<double> v(values.begin() + static_cast<long>(f * np), values.begin() + static_cast<long>((f + 1) * np));
    out.push_back(summarize(v, discount));
  }
  return out;
}

MCResult mc_generic(const MarketModel& model, const MarketState& state, const Payoff& payoff, double T,
                    const MCConfig& config) {
  return mc_generic(model, state, std::vector<Payoff>{payoff}, T, config).front();
}

std::vector<MCResult> mc_spread_panel(const MarketModel& model, const MarketState& state, Index k, Index l,
                                      const std::vector<double>& strikes, double T, const MCConfig& config) {
  if (k == l || k < 0 || l < 0 || k >= model.dim() || l >= model.dim())
    throw ValidationError("mc spread: needs two distinct components");
  std::vector<Payoff> payoffs;
  for (double K : strikes) payoffs.push_back([k, l, K](const Vector& s) { return std::max(s(k) - s(l) - K, 0.0); });
  return mc_generic(model, state, payoffs, T, config);
}

MCResult mc_spread_price(const MarketModel& model, const MarketState& state, Index k, Index l, double strike,
                         double T, const MCConfig& config) {
  return mc_spread_panel(model, state, k, l, {strike}, T, config).front();
}

}  // namespace ouvg
