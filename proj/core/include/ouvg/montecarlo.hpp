#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ouvg/market.hpp"
#include "ouvg/random.hpp"

namespace ouvg {

enum class MCScheme {
  kSDE,       ///< Euler steps of dX = -lambda X dt + dZ(lambda t)
  kIntegral,  ///< left-endpoint sum for int_0^{lambda tau} e^u dZ(u)
};

struct MCConfig {
  long n_paths = 100000;
  int n_sub = 10000;
  MCScheme scheme = MCScheme::kSDE;
  std::uint64_t seed = 20240601;

  void validate() const;
};

struct MCResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

using Payoff = std::function<double(const Vector&)>;

/// One draw of S(T) given F_t under Q_h.
Vector sample_terminal(const MarketModel& model, const MarketState& state, double T, const MCConfig& config,
                       Rng& rng);

/// Discounted mean of payoff(S(T)) with a normal 95% interval. Path i uses
/// make_stream(config.seed, i), so results do not depend on thread count.
MCResult mc_generic(const MarketModel& model, const MarketState& state, const Payoff& payoff, double T,
                    const MCConfig& config);

/// Several payoffs evaluated on the same simulated paths.
std::vector<MCResult> mc_generic(const MarketModel& model, const MarketState& state,
                                 const std::vector<Payoff>& payoffs, double T, const MCConfig& config);

MCResult mc_spread_price(const MarketModel& model, const MarketState& state, Index k, Index l, double strike,
                         double T, const MCConfig& config);

std::vector<MCResult> mc_spread_panel(const MarketModel& model, const MarketState& state, Index k, Index l,
                                      const std::vector<double>& strikes, double T, const MCConfig& config);

/// Order-independent sum.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace ouvg
