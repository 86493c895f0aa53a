#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ouvg/inference.hpp"

namespace ouvg {

/// Settings for one replication of the fit-then-price simulation study.
struct StudyOptions {
  int m = 2000;  ///< observations after the first, sampled at reference::kDt
  int n_sub = 1000;
  double burn_in = 0.2;
  EstimationOptions estimation{};
  FFTGridSpec pricing_grid{256, Vector{{40.0, 40.0}}};
  double maturity = 0.5;  ///< spread maturity measured from the pricing state
};

struct Replication {
  std::uint64_t index = 0;
  bool ok = false;
  std::string failure;
  double lambda = 0.0;
  bool on_boundary = false;
  Vector h_forward;
  Vector h_call;
  Vector drift_forward;
  Vector drift_call;
  std::vector<double> prices_forward;
  std::vector<double> prices_call;
};

/// Simulates a path from `truth`, runs estimate_3step, calibrates h to the default
/// forward and call panels, then prices the spread panel at `state` under both fits.
/// Randomness comes from make_stream(seed, index).
Replication run_replication(const MarketModel& truth, const MarketState& state, const std::vector<double>& strikes,
                            std::uint64_t seed, std::uint64_t index, const StudyOptions& options = {});

/// sqrt(mean((x - truth)^2)) / |truth|.
double rrmse(const std::vector<double>& estimates, double truth);

}  // namespace ouvg
