#pragma once

#include <cstdint>
#include <string>

#include "ouvg/market.hpp"
#include "ouvg/montecarlo.hpp"
#include "ouvg/pricing.hpp"

namespace ouvg::cli {

inline constexpr int kSchemaVersion = 1;

struct PricingConfig {
  double call_eps = 2.5;
  Vector spread_eps = Vector{{-3.5, 1.0}};
  int fft_n = 2048;
  double theta_bar = 80.0;
  long mc_paths = 100000;
  int mc_nsub = 10000;
  MCScheme mc_scheme = MCScheme::kSDE;
};

struct SimulationConfig {
  int m = 2000;
  double dt = 1.0 / 250.0;
  int n_sub = 1000;
  double burn_in = 0.2;
};

/// Everything a command needs to rebuild the market model and its numerics.
/// JSON layout (all blocks required except simulation, pricing and meta):
///   schema_version, seed,
///   seasonality {period, coefficients: [[b0, b1, b2, b3] per component]},
///   ldoup {lambda, a, alpha, mu, sigma, eta: [..] | "zero-mean"},
///   market {r, h, t, spot},
///   simulation {m, dt, n_sub, burn_in},
///   pricing {call_eps, spread_eps, fft_n, theta_bar, mc_paths, mc_nsub, mc_scheme: "sde" | "integral"},
///   meta {free-form, written by estimate and calibrate}.
struct ModelConfig {
  std::uint64_t seed = 20240101;
  Matrix seasonality_coeffs;
  double period = 1.0;
  double lambda = 0.0;
  double a = 0.0;
  Vector alpha;
  Vector mu;
  Matrix sigma;
  Vector eta;
  bool eta_zero_mean = true;
  double r = 0.0;
  Vector h;
  double t = 0.0;
  Vector spot;
  SimulationConfig simulation;
  PricingConfig pricing;
  std::string meta_json = "{}";

  Seasonality seasonality() const { return Seasonality(seasonality_coeffs, period); }
  WVAGParams wvag() const;
  OUModel ou() const { return OUModel(lambda, wvag()); }
  MarketModel model() const;
  MarketState state() const { return MarketState(t, spot); }
};

/// The reference two-commodity model.
ModelConfig default_config();

/// Parses and validates; throws ValidationError on unknown keys, missing fields or bad values.
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::string& path);
std::string to_json(const ModelConfig& config);

/// Per-command seed derived from the top-level seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace ouvg::cli
