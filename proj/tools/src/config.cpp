#include "ouvg_cli/config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ouvg/errors.hpp"

namespace ouvg::cli {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& j, const std::string& block, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError("config: '" + block + "' must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ValidationError("config: unknown key '" + key + "' in " + block);
}

const json& field(const json& j, const std::string& block, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("config: missing '" + key + "' in " + block);
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError("config: '" + what + "' must be a number");
  return j.get<double>();
}

Vector vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError("config: '" + what + "' must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], what);
  return v;
}

Matrix mat(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError("config: '" + what + "' must be a nested array");
  const std::size_t rows = j.size(), cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ValidationError("config: '" + what + "' rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = number(j[i][k], what);
  }
  return m;
}

json to_array(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_array(const Matrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_array(Vector(m.row(i).transpose())));
  return a;
}

}  // namespace

WVAGParams ModelConfig::wvag() const { return WVAGParams(a, alpha, mu, sigma, eta_zero_mean ? Vector(-mu) : eta); }

MarketModel ModelConfig::model() const { return MarketModel(seasonality(), ou(), r, h); }

ModelConfig default_config() {
  ModelConfig c;
  const Seasonality s = reference::seasonality();
  const WVAGParams w = reference::wvag();
  c.seasonality_coeffs = s.coeffs();
  c.period = s.period();
  c.lambda = reference::kLambda;
  c.a = w.a();
  c.alpha = w.alpha();
  c.mu = w.mu();
  c.sigma = w.sigma();
  c.eta = w.eta();
  c.eta_zero_mean = true;
  c.r = reference::kRate;
  c.h = reference::h();
  c.t = reference::kTe;
  c.spot = reference::state().spot();
  return c;
}

ModelConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"schema_version", "seed", "seasonality", "ldoup", "market", "simulation", "pricing", "meta"});
  const json& ver = field(j, "config", "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion)
    throw ValidationError("config: schema_version must be " + std::to_string(kSchemaVersion));

  ModelConfig c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("config: 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  const json& s = field(j, "config", "seasonality");
  check_keys(s, "seasonality", {"period", "coefficients"});
  c.period = number(field(s, "seasonality", "period"), "period");
  c.seasonality_coeffs = mat(field(s, "seasonality", "coefficients"), "coefficients");

  const json& l = field(j, "config", "ldoup");
  check_keys(l, "ldoup", {"lambda", "a", "alpha", "mu", "sigma", "eta"});
  c.lambda = number(field(l, "ldoup", "lambda"), "lambda");
  c.a = number(field(l, "ldoup", "a"), "a");
  c.alpha = vec(field(l, "ldoup", "alpha"), "alpha");
  c.mu = vec(field(l, "ldoup", "mu"), "mu");
  c.sigma = mat(field(l, "ldoup", "sigma"), "sigma");
  const json& eta = field(l, "ldoup", "eta");
  if (eta.is_string()) {
    if (eta.get<std::string>() != "zero-mean") throw ValidationError("config: eta must be an array or \"zero-mean\"");
    c.eta_zero_mean = true;
    c.eta = -c.mu;
  } else {
    c.eta_zero_mean = false;
    c.eta = vec(eta, "eta");
  }

  const json& m = field(j, "config", "market");
  check_keys(m, "market", {"r", "h", "t", "spot"});
  c.r = number(field(m, "market", "r"), "r");
  c.h = vec(field(m, "market", "h"), "h");
  c.t = number(field(m, "market", "t"), "t");
  c.spot = vec(field(m, "market", "spot"), "spot");

  if (j.contains("simulation")) {
    const json& sim = j["simulation"];
    check_keys(sim, "simulation", {"m", "dt", "n_sub", "burn_in"});
    if (sim.contains("m")) c.simulation.m = static_cast<int>(number(sim["m"], "m"));
    if (sim.contains("dt")) c.simulation.dt = number(sim["dt"], "dt");
    if (sim.contains("n_sub")) c.simulation.n_sub = static_cast<int>(number(sim["n_sub"], "n_sub"));
    if (sim.contains("burn_in")) c.simulation.burn_in = number(sim["burn_in"], "burn_in");
  }
  if (j.contains("pricing")) {
    const json& p = j["pricing"];
    check_keys(p, "pricing", {"call_eps", "spread_eps", "fft_n", "theta_bar", "mc_paths", "mc_nsub", "mc_scheme"});
    if (p.contains("call_eps")) c.pricing.call_eps = number(p["call_eps"], "call_eps");
    if (p.contains("spread_eps")) c.pricing.spread_eps = vec(p["spread_eps"], "spread_eps");
    if (p.contains("fft_n")) c.pricing.fft_n = static_cast<int>(number(p["fft_n"], "fft_n"));
    if (p.contains("theta_bar")) c.pricing.theta_bar = number(p["theta_bar"], "theta_bar");
    if (p.contains("mc_paths")) c.pricing.mc_paths = static_cast<long>(number(p["mc_paths"], "mc_paths"));
    if (p.contains("mc_nsub")) c.pricing.mc_nsub = static_cast<int>(number(p["mc_nsub"], "mc_nsub"));
    if (p.contains("mc_scheme")) {
      const std::string scheme = p["mc_scheme"].is_string() ? p["mc_scheme"].get<std::string>() : "";
      if (scheme == "sde") c.pricing.mc_scheme = MCScheme::kSDE;
      else if (scheme == "integral") c.pricing.mc_scheme = MCScheme::kIntegral;
      else throw ValidationError("config: mc_scheme must be \"sde\" or \"integral\"");
    }
  }
  if (j.contains("meta")) c.meta_json = j["meta"].dump();

  const Index n = c.alpha.size();
  if (c.seasonality_coeffs.rows() != n || c.seasonality_coeffs.cols() != 4)
    throw ValidationError("config: seasonality needs four coefficients per component");
  if (c.mu.size() != n || c.eta.size() != n || c.h.size() != n || c.spot.size() != n || c.sigma.rows() != n ||
      c.sigma.cols() != n)
    throw ValidationError("config: component counts disagree");
  if (c.pricing.spread_eps.size() != 2) throw ValidationError("config: spread_eps needs two entries");
  c.model();  // runs the library's own parameter checks
  c.state();
  return c;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ModelConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = c.seed;
  j["seasonality"] = {{"period", c.period}, {"coefficients", to_array(c.seasonality_coeffs)}};
  j["ldoup"] = {{"lambda", c.lambda}, {"a", c.a}, {"alpha", to_array(c.alpha)}, {"mu", to_array(c.mu)},
                {"sigma", to_array(c.sigma)}};
  j["ldoup"]["eta"] = c.eta_zero_mean ? json("zero-mean") : to_array(c.eta);
  j["market"] = {{"r", c.r}, {"h", to_array(c.h)}, {"t", c.t}, {"spot", to_array(c.spot)}};
  j["simulation"] = {{"m", c.simulation.m}, {"dt", c.simulation.dt}, {"n_sub", c.simulation.n_sub},
                     {"burn_in", c.simulation.burn_in}};
  j["pricing"] = {{"call_eps", c.pricing.call_eps}, {"spread_eps", to_array(c.pricing.spread_eps)},
                  {"fft_n", c.pricing.fft_n},       {"theta_bar", c.pricing.theta_bar},
                  {"mc_paths", c.pricing.mc_paths}, {"mc_nsub", c.pricing.mc_nsub},
                  {"mc_scheme", c.pricing.mc_scheme == MCScheme::kSDE ? "sde" : "integral"}};
  j["meta"] = json::parse(c.meta_json);
  return j.dump(2) + "\n";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), 0x636c69u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace ouvg::cli
