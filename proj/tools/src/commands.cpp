#include "ouvg_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ouvg/errors.hpp"
#include "ouvg/inference.hpp"
#include "ouvg/ldoup.hpp"
#include "ouvg/montecarlo.hpp"
#include "ouvg/pricing.hpp"
#include "ouvg/random.hpp"
#include "ouvg_cli/config.hpp"

namespace ouvg::cli {

namespace {

// Seed tags, one per command that draws random numbers.
constexpr std::uint64_t kTagSimulate = 1;
constexpr std::uint64_t kTagPrice = 2;

std::string num(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Writes to --out when set, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ValidationError("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) *os_ << (i ? "," : "") << cells[i];
    *os_ << '\n';
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  header = split(line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split(line));
    if (rows.back().size() != header.size()) throw ValidationError(path + ": ragged row " + std::to_string(rows.size()));
  }
  return rows;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

ModelConfig config_or_default(const std::string& path) { return path.empty() ? default_config() : load_config(path); }

void check_component(int k, const ModelConfig& c) {
  if (k < 1 || k > c.alpha.size()) throw ValidationError("component must be between 1 and " + std::to_string(c.alpha.size()));
}

// ---- simulate ----

struct SimulateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> m, n_sub;
  std::optional<double> dt;
};

void simulate(const SimulateArgs& a, std::ostream& out) {
  ModelConfig c = config_or_default(a.config);
  if (a.seed) c.seed = *a.seed;
  const int m = a.m.value_or(c.simulation.m);
  const double dt = a.dt.value_or(c.simulation.dt);
  const int n_sub = a.n_sub.value_or(c.simulation.n_sub);
  if (m < 1) throw ValidationError("simulate: m must be positive");
  Rng rng = make_stream(derive_seed(c.seed, kTagSimulate), 0);
  const Matrix x = simulate_path(InnovationSpec(c.ou(), dt), m, n_sub, c.simulation.burn_in, rng);
  const Seasonality s = c.seasonality();
  Sink sink(a.out, out);
  std::vector<std::string> head{"t"};
  for (Index k = 0; k < x.cols(); ++k) head.push_back("S" + std::to_string(k + 1));
  sink.line(head);
  for (Index i = 0; i < x.rows(); ++i) {
    const double t = static_cast<double>(i) * dt;
    std::vector<std::string> row{num(t, 12)};
    for (Index k = 0; k < x.cols(); ++k) row.push_back(num(std::exp(s.value(k, t) + x(i, k)), 17));
    sink.line(row);
  }
}

// ---- estimate ----

struct EstimateArgs {
  std::string config, data, out;
};

void estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  ModelConfig c = config_or_default(a.config);
  std::vector<std::string> header;
  const auto rows = read_csv(a.data, header);
  if (header.size() != 3 || header[0] != "t") throw ValidationError("estimate: expected columns t,S1,S2");
  Vector times(static_cast<Index>(rows.size()));
  Matrix y(static_cast<Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    times(static_cast<Index>(i)) = to_double(rows[i][0]);
    for (Index k = 0; k < 2; ++k) {
      const double s = to_double(rows[i][static_cast<std::size_t>(k) + 1]);
      if (!(s > 0.0)) throw ValidationError("estimate: prices must be positive");
      y(static_cast<Index>(i), k) = std::log(s);
    }
  }
  const EstimationResult est = estimate_3step(ObservedPanel(times, y), c.period);
  if (est.on_boundary) err << "warning: joint fit reached the (a, rho) boundary\n";

  c.seasonality_coeffs = est.seasonality.coeffs();
  c.lambda = est.lambda;
  c.a = est.wvag.a();
  c.alpha = est.wvag.alpha();
  c.mu = est.wvag.mu();
  c.sigma = est.wvag.sigma();
  c.eta = est.wvag.eta();
  c.eta_zero_mean = true;
  c.h = Vector::Zero(c.alpha.size());
  nlohmann::ordered_json meta;
  meta["estimation"] = {{"observations", rows.size()},
                        {"lag1_autocorrelation", est.lag1_autocorrelation},
                        {"on_boundary", est.on_boundary},
                        {"marginal_negloglik", {est.marginal_fits[0].value, est.marginal_fits[1].value}},
                        {"joint_negloglik", est.joint_fit.value},
                        {"joint_iterations", est.joint_fit.iterations}};
  c.meta_json = meta.dump();
  Sink sink(a.out, out);
  *sink << to_json(c);
}

// ---- instruments / calibrate ----

struct InstrumentArgs {
  std::string config, kind = "forward", out;
};

void write_instruments(Sink& sink, const std::vector<CalibrationInstrument>& list) {
  sink.line({"kind", "component", "tau", "strike", "price"});
  for (const auto& inst : list)
    sink.line({inst.kind == InstrumentKind::kForward ? "forward" : "call", std::to_string(inst.component + 1),
               num(inst.maturity, 12), num(inst.strike, 12), num(inst.price, 17)});
}

void instruments(const InstrumentArgs& a, std::ostream& out) {
  const ModelConfig c = config_or_default(a.config);
  const MarketModel model = c.model();
  const auto list = a.kind == "forward" ? default_forward_instruments(model, c.state())
                                        : default_call_instruments(model, c.state());
  Sink sink(a.out, out);
  write_instruments(sink, list);
}

std::vector<CalibrationInstrument> read_instruments(const std::string& path, const ModelConfig& c) {
  std::vector<std::string> header;
  const auto rows = read_csv(path, header);
  if (header != std::vector<std::string>{"kind", "component", "tau", "strike", "price"})
    throw ValidationError("instruments: expected columns kind,component,tau,strike,price");
  std::vector<CalibrationInstrument> list;
  for (const auto& r : rows) {
    CalibrationInstrument inst;
    if (r[0] == "forward") inst.kind = InstrumentKind::kForward;
    else if (r[0] == "call") inst.kind = InstrumentKind::kCall;
    else throw ValidationError("instruments: unknown kind '" + r[0] + "'");
    const int k = static_cast<int>(to_double(r[1]));
    check_component(k, c);
    inst.component = k - 1;
    inst.maturity = to_double(r[2]);
    inst.strike = to_double(r[3]);
    inst.price = to_double(r[4]);
    if (!(inst.maturity > 0.0)) throw ValidationError("instruments: tau must be positive");
    if (!(inst.price > 0.0)) throw ValidationError("instruments: prices must be positive");
    list.push_back(inst);
  }
  if (list.empty()) throw ValidationError("instruments: no rows");
  return list;
}

struct CalibrateArgs {
  std::string config, instruments, out;
  std::vector<double> h_init;
};

void calibrate(const CalibrateArgs& a, std::ostream& out) {
  ModelConfig c = config_or_default(a.config);
  const auto list = read_instruments(a.instruments, c);
  Vector h0 = Vector::Zero(c.alpha.size());
  if (!a.h_init.empty()) {
    if (static_cast<Index>(a.h_init.size()) != h0.size()) throw ValidationError("calibrate: --h-init needs one value per component");
    for (Index k = 0; k < h0.size(); ++k) h0(k) = a.h_init[static_cast<std::size_t>(k)];
  }
  c.h = Vector::Zero(c.alpha.size());
  const CalibrationResult r = calibrate_mpr(c.model(), c.state(), list, h0);
  c.h = r.h;
  nlohmann::ordered_json meta = nlohmann::ordered_json::parse(c.meta_json);
  meta["calibration"] = {{"instruments", list.size()},
                         {"objective", r.objective},
                         {"iterations", r.fit.iterations},
                         {"converged", r.fit.converged}};
  c.meta_json = meta.dump();
  Sink sink(a.out, out);
  *sink << to_json(c);
}

// ---- price ----

struct PriceArgs {
  std::string config, instrument = "spread", method = "fft", strikes, maturities, scheme, out;
  int component = 0;
  std::optional<int> grid_n, nsub;
  std::optional<double> theta_bar;
  std::optional<long> paths;
  std::optional<std::uint64_t> seed;
};

MCConfig mc_config(const PriceArgs& a, const ModelConfig& c) {
  MCConfig mc;
  mc.n_paths = a.paths.value_or(c.pricing.mc_paths);
  mc.n_sub = a.nsub.value_or(c.pricing.mc_nsub);
  mc.scheme = c.pricing.mc_scheme;
  if (a.scheme == "sde") mc.scheme = MCScheme::kSDE;
  if (a.scheme == "integral") mc.scheme = MCScheme::kIntegral;
  mc.seed = derive_seed(a.seed.value_or(c.seed), kTagPrice);
  mc.validate();
  return mc;
}

std::string mc_meta(const MCConfig& mc) {
  return "paths=" + std::to_string(mc.n_paths) + ";nsub=" + std::to_string(mc.n_sub) +
         ";scheme=" + (mc.scheme == MCScheme::kSDE ? "sde" : "integral");
}

void price(const PriceArgs& a, std::ostream& out) {
  const ModelConfig c = config_or_default(a.config);
  const MarketModel model = c.model();
  const MarketState state = c.state();
  const bool mc = a.method == "mc";
  const Index n = c.alpha.size();
  std::vector<Index> components;
  if (a.component == 0) {
    for (Index k = 0; k < n; ++k) components.push_back(k);
  } else {
    check_component(a.component, c);
    components.push_back(a.component - 1);
  }
  const std::vector<std::string> ci_cols{"std_error", "ci_lo", "ci_hi"};
  auto with_ci = [&](std::vector<std::string> row, const MCResult& r) {
    row.push_back(num(r.std_error));
    row.push_back(num(r.ci_lo));
    row.push_back(num(r.ci_hi));
    return row;
  };
  auto header = [&](std::vector<std::string> cols) {
    if (mc) cols.insert(cols.end(), ci_cols.begin(), ci_cols.end());
    return cols;
  };
  Sink sink(a.out, out);

  if (a.instrument == "forward") {
    const auto taus = parse_grid(a.maturities.empty() ? "0.125:2.5:0.125" : a.maturities);
    sink.line(header({"tau", "component", "price", "method", "meta"}));
    for (double tau : taus) {
      if (!(tau >= 0.0)) throw ValidationError("price: maturities must be nonnegative");
      if (mc) {
        const MCConfig cfg = mc_config(a, c);
        std::vector<Payoff> payoffs;
        for (Index k : components) payoffs.push_back([k](const Vector& s) { return s(k); });
        const auto res = mc_generic(model, state, payoffs, state.t() + tau, cfg);
        // undo the discount so the column is the forward itself
        const double undisc = std::exp(model.r() * tau);
        for (std::size_t i = 0; i < components.size(); ++i) {
          MCResult r = res[i];
          r.estimate *= undisc;
          r.std_error *= undisc;
          r.ci_lo *= undisc;
          r.ci_hi *= undisc;
          sink.line(with_ci({num(tau, 12), std::to_string(components[i] + 1), num(r.estimate), "mc", mc_meta(cfg)}, r));
        }
      } else {
        for (Index k : components)
          sink.line({num(tau, 12), std::to_string(k + 1), num(forward_price(model, state, k, state.t() + tau)), "fft",
                     "closed-form"});
      }
    }
    return;
  }

  if (a.instrument == "call") {
    const auto taus = parse_grid(a.maturities.empty() ? "0.5" : a.maturities);
    const auto strikes = parse_grid(a.strikes.empty() ? "25:175:7.894736842105263" : a.strikes);
    sink.line(header({"K", "tau", "component", "price", "method", "meta"}));
    for (double tau : taus)
      for (Index k : components) {
        if (mc) {
          const MCConfig cfg = mc_config(a, c);
          std::vector<Payoff> payoffs;
          for (double K : strikes) payoffs.push_back([k, K](const Vector& s) { return std::max(s(k) - K, 0.0); });
          const auto res = mc_generic(model, state, payoffs, state.t() + tau, cfg);
          for (std::size_t i = 0; i < strikes.size(); ++i)
            sink.line(with_ci({num(strikes[i], 12), num(tau, 12), std::to_string(k + 1), num(res[i].estimate), "mc",
                               mc_meta(cfg)},
                              res[i]));
        } else {
          for (double K : strikes)
            sink.line({num(K, 12), num(tau, 12), std::to_string(k + 1),
                       num(call_price(model, state, k, K, state.t() + tau, c.pricing.call_eps)), "fft",
                       "eps=" + num(c.pricing.call_eps)});
        }
      }
    return;
  }

  if (a.instrument != "spread") throw ValidationError("price: instrument must be forward, call or spread");
  if (n != 2) throw ValidationError("price: spread needs a two-component model");
  const auto taus = parse_grid(a.maturities.empty() ? "0.5" : a.maturities);
  if (taus.size() != 1) throw ValidationError("price: spread panels take a single maturity");
  const double T = state.t() + taus[0];
  const auto strikes = parse_grid(a.strikes.empty() ? "0.4:10:0.8" : a.strikes);
  sink.line(header({"K", "price", "method", "meta"}));
  if (mc) {
    const MCConfig cfg = mc_config(a, c);
    const auto res = mc_spread_panel(model, state, 0, 1, strikes, T, cfg);
    for (std::size_t i = 0; i < strikes.size(); ++i)
      sink.line(with_ci({num(strikes[i], 12), num(res[i].estimate), "mc", "tau=" + num(taus[0], 12) + ";" + mc_meta(cfg)},
                        res[i]));
  } else {
    const FFTGridSpec grid(a.grid_n.value_or(c.pricing.fft_n), a.theta_bar.value_or(c.pricing.theta_bar));
    const auto p = spread_price_fft(model, state, 0, 1, strikes, T, c.pricing.spread_eps, grid);
    const std::string meta = "tau=" + num(taus[0], 12) + ";N=" + std::to_string(grid.n) + ";theta_bar=" + num(grid.theta_bar(0));
    for (std::size_t i = 0; i < strikes.size(); ++i) {
      if (!std::isfinite(p[i])) throw NumericalError("price: non-finite spread price");
      sink.line({num(strikes[i], 12), num(p[i]), "fft", meta});
    }
  }
}

// ---- sensitivity ----

struct SensitivityArgs {
  std::string config, param, maturities, out;
  double from = 0.0, to = 0.0, strike = 3.6;
  int steps = 21;
  std::optional<int> grid_n;
  std::optional<double> theta_bar;
};

double& parameter_slot(ModelConfig& c, const std::string& name) {
  if (name == "lambda") return c.lambda;
  if (name == "a") return c.a;
  if (name == "alpha1") return c.alpha(0);
  if (name == "alpha2") return c.alpha(1);
  if (name == "mu1") return c.mu(0);
  if (name == "mu2") return c.mu(1);
  if (name == "sigma11") return c.sigma(0, 0);
  if (name == "sigma22") return c.sigma(1, 1);
  if (name == "sigma12") return c.sigma(0, 1);
  if (name == "h1") return c.h(0);
  if (name == "h2") return c.h(1);
  if (name == "r") return c.r;
  throw ValidationError("sensitivity: unknown parameter '" + name + "'");
}

void sensitivity(const SensitivityArgs& a, std::ostream& out) {
  const ModelConfig base = config_or_default(a.config);
  if (base.alpha.size() != 2) throw ValidationError("sensitivity: needs a two-component model");
  if (a.steps < 2) throw ValidationError("sensitivity: steps must be at least 2");
  const auto taus = parse_grid(a.maturities.empty() ? "0.5" : a.maturities);
  const FFTGridSpec grid(a.grid_n.value_or(256), a.theta_bar.value_or(40.0));
  Sink sink(a.out, out);
  sink.line({"param", "value", "K", "price"});
  for (int i = 0; i < a.steps; ++i) {
    const double v = a.from + (a.to - a.from) * static_cast<double>(i) / (a.steps - 1);
    ModelConfig c = base;
    parameter_slot(c, a.param) = v;
    if (a.param == "sigma12") c.sigma(1, 0) = v;
    const double p = spread_price_fft(c.model(), c.state(), 0, 1, {a.strike}, c.t + taus[0], c.pricing.spread_eps, grid)[0];
    sink.line({a.param, num(v, 12), num(a.strike, 12), num(p)});
  }
}

}  // namespace

const std::vector<std::string>& sensitivity_parameters() {
  static const std::vector<std::string> names{"lambda", "a",       "alpha1",  "alpha2", "mu1", "mu2",
                                              "sigma11", "sigma22", "sigma12", "h1",     "h2",  "r"};
  return names;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ':')) parts.push_back(to_double(cell));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw ValidationError("grid '" + text + "': expected lo:hi:step with step > 0");
    const long count = std::lround(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  } else {
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(to_double(cell));
  }
  if (out.empty()) throw ValidationError("grid '" + text + "' is empty");
  if (!std::is_sorted(out.begin(), out.end())) throw ValidationError("grid '" + text + "' must be ascending");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pricing and estimation for OU energy price models driven by variance gamma processes", "ouvg"};
  app.require_subcommand(1);

  auto* cfg = app.add_subcommand("config", "Write the built-in reference configuration");
  std::string cfg_out;
  cfg->add_option("--out", cfg_out, "Output path (stdout if omitted)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate daily observations t,S1,S2");
  s->add_option("--config", sim.config, "Model configuration (JSON)");
  s->add_option("--seed", sim.seed, "Top-level seed");
  s->add_option("--out", sim.out, "Output CSV");
  s->add_option("--m", sim.m, "Number of steps after the first observation")->check(CLI::PositiveNumber);
  s->add_option("--dt", sim.dt, "Sampling interval in years")->check(CLI::PositiveNumber);
  s->add_option("--nsub", sim.n_sub, "Subintervals per step")->check(CLI::PositiveNumber);

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Three-step estimation from an observation CSV");
  e->add_option("--config", est.config, "Configuration supplying period, market and pricing blocks");
  e->add_option("--data", est.data, "Observation CSV with columns t,S1,S2")->required();
  e->add_option("--out", est.out, "Fitted configuration (JSON)");

  InstrumentArgs ins;
  auto* in = app.add_subcommand("instruments", "Write the default calibration panel priced by a model");
  in->add_option("--config", ins.config, "Model configuration (JSON)");
  in->add_option("--kind", ins.kind, "forward or call")->check(CLI::IsMember({"forward", "call"}));
  in->add_option("--out", ins.out, "Output CSV");

  CalibrateArgs cal;
  auto* ca = app.add_subcommand("calibrate", "Calibrate the market price of risk h");
  ca->add_option("--config", cal.config, "Fitted configuration (JSON)");
  ca->add_option("--instruments", cal.instruments, "Instrument CSV")->required();
  ca->add_option("--h-init", cal.h_init, "Starting h, one value per component")->delimiter(',');
  ca->add_option("--out", cal.out, "Calibrated configuration (JSON)");

  PriceArgs pr;
  auto* p = app.add_subcommand("price", "Price forwards, calls or a spread panel");
  p->add_option("--config", pr.config, "Model configuration (JSON)");
  p->add_option("--instrument", pr.instrument, "forward, call or spread")
      ->check(CLI::IsMember({"forward", "call", "spread"}));
  p->add_option("--method", pr.method, "fft or mc")->check(CLI::IsMember({"fft", "mc"}));
  p->add_option("--strikes", pr.strikes, "Strikes: a,b,c or lo:hi:step");
  p->add_option("--maturities", pr.maturities, "Times to maturity: a,b,c or lo:hi:step");
  p->add_option("--component", pr.component, "Component for forwards and calls (default all)");
  p->add_option("--grid-n", pr.grid_n, "FFT points per axis");
  p->add_option("--theta-bar", pr.theta_bar, "FFT half-width per axis")->check(CLI::PositiveNumber);
  p->add_option("--paths", pr.paths, "Monte Carlo paths");
  p->add_option("--nsub", pr.nsub, "Monte Carlo substeps");
  p->add_option("--scheme", pr.scheme, "sde or integral")->check(CLI::IsMember({"sde", "integral"}));
  p->add_option("--seed", pr.seed, "Top-level seed");
  p->add_option("--out", pr.out, "Output CSV");

  SensitivityArgs sen;
  auto* se = app.add_subcommand("sensitivity", "Spread price as one model parameter varies");
  se->add_option("--config", sen.config, "Model configuration (JSON)");
  se->add_option("--param", sen.param, "Parameter to vary")->required()->check(CLI::IsMember(sensitivity_parameters()));
  se->add_option("--from", sen.from, "First value")->required();
  se->add_option("--to", sen.to, "Last value")->required();
  se->add_option("--steps", sen.steps, "Number of values");
  se->add_option("--strike", sen.strike, "Spread strike");
  se->add_option("--maturities", sen.maturities, "Time to maturity");
  se->add_option("--grid-n", sen.grid_n, "FFT points per axis");
  se->add_option("--theta-bar", sen.theta_bar, "FFT half-width per axis");
  se->add_option("--out", sen.out, "Output CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& h) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << "\n";
    return kValidation;
  }

  try {
    if (cfg->parsed()) {
      Sink sink(cfg_out, out);
      *sink << to_json(default_config());
    } else if (s->parsed()) {
      simulate(sim, out);
    } else if (e->parsed()) {
      estimate(est, out, err);
    } else if (in->parsed()) {
      instruments(ins, out);
    } else if (ca->parsed()) {
      calibrate(cal, out);
    } else if (p->parsed()) {
      price(pr, out);
    } else if (se->parsed()) {
      sensitivity(sen, out);
    }
  } catch (const ValidationError& ve) {
    err << "error: " << ve.what() << "\n";
    return kValidation;
  } catch (const Error& ne) {
    err << "error: " << ne.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace ouvg::cli
