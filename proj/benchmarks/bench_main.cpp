#include <benchmark/benchmark.h>

#include "ouvg/ldoup.hpp"
#include "ouvg/market.hpp"
#include "ouvg/montecarlo.hpp"
#include "ouvg/pricing.hpp"
#include "ouvg/specfun.hpp"

using namespace ouvg;

static void BM_DilogComplex(benchmark::State& st) {
  Complex z(-3.7, 0.4);
  for (auto _ : st) {
    benchmark::DoNotOptimize(dilog(z));
    z = Complex(z.real() + 1e-9, z.imag());
  }
}
BENCHMARK(BM_DilogComplex);

static void BM_InnovationCgf(benchmark::State& st) {
  const InnovationSpec spec(reference::model().ou(), 1.0 / 250.0);
  CVector theta(2);
  theta << Complex(0.3, 12.0), Complex(-0.2, -7.5);
  for (auto _ : st) benchmark::DoNotOptimize(innovation_cgf(spec, theta, spec.dt()));
}
BENCHMARK(BM_InnovationCgf);

static void BM_CallPrice(benchmark::State& st) {
  const MarketModel model = reference::model();
  const MarketState state = reference::state();
  for (auto _ : st) benchmark::DoNotOptimize(call_price(model, state, 0, 100.0, state.t() + 0.5, 2.5));
}
BENCHMARK(BM_CallPrice)->Unit(benchmark::kMicrosecond);

static void BM_SpreadPanel(benchmark::State& st) {
  const MarketModel model = reference::model();
  const MarketState state = reference::state();
  const FFTGridSpec grid(static_cast<int>(st.range(0)), st.range(0) >= 2048 ? 80.0 : 40.0);
  const std::vector<double> strikes{0.4, 1.2, 2.0, 2.8, 3.6, 4.4, 5.2, 6.0, 6.8, 7.6, 8.4, 9.2, 10.0};
  for (auto _ : st)
    benchmark::DoNotOptimize(spread_price_fft(model, state, 0, 1, strikes, state.t() + 0.5, Vector{{-3.5, 1.0}}, grid));
}
BENCHMARK(BM_SpreadPanel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_McSpread(benchmark::State& st) {
  const MarketModel model = reference::model();
  const MarketState state = reference::state();
  MCConfig cfg;
  cfg.n_paths = 2000;
  cfg.n_sub = 100;
  cfg.scheme = st.range(0) ? MCScheme::kIntegral : MCScheme::kSDE;
  for (auto _ : st) benchmark::DoNotOptimize(mc_spread_panel(model, state, 0, 1, {3.6}, state.t() + 0.5, cfg));
}
BENCHMARK(BM_McSpread)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
