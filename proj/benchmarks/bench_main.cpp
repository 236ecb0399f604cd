#include "magbm/response.hpp"
#include "magbm/spectra.hpp"
#include "magbm/theta.hpp"

#include <benchmark/benchmark.h>

using namespace magbm;

static void BM_BirmanSchwingerSector(benchmark::State& st) {
  const TunnelingModel m;
  const cplx k = (lattice().eta1 + lattice().eta2) / 3.0;
  for (auto _ : st) {
    auto r = birman_schwinger_spectrum(m, k, {}, int(st.range(0)), {0, false});
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
}
BENCHMARK(BM_BirmanSchwingerSector)->Arg(12)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_FloquetBands(benchmark::State& st) {
  FloquetProblem pr;
  pr.model = TunnelingModel::chiral(0.5856635583896);
  pr.k = lattice().dual(0.21, 0.43);
  pr.N = int(st.range(0));
  pr.sector = 0;
  for (auto _ : st) benchmark::DoNotOptimize(floquet_bands(pr, 4).eigenvalues.data());
}
BENCHMARK(BM_FloquetBands)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ChiralTrace(benchmark::State& st) {
  const DosModel m = DosModel::chiral(TunnelingModel::chiral(0.2));
  const TestFunction f = TestFunction::gaussian(5.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(trace(f, {-5, 5}, 30.0, m).total());
}
BENCHMARK(BM_ChiralTrace);

static void BM_AntichiralTrace(benchmark::State& st) {
  const DosModel m = DosModel::antichiral(TunnelingModel::antichiral(0.2), 0.1);
  const TestFunction f = TestFunction::gaussian(5.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(trace(f, {-5, 5}, 30.0, m).total());
}
BENCHMARK(BM_AntichiralTrace);

static void BM_MagnetizationSweepPoint(benchmark::State& st) {
  const DosModel m = DosModel::free_model();
  double x = 0.04;
  for (auto _ : st) {
    benchmark::DoNotOptimize(magnetization({4.0, 5.0, 1.0 / x, 12}, m));
    x = x < 0.44 ? x + 1e-3 : 0.04;
  }
}
BENCHMARK(BM_MagnetizationSweepPoint);

static void BM_Theta(benchmark::State& st) {
  ThetaParams p;
  cplx z(0.3, 0.2);
  for (auto _ : st) {
    benchmark::DoNotOptimize(theta_ab(p, z));
    z += 1e-3;
  }
}
BENCHMARK(BM_Theta);
BENCHMARK_MAIN();
