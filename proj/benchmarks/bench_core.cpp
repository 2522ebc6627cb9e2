#include "sasfocus/drc.hpp"
#include "sasfocus/fft.hpp"
#include "sasfocus/gd.hpp"
#include "sasfocus/iqa.hpp"
#include "sasfocus/metrics.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/pipeline.hpp"
#include "sasfocus/scene.hpp"

#include <benchmark/benchmark.h>

using namespace sasfocus;

namespace {

SlcImage make_fixture(std::size_t m) {
  SceneSpec spec;
  spec.size = m;
  spec.seed = 99;
  spec.scatterer_count = 8;
  const CorruptionSpec c = sample_corruption(m, 100);
  return corrupt(gen_scene(spec), c.realized);
}

void bm_fft_along_track(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fft_along_track(g));
}
BENCHMARK(bm_fft_along_track)->Arg(64)->Arg(256);

void bm_sharpness_grad(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const ApertureSpectrum G = fft_along_track(g);
  PhasePolynomial p;
  p.coeff(2) = 1.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sharpness_grad(MetricKind::mns(), G, p, weight_identity()));
}
BENCHMARK(bm_sharpness_grad)->Arg(64)->Arg(256);

void bm_focus_gd_10(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  GdConfig cfg;
  cfg.learning_rate = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(focus_gd(g, cfg));
}
BENCHMARK(bm_focus_gd_10)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_regressor_forward(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const RegressorParams params = init_params(1);
  const DrcImage d = drc(g);
  const RealImage pm = phase_map(g);
  for (auto _ : state) benchmark::DoNotOptimize(regressor_forward(d, pm, params));
}
BENCHMARK(bm_regressor_forward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_pipeline_backward(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const RegressorParams params = init_params(1);
  for (auto _ : state) {
    RegressorParams grad = zero_like(params);
    pipeline_backward(g, params, grad);
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(bm_pipeline_backward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_infer(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const RegressorParams params = init_params(1);
  for (auto _ : state) benchmark::DoNotOptimize(infer(g, params));
}
BENCHMARK(bm_infer)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_despeckle(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const RealImage d = drc(g);
  for (auto _ : state) benchmark::DoNotOptimize(despeckle(d));
}
BENCHMARK(bm_despeckle)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_ms_ssim(benchmark::State& state) {
  const SlcImage g = make_fixture(static_cast<std::size_t>(state.range(0)));
  const DrcImage a = drc(g);
  DrcImage b = a;
  for (double& v : b.data) v = std::min(1.0, v * 1.01);
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(bm_ms_ssim)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
