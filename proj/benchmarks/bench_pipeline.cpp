#include <benchmark/benchmark.h>

#include "deskstereo/cost_volume.hpp"
#include "deskstereo/lcn.hpp"
#include "deskstereo/matcher.hpp"
#include "deskstereo/render.hpp"
#include "deskstereo/scene.hpp"

using namespace deskstereo;

namespace {

const RenderedPair& pair_320() {
  static RenderedPair p = [] {
    SceneSpec spec = builtin_scene("wall:2.0");
    spec.width = 320;
    spec.height = 240;
    return render_pair(spec);
  }();
  return p;
}

}  // namespace

static void BM_Render(benchmark::State& state) {
  SceneSpec spec = builtin_scene("wall:2.0");
  spec.width = 320;
  spec.height = 240;
  for (auto _ : state) {
    spec.seed++;
    benchmark::DoNotOptimize(render_pair(spec));
  }
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

static void BM_Lcn(benchmark::State& state) {
  const auto& p = pair_320();
  for (auto _ : state)
    benchmark::DoNotOptimize(lcn_normalize(p.left, kLcnDefaultEta, kLcnDefaultRadius));
}
BENCHMARK(BM_Lcn)->Unit(benchmark::kMillisecond);

static void BM_VolumeRaw(benchmark::State& state) {
  const auto& p = pair_320();
  VolumeConfig cfg;
  cfg.use_asw = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(build_volume(p.left, p.right, 0, 64, cfg));
}
BENCHMARK(BM_VolumeRaw)->Unit(benchmark::kMillisecond);

static void BM_VolumeAsw(benchmark::State& state) {
  const auto& p = pair_320();
  VolumeConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_volume(p.left, p.right, 0, 64, cfg, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_VolumeAsw)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_WtaReadout(benchmark::State& state) {
  const auto& p = pair_320();
  VolumeConfig cfg;
  auto vol = build_volume(p.left, p.right, 0, 64, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(wta_subpixel(vol));
}
BENCHMARK(BM_WtaReadout)->Unit(benchmark::kMillisecond);

static void BM_SoftArgmin(benchmark::State& state) {
  const auto& p = pair_320();
  VolumeConfig cfg;
  auto vol = build_volume(p.left, p.right, 0, 64, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(soft_argmin(vol, 1.0));
}
BENCHMARK(BM_SoftArgmin)->Unit(benchmark::kMillisecond);

static void BM_FullMatch(benchmark::State& state) {
  const auto& p = pair_320();
  MatchConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(match(p.left, p.right, cfg, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FullMatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
