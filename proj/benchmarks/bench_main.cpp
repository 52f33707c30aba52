#include <benchmark/benchmark.h>

#include <random>

#include "histoscope/histogram.hpp"
#include "histoscope/ingest.hpp"
#include "histoscope/plot.hpp"
#include "histoscope/png.hpp"
#include "histoscope/workspace.hpp"

namespace {

using namespace histoscope;

ImageRecord noise_image(std::uint32_t side, BitDepth depth) {
  std::mt19937 rng(side * 31 + bits(depth));
  std::uniform_int_distribution<std::uint32_t> value(0, max_intensity(depth));
  std::vector<std::uint16_t> pixels(std::size_t{side} * side);
  for (auto& p : pixels) p = static_cast<std::uint16_t>(value(rng));
  return ImageRecord("noise", side, side, depth, std::move(pixels));
}

void BM_BuildHistogram(benchmark::State& state) {
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const ImageRecord image = noise_image(side, state.range(1) == 16 ? BitDepth::k16 : BitDepth::k8);
  for (auto _ : state) benchmark::DoNotOptimize(build_histogram(image));
  state.SetItemsProcessed(state.iterations() * std::int64_t{side} * side);
}
BENCHMARK(BM_BuildHistogram)->ArgsProduct({{512, 2048}, {8, 16}});

void BM_RangeStats(benchmark::State& state) {
  const BitDepth depth = state.range(0) == 16 ? BitDepth::k16 : BitDepth::k8;
  const Histogram hist = build_histogram(noise_image(512, depth));
  for (auto _ : state) benchmark::DoNotOptimize(range_stats(hist, full_range(depth)));
}
BENCHMARK(BM_RangeStats)->Arg(8)->Arg(16);

void BM_DecodePng(benchmark::State& state) {
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const auto png = encode_png_gray(noise_image(side, BitDepth::k8));
  for (auto _ : state) benchmark::DoNotOptimize(decode_image(png, "noise.png"));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(png.size()));
}
BENCHMARK(BM_DecodePng)->Arg(512)->Arg(2048);

void BM_RenderPlot(benchmark::State& state) {
  WorkspaceState ws = create_workspace(noise_image(512, BitDepth::k8));
  for (std::int64_t i = 0; i < state.range(0); ++i) ws = add_overlay(ws, noise_image(256 + i, BitDepth::k8));
  for (auto _ : state) benchmark::DoNotOptimize(render_workspace_png(ws));
}
BENCHMARK(BM_RenderPlot)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
