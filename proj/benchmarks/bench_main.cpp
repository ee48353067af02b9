#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "paceloop/engine.hpp"
#include "paceloop/mel.hpp"
#include "paceloop/pace.hpp"
#include "paceloop/scorer.hpp"
#include "paceloop/segmentation.hpp"
#include "paceloop/synth.hpp"

namespace {

using namespace paceloop;

const SynthMeal& bench_meal() {
    static const SynthMeal meal = [] {
        SynthMealSpec spec;
        spec.duration_s = 30.0;
        spec.seed = 42;
        return synth_meal(spec);
    }();
    return meal;
}

CandidateSegment bench_segment() {
    const SessionConfig config;
    AudioBuffer buffer;
    buffer.append(bench_meal().samples);
    Segmenter segmenter(config);
    for (const auto& frame : frame_levels(bench_meal().samples, config)) {
        if (const auto bounds = segmenter.step(frame)) {
            return extract_clip(buffer, 0, *bounds, config);
        }
    }
    return CandidateSegment{0, 0.0, 0.4, std::vector<float>(6400, 0.1f)};
}

void BM_FrameLevels(benchmark::State& state) {
    const SessionConfig config;
    const std::span<const float> window{bench_meal().samples.data(), 48000};
    for (auto _ : state) {
        benchmark::DoNotOptimize(frame_levels(window, config));
    }
}
BENCHMARK(BM_FrameLevels);

void BM_LogMel(benchmark::State& state) {
    const SessionConfig config;
    const CandidateSegment segment = bench_segment();
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_mel(segment.clip, config));
    }
}
BENCHMARK(BM_LogMel);

void BM_HeuristicScore(benchmark::State& state) {
    const CandidateSegment segment = bench_segment();
    const HeuristicScorer scorer;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scorer.score(segment));
    }
}
BENCHMARK(BM_HeuristicScore);

void BM_PaceStep(benchmark::State& state) {
    const SessionConfig config;
    for (auto _ : state) {
        PaceTracker tracker(config);
        for (int i = 0; i < 100; ++i) {
            benchmark::DoNotOptimize(tracker.on_chew(0.45 * (i + 1)));
        }
    }
}
BENCHMARK(BM_PaceStep);

// One full 3 s window through the whole loop, amortized over a meal.
void BM_EngineWindow(benchmark::State& state) {
    const SessionConfig config;
    const auto& samples = bench_meal().samples;
    for (auto _ : state) {
        StreamEngine engine(config, nullptr, nullptr);
        engine.push_samples(samples);
        engine.finish();
        benchmark::DoNotOptimize(engine.summary());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(samples.size() / 48000));
}
BENCHMARK(BM_EngineWindow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
