#include "isotypy/embeddings.hpp"
#include "isotypy/json_io.hpp"
#include "isotypy/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace isotypy;

namespace {

EmbeddingProblem load_problem(const std::string& name) {
    return problem_from_json(load_json(fixture_root() + "/problems/" + name + ".json"));
}

// state.range(0) = thread count; 0 selects the serial reference.
void run(benchmark::State& state, const std::string& name) {
    EmbeddingProblem pr = load_problem(name);
    const int threads = static_cast<int>(state.range(0));
    if (threads > 0) omp_set_num_threads(threads);
    std::size_t count = 0;
    for (auto _ : state) {
        EmbeddingSolutionSet s = threads == 0 ? enumerate_serial(pr) : enumerate(pr);
        count = s.solutions.size();
        benchmark::DoNotOptimize(count);
    }
    state.counters["solutions"] = static_cast<double>(count);
}

void BM_co1(benchmark::State& state) { run(state, "co1_u"); }
void BM_bm(benchmark::State& state) { run(state, "bm_u"); }

}  // namespace

BENCHMARK(BM_co1)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_bm)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
