// Parallel kernels against their serial references on a corpus made of
// repeated copies of the fixture articles.

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>

#include "hemeroteca/app/workspace.hpp"
#include "hemeroteca/corpus/index.hpp"
#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/lingpipe/pipeline.hpp"
#include "hemeroteca/vocab/term_frequency.hpp"

using namespace hemeroteca;

namespace {

app::Workspace& workspace() {
    static app::Workspace ws = [] {
        app::Config c;
        c.resources_dir = HEMEROTECA_RESOURCES;
        return app::Workspace(c.resolve());
    }();
    return ws;
}

std::vector<corpus::Article> articles(std::size_t copies) {
    static std::vector<corpus::Article> base = [] {
        std::vector<corpus::Article> out;
        std::ifstream in(std::string(HEMEROTECA_FIXTURES) + "/corpus.jsonl");
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) out.push_back(corpus::article_from_json(nlohmann::json::parse(line)));
        return out;
    }();
    std::vector<corpus::Article> out;
    out.reserve(base.size() * copies);
    for (std::size_t k = 0; k < copies; ++k)
        for (auto a : base) {
            a.id += "-" + std::to_string(k);
            out.push_back(std::move(a));
        }
    return out;
}

std::vector<events::ClimateEvent> random_events(std::size_t n) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lat(-55, 30), lon(-115, -35);
    std::vector<events::ClimateEvent> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].id = "ev-" + std::to_string(i);
        out[i].date = PartialDate(1800 + static_cast<int>(i % 100));
        for (int p = 0; p < 3; ++p) out[i].scope.push_back({"p", lon(rng), lat(rng), "XX"});
    }
    return out;
}

template <auto Kernel>
void BM_index(benchmark::State& state) {
    const auto docs = articles(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(docs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

template <auto Kernel>
void BM_pipeline(benchmark::State& state) {
    const auto docs = articles(static_cast<std::size_t>(state.range(0)));
    const auto res = workspace().pipeline_resources();
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(docs, res));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

template <auto Kernel>
void BM_tf(benchmark::State& state) {
    const auto docs = articles(static_cast<std::size_t>(state.range(0)));
    const auto& stoplist = workspace().stoplist();
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(docs, &stoplist));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

template <auto Kernel>
void BM_heatmap(benchmark::State& state) {
    const auto evs = random_events(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(evs, 0.5, events::kLatinAmerica));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(evs.size()));
}

}  // namespace

BENCHMARK(BM_index<corpus::build_index>)->Name("build_index/parallel")->Arg(10)->Arg(40);
BENCHMARK(BM_index<corpus::build_index_serial>)->Name("build_index/serial")->Arg(10)->Arg(40);
BENCHMARK(BM_pipeline<lingpipe::run_pipeline>)->Name("run_pipeline/parallel")->Arg(4)->Arg(16);
BENCHMARK(BM_pipeline<lingpipe::run_pipeline_serial>)->Name("run_pipeline/serial")->Arg(4)->Arg(16);
BENCHMARK(BM_tf<vocab::build_tf_matrix>)->Name("build_tf_matrix/parallel")->Arg(10)->Arg(40);
BENCHMARK(BM_tf<vocab::build_tf_matrix_serial>)->Name("build_tf_matrix/serial")->Arg(10)->Arg(40);
BENCHMARK(BM_heatmap<events::heatmap>)->Name("heatmap/parallel")->Arg(10000)->Arg(100000);
BENCHMARK(BM_heatmap<events::heatmap_serial>)->Name("heatmap/serial")->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
