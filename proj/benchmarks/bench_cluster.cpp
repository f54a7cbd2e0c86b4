#include <benchmark/benchmark.h>

#include <vector>

#include "emograph/cluster.hpp"
#include "emograph/graph.hpp"
#include "emograph/rng.hpp"

namespace {

using namespace emograph;

std::vector<Vector> random_features(std::size_t count, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = rng.uniform(-1.0, 1.0);
        out.push_back(std::move(v));
    }
    return out;
}

void BM_BuildClusters(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const ConversationGraph g = ConversationGraph::build(n);
    const std::vector<Vector> features = random_features(g.node_count(), 32, 42);
    const ClusterConfig cfg{8, 0.3, NeighborhoodConfig{}};
    for (auto _ : state) {
        for (std::uint32_t o = 0; o < g.node_count(); ++o) {
            benchmark::DoNotOptimize(build_clusters(g, o, features, cfg));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_AngularSimilarity(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const std::vector<Vector> features = random_features(2, dim, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(angular_similarity(features[0], features[1]));
    }
}

}  // namespace

BENCHMARK(BM_BuildClusters)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_AngularSimilarity)->Arg(16)->Arg(64)->Arg(256);
