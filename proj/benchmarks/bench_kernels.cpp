#include <benchmark/benchmark.h>

#include <cmath>

#include "zeno/dynamics.hpp"
#include "zeno/product_formula.hpp"
#include "zeno/quantization.hpp"
#include "zeno/semiclassical.hpp"
#include "zeno/symbols.hpp"

using namespace zeno;

namespace {

const PhysicalParams pp{0.05, 1.0};
const Region omega{0.0, 1.0};

WaveFunction packet(const SpatialGrid& g) {
    WaveFunction psi = zero_state(g);
    const double amp = std::pow(2.0 * pi * 0.08 * 0.08, -0.25);
    for (std::size_t i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        psi.values[i] = amp * std::exp(-(x - 0.5) * (x - 0.5) / (4.0 * 0.08 * 0.08));
    }
    return normalize(std::move(psi));
}

}  // namespace

static void BM_FreePropagate(benchmark::State& state) {
    const SpatialGrid g = make_grid(8.0, static_cast<std::size_t>(state.range(0)));
    WaveFunction psi = packet(g);
    for (auto _ : state) {
        psi = free_propagate(psi, 1e-4, pp);
        benchmark::DoNotOptimize(psi.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FreePropagate)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_ProductFormula(benchmark::State& state) {
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = packet(g);
    const Projector proj = sharp_projector(omega);
    const std::size_t N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto res = product_formula_state(psi, N, 0.3, proj, pp);
        benchmark::DoNotOptimize(res.state.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProductFormula)->RangeMultiplier(4)->Range(8, 512)->Complexity();

static void BM_HierarchyRow(benchmark::State& state) {
    const SpatialGrid g = make_grid(8.0, 2048);
    const MollifiedIndicator moll = build_mollifier(omega, 16, g, 0.1);
    const std::size_t N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto h = theta_hierarchy(N, 0.9, {1.0}, 2, moll, pp, g);
        benchmark::DoNotOptimize(h.rows.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HierarchyRow)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_SharpJ(benchmark::State& state) {
    const std::size_t M = static_cast<std::size_t>(state.range(0));
    const PhaseSpaceGrid ps{make_grid(3.2, M), make_grid(3.2, M)};
    Symbol f = zero_symbol(ps), g = zero_symbol(ps);
    for (std::size_t q = 0; q < M; ++q)
        for (std::size_t i = 0; i < M; ++i) {
            const double x = ps.x_axis.node(i), xi = ps.xi_axis.node(q);
            f.at(i, q) = std::exp(-(x * x + xi * xi) / 0.5);
            g.at(i, q) = std::exp(-((x - 0.3) * (x - 0.3) + xi * xi) / 0.5);
        }
    for (auto _ : state) {
        Symbol out = sharp_j(f, g, 2);
        benchmark::DoNotOptimize(out.values.data());
    }
}
BENCHMARK(BM_SharpJ)->RangeMultiplier(2)->Range(64, 256);

static void BM_WeylQuantize(benchmark::State& state) {
    const std::size_t M = static_cast<std::size_t>(state.range(0));
    const PhysicalParams qp{0.1, 1.0};
    const PhaseSpaceGrid ps = commensurate_grid(make_grid(3.2, M), qp);
    Symbol f = zero_symbol(ps);
    for (std::size_t q = 0; q < M; ++q)
        for (std::size_t i = 0; i < M; ++i) {
            const double x = ps.x_axis.node(i), xi = ps.xi_axis.node(q);
            f.at(i, q) = std::exp(-(x * x + xi * xi) / 0.5);
        }
    for (auto _ : state) {
        OperatorMatrix a = weyl_quantize(f, qp);
        benchmark::DoNotOptimize(a.entries.data());
    }
}
BENCHMARK(BM_WeylQuantize)->RangeMultiplier(2)->Range(64, 256);

BENCHMARK_MAIN();
