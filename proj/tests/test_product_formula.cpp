#include <doctest.h>

#include <cmath>

#include "zeno/errors.hpp"
#include "zeno/product_formula.hpp"
#include "zeno/verification.hpp"

using namespace zeno;

namespace {

const PhysicalParams pp{0.05, 1.0};
const Region omega{0.0, 1.0};

WaveFunction reference_packet(const SpatialGrid& g) {
    WaveFunction psi = zero_state(g);
    const double sig = 0.08, x0 = 0.5;
    const double amp = std::pow(2.0 * pi * sig * sig, -0.25);
    for (std::size_t i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        psi.values[i] = amp * std::exp(-(x - x0) * (x - x0) / (4.0 * sig * sig));
    }
    return normalize(std::move(psi));
}

double wf_distance(const WaveFunction& a, const WaveFunction& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * a.measure());
}

// localized smooth random state: band-limited noise under a wide bump window
WaveFunction localized_random(const SpatialGrid& g, std::uint64_t seed) {
    WaveFunction psi = random_state(g, seed, 48);
    const MollifiedIndicator window = build_mollifier(Region{-5.0, 5.0}, 4, g, 1.5);
    for (std::size_t i = 0; i < g.points; ++i) psi.values[i] *= window(g.node(i));
    return normalize(std::move(psi));
}

}  // namespace

TEST_SUITE("product_formula") {

TEST_CASE("t = 0 with a sharp projector is projection only") {
    const SpatialGrid g = make_grid(8.0, 512);
    const WaveFunction psi = reference_packet(g);
    const Projector proj = sharp_projector(omega);
    const auto res = product_formula_state(psi, 8, 0.0, proj, pp);
    CHECK(wf_distance(res.state, project(psi, omega)) < 1e-14);
}

TEST_CASE("state supported outside the dilation is annihilated") {
    const SpatialGrid g = make_grid(8.0, 512);
    WaveFunction far = zero_state(g);
    for (std::size_t i = 0; i < g.points; ++i)
        if (g.node(i) > 3.0 && g.node(i) < 4.0) far.values[i] = 1.0;
    far = normalize(std::move(far));
    const MollifiedIndicator moll = build_mollifier(omega, 8, g, 0.1);
    const auto res = product_formula_state(far, 4, 0.1, mollified_projector(moll), pp);
    CHECK(norm(res.state) == 0.0);
}

TEST_CASE("contraction chain and leak accounting") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const WaveFunction psi = reference_packet(g);
    const auto res = product_formula_state(psi, 32, 0.3, sharp_projector(omega), pp);
    for (std::size_t i = 0; i + 1 < res.norms.size(); ++i)
        CHECK(res.norms[i + 1] <= res.norms[i] + 1e-14);
    CHECK(std::abs(norm_squared(res.state) - (1.0 - res.leaked_norm_sq)) < 1e-10);
    CHECK(std::abs(norm(res.normalized_state()) - 1.0) < 1e-13);
}

TEST_CASE("survival probability") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const WaveFunction psi = reference_packet(g);
    const Projector proj = sharp_projector(omega);

    const double p0 = survival_probability(psi, 8, 0.0, proj, pp);
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-8));  // packet tails beyond [0,1] only

    const double p = survival_probability(psi, 16, 0.3, proj, pp);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-12);

    WaveFunction unnorm = psi;
    for (auto& v : unnorm.values) v *= 0.7;
    CHECK_THROWS_AS(survival_probability(unnorm, 8, 0.1, proj, pp), config_error);
}

TEST_CASE("survival probability increases toward 1 with N") {
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = reference_packet(g);
    const Projector proj = sharp_projector(omega);
    double prev = -1.0;
    for (const std::size_t N : {std::size_t{8}, std::size_t{32}, std::size_t{128}}) {
        const double p = survival_probability(psi, N, 0.3, proj, pp);
        CHECK(p > prev);
        prev = p;
    }
    CHECK(1.0 - prev < 0.05);
}

TEST_CASE("zeno error decreases with N") {
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = reference_packet(g);
    const DirichletBasis basis = build_dirichlet_basis(omega, g, pp);
    const Projector proj = sharp_projector(omega);
    double prev = 1e300;
    for (const std::size_t N : {std::size_t{8}, std::size_t{32}, std::size_t{128}}) {
        const double e = zeno_error(psi, N, 0.3, proj, pp, basis);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("zeno error at t = 0 is the basis-capture residual") {
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = reference_packet(g);
    const DirichletBasis basis = build_dirichlet_basis(omega, g, pp);
    const double e0 = zeno_error(psi, 4, 0.0, sharp_projector(omega), pp, basis);
    CHECK(e0 < 1e-4);
}

TEST_CASE("sharp and mollified projections converge to each other") {
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = reference_packet(g);
    const DirichletBasis basis = build_dirichlet_basis(omega, g, pp);
    const double e_sharp = zeno_error(psi, 16, 0.3, sharp_projector(omega), pp, basis);
    double prev = 1e300;
    for (const double eps : {0.2, 0.1, 0.05}) {
        const MollifiedIndicator m = build_mollifier(omega, 16, g, eps);
        const double e_moll = zeno_error(psi, 16, 0.3, mollified_projector(m), pp, basis);
        const double gap = std::abs(e_moll - e_sharp);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("regularized product formula: operator identity holds to rounding") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const MollifiedIndicator moll = build_mollifier(omega, 32, g);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const WaveFunction psi = localized_random(g, 1000 + rep);
        const auto res = regularized_product_state(psi, 32, 0.3, moll, pp);
        worst = std::max(worst, res.identity_residual);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("regularized product at t = 0 is the (N+1)-fold cutoff") {
    const SpatialGrid g = make_grid(8.0, 512);
    const WaveFunction psi = reference_packet(g);
    const std::size_t N = 4;
    const MollifiedIndicator moll = build_mollifier(omega, N, g, 0.15);
    const auto res = regularized_product_state(psi, N, 0.0, moll, pp);
    WaveFunction expect = psi;
    for (std::size_t k = 0; k <= N; ++k) expect = project(expect, moll);
    CHECK(wf_distance(res.state, expect) < 1e-13);
}

TEST_CASE("dropping the final unitary preserves the norm") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const WaveFunction psi = reference_packet(g);
    const std::size_t N = 16;
    const double t = 0.3;
    const MollifiedIndicator moll = build_mollifier(omega, N, g);
    const auto reg = regularized_product_state(psi, N, t, moll, pp);
    const auto plain =
        product_formula_state(psi, N, t, mollified_projector(moll), pp);
    CHECK(std::abs(norm(reg.state) - norm(plain.state)) < 1e-12);
}

TEST_CASE("unitary equivalence: regularized distance equals the zeno error") {
    // || V~_N psi - U(-t) e^{-i t H_Omega/hbar} P psi || = e_N by unitarity
    const SpatialGrid g = make_grid(8.0, 2048);
    const WaveFunction psi = reference_packet(g);
    const std::size_t N = 16;
    const double t = 0.3;
    const DirichletBasis basis = build_dirichlet_basis(omega, g, pp);
    const MollifiedIndicator moll = build_mollifier(omega, N, g);
    const Projector proj = mollified_projector(moll);

    const double eN = zeno_error(psi, N, t, proj, pp, basis);
    const auto reg = regularized_product_state(psi, N, t, moll, pp);
    const WaveFunction back =
        free_propagate(dirichlet_evolve(psi, basis, t, pp), -t, pp);
    const double dist = wf_distance(reg.state, back);
    CHECK(dist == doctest::Approx(eN).epsilon(1e-10));
}

}  // TEST_SUITE
