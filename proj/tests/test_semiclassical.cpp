#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/errors.hpp"
#include "zeno/quantization.hpp"
#include "zeno/semiclassical.hpp"
#include "zeno/symbols.hpp"

using namespace zeno;
using zeno_test::enumeration_oracle;
using zeno_test::forward_slopes;
using zeno_test::operator_product_symbol;

namespace {
const PhysicalParams unit_mass{1.0, 1.0};
}

TEST_SUITE("semiclassical") {

TEST_CASE("theta_zero: plateau and escape") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    const PhaseSpaceGrid ps{xg, make_grid(2.0, 8)};
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 16, xg, 0.1);

    // t = 0: (chi^(N))^{N+1} equals 1 exactly on the region
    const Symbol at0 = theta_zero(16, 0.0, moll, unit_mass, ps);
    for (std::size_t q = 0; q < ps.xi_axis.points; ++q) {
        CHECK(at0.at(static_cast<std::size_t>((0.5 + 8.0) / xg.spacing()), q) == cplx{1.0, 0.0});
        CHECK(at0.at(static_cast<std::size_t>((2.0 + 8.0) / xg.spacing()), q) == cplx{0.0, 0.0});
    }

    // all sample points of (x=0.25, xi=1, t=0.5) lie in the plateau
    const Symbol mid = theta_zero(16, 0.5, moll, unit_mass, ps);
    const std::size_t iq1 = 6;  // xi grid: -2 + 0.5 q -> q=6 is xi=1
    REQUIRE(ps.xi_axis.node(iq1) == doctest::Approx(1.0));
    CHECK(mid.at(static_cast<std::size_t>((0.25 + 8.0) / xg.spacing()), iq1) == cplx{1.0, 0.0});
}

TEST_CASE("hierarchy guards") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 16, xg, 0.1);
    CHECK_THROWS_AS(theta_hierarchy(16, 0.5, {1.0}, 4, moll, unit_mass, xg), guard_error);
    CHECK_THROWS_AS(theta_hierarchy(600, 0.5, {1.0}, 2, moll, unit_mass, xg), guard_error);
    const MollifiedIndicator thin = build_mollifier(Region{0.0, 1.0}, 16, xg, 0.01);
    CHECK_THROWS_AS(theta_hierarchy(16, 0.5, {1.0}, 2, thin, unit_mass, xg), guard_error);
}

TEST_CASE("J = 0 hierarchy equals theta_zero") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 8, xg, 0.12);
    const std::vector<double> xis{0.0, 0.6, -1.1};
    const SymbolHierarchy h = theta_hierarchy(8, 0.7, xis, 0, moll, unit_mass, xg);
    for (std::size_t ix = 0; ix < xis.size(); ++ix) {
        for (std::size_t i = 0; i < xg.points; ++i) {
            double prod = 1.0;
            for (std::size_t k = 0; k <= 8; ++k)
                prod *= moll(xg.node(i) + static_cast<double>(k) * 0.7 / 8.0 * xis[ix]);
            CHECK(std::abs(h.rows[ix][0][i] - prod) < 1e-12);
        }
    }
}

TEST_CASE("iterative accumulation equals the composition enumeration at N = 2, 3") {
    const SpatialGrid xg = make_grid(2.5, 256);
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 2, xg, 0.35);
    for (const std::size_t N : {std::size_t{2}, std::size_t{3}}) {
        for (const double xi : {0.7, 1.3, -0.9}) {
            const SymbolHierarchy h =
                theta_hierarchy(N, 0.8, {xi}, 2, moll, unit_mass, xg);
            const auto oracle = enumeration_oracle(xi, forward_slopes(N, 0.8), 2, moll, xg);
            for (std::size_t j = 0; j <= 2; ++j) {
                double dev = 0.0;
                for (std::size_t i = 0; i < xg.points; ++i)
                    dev = std::max(dev, std::abs(h.rows[0][j][i] - oracle[j][i]));
                CHECK(dev < 1e-10);
            }
        }
    }
}

TEST_CASE("series matches the operator-product oracle at order hbar^{J+1}") {
    // commensurate shift times: rho_1 = t dxi/(N m dx) is an integer at every
    // hbar in the sweep, so the U-conjugated matrix oracle is lattice-exact
    const SpatialGrid xg = make_grid(2.0, 1024);
    const std::size_t N = 2, J = 2;
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, N, xg, 0.45);
    const std::vector<double> hbars{0.2, 0.1, 0.05};
    const double t = static_cast<double>(N) * unit_mass.mass * xg.half_width * xg.spacing() /
                     (pi * hbars.back());
    std::vector<double> resids;
    for (const double h : hbars) {
        const PhysicalParams pp{h, 1.0};
        const Symbol oracle = operator_product_symbol(N, t, moll, pp, xg);
        const PhaseSpaceGrid ps = oracle.grid;
        double resid = 0.0;
        for (std::size_t q = 0; q < ps.xi_axis.points; ++q) {
            const double xi = ps.xi_axis.node(q);
            if (std::abs(xi) > 2.0) continue;
            const SymbolHierarchy hier = theta_hierarchy(N, t, {xi}, J, moll, pp, xg);
            for (std::size_t i = 0; i < xg.points; ++i) {
                cplx series{0.0, 0.0};
                double hp = 1.0;
                for (std::size_t j = 0; j <= J; ++j) {
                    series += hp * hier.rows[0][j][i];
                    hp *= h;
                }
                resid = std::max(resid, std::abs(series - oracle.at(i, q)));
            }
        }
        resids.push_back(resid);
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < hbars.size(); ++i) {
        const double lx = std::log(hbars[i]), ly = std::log(resids[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double n = static_cast<double>(hbars.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= static_cast<double>(J) + 0.7);
}

TEST_CASE("hermitian-symbol consistency: conjugate of the reversed product") {
    // for real cutoffs (f # g)* = g # f, so conj(Theta_j) must equal the j-th
    // coefficient of the product with the factor order reversed
    const SpatialGrid xg = make_grid(2.5, 256);
    const std::size_t N = 3, J = 2;
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, N, xg, 0.35);
    const double t = 0.6, xi = 0.8;
    const SymbolHierarchy fwd = theta_hierarchy(N, t, {xi}, J, moll, unit_mass, xg);
    std::vector<double> rev_slopes = forward_slopes(N, t);
    std::reverse(rev_slopes.begin(), rev_slopes.end());
    const auto rev = enumeration_oracle(xi, rev_slopes, J, moll, xg);
    double dev = 0.0;
    for (std::size_t j = 0; j <= J; ++j)
        for (std::size_t i = 0; i < xg.points; ++i)
            dev = std::max(dev, std::abs(std::conj(fwd.rows[0][j][i]) - rev[j][i]));
    CHECK(dev < 1e-10);
}

TEST_CASE("support inclusion: all orders vanish where the factors do") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 16, xg, 0.1);
    const double t = 0.9, xi = 1.0;  // partial overlap at this momentum
    const SymbolHierarchy h = theta_hierarchy(16, t, {xi}, 2, moll, unit_mass, xg);
    for (std::size_t i = 0; i < xg.points; ++i) {
        // nodes where every factor vanishes on a 2 dx neighborhood
        bool all_zero = true;
        for (std::size_t k = 0; k <= 16 && all_zero; ++k) {
            const double c = static_cast<double>(k) * t / 16.0;
            for (int off = -2; off <= 2 && all_zero; ++off) {
                const double x = xg.node(i) + off * xg.spacing() + c * xi;
                if (moll(x) != 0.0) all_zero = false;
            }
        }
        if (!all_zero) continue;
        for (std::size_t j = 0; j <= 2; ++j)
            CHECK(std::abs(h.rows[0][j][i]) <= support_floor);
    }
}

TEST_CASE("vanishing verdicts") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    const MollifiedIndicator moll = build_mollifier(Region{0.0, 1.0}, 16, xg, 0.1);

    // past the dilated escape time: exact zeros at every order
    const SymbolHierarchy past = theta_hierarchy(16, 1.3, {1.0}, 2, moll, unit_mass, xg);
    for (const auto& v : vanishing_verdict(past)) {
        CHECK(v.analytic_empty);
        CHECK(v.vanished);
        CHECK(v.sup_norm == 0.0);
        CHECK(v.consistent);
        CHECK(v.T_xi == doctest::Approx(1.0));
        CHECK(v.T_xi_N == doctest::Approx(1.2));
    }

    // t = 0: the plateau is present, nothing vanishes at order 0
    const SymbolHierarchy at0 = theta_hierarchy(16, 0.0, {1.0}, 2, moll, unit_mass, xg);
    const auto v0 = vanishing_verdict(at0);
    CHECK_FALSE(v0[0].vanished);
    CHECK(v0[0].sup_norm == 1.0);

    // xi = 0: no escape, verdict false at any time
    const SymbolHierarchy rest = theta_hierarchy(16, 5.0, {0.0}, 2, moll, unit_mass, xg);
    for (const auto& v : vanishing_verdict(rest)) {
        CHECK_FALSE(v.analytic_empty);
        CHECK(std::isnan(v.T_xi));
    }
    CHECK_FALSE(vanishing_verdict(rest)[0].vanished);
}

TEST_CASE("escape sweep: threshold detection and verdict uniformity") {
    const SpatialGrid xg = make_grid(8.0, 2048);
    std::vector<double> tgrid;
    for (double t = 1.0; t <= 1.5 + 1e-9; t += 0.02) tgrid.push_back(t);

    const EscapeSweepTable sweep = escape_sweep({16}, tgrid, {1.0}, 2, Region{0.0, 1.0},
                                                0.1, unit_mass, xg, 1e10);
    // detected t* within one grid step of T_xi + 2 eps m/|xi| = 1.2
    for (const auto& th : sweep.thresholds) {
        CHECK(std::abs(th.t_star - 1.2) <= 0.02 + 1e-12);
    }
    // verdicts identical across orders at every (t, xi)
    std::map<std::pair<std::size_t, double>, bool> by_cell;
    for (const auto& row : sweep.rows) {
        const auto key = std::make_pair(row.n_measurements, row.t);
        const auto it = by_cell.find(key);
        if (it == by_cell.end())
            by_cell[key] = row.verdict;
        else
            CHECK(it->second == row.verdict);
    }

    // halving eps halves the threshold excess over T_xi
    const EscapeSweepTable half = escape_sweep({16}, tgrid, {1.0}, 2, Region{0.0, 1.0},
                                               0.05, unit_mass, xg, 1e10);
    CHECK(half.thresholds.front().t_star == doctest::Approx(1.1).epsilon(0.02));

    CHECK_THROWS_AS(escape_sweep({16}, tgrid, {1.0}, 2, Region{0.0, 1.0}, 0.1, unit_mass,
                                 xg, 10.0),
                    guard_error);
}

}  // TEST_SUITE
