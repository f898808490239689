#include <doctest.h>

#include <cmath>

#include "zeno/dynamics.hpp"
#include "zeno/errors.hpp"
#include "zeno/symbols.hpp"

using namespace zeno;

TEST_SUITE("symbols") {

TEST_CASE("region basics") {
    const Region r{0.0, 1.0};
    CHECK(r.diameter() == 1.0);
    const Region d = r.dilation(0.1);
    CHECK(d.a == doctest::Approx(-0.1));
    CHECK(d.b == doctest::Approx(1.1));
    CHECK_THROWS_AS(validate(Region{1.0, 0.0}), config_error);
}

TEST_CASE("mollifier plateau and support are exact") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, g, 0.1);
    CHECK(m(0.5) == 1.0);
    CHECK(m(0.0) == 1.0);
    CHECK(m(1.0) == 1.0);
    CHECK(m(-0.2) == 0.0);
    CHECK(m(-0.1) == 0.0);   // exactly at the band endpoint
    CHECK(m(1.1) == 0.0);
    CHECK(m(2.0) == 0.0);
    const double v = m(-0.05);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("mollifier transition is strictly monotone between neighbors") {
    const SpatialGrid g = make_grid(8.0, 2048);
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, g, 0.1);
    double prev = 0.0;
    for (double x = -0.1; x <= 0.0; x += g.spacing() / 4.0) {
        const double v = m(x);
        CHECK(v >= prev);
        prev = v;
    }
    // strictly increasing well inside the band
    CHECK(m(-0.04) > m(-0.05));
    CHECK(m(-0.05) > m(-0.06));
}

TEST_CASE("sandwich between sharp indicators") {
    const SpatialGrid g = make_grid(8.0, 1024);
    const Region omega{0.0, 1.0};
    const MollifiedIndicator m = build_mollifier(omega, 16, g, 0.1);
    for (std::size_t i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        const double lo = (x >= omega.a && x <= omega.b) ? 1.0 : 0.0;
        const double hi = (x >= omega.a - m.eps && x <= omega.b + m.eps) ? 1.0 : 0.0;
        const double v = m(x);
        CHECK(v >= lo);
        CHECK(v <= hi);
    }
}

TEST_CASE("eps policy: cubic schedule with grid floor") {
    const SpatialGrid g = make_grid(8.0, 2048);  // dx = 0.0078125
    const MollifiedIndicator coarse = build_mollifier(Region{0.0, 1.0}, 2, g);
    CHECK(coarse.eps == doctest::Approx(0.125));  // 1/8 > 8 dx
    const MollifiedIndicator fine = build_mollifier(Region{0.0, 1.0}, 64, g);
    CHECK(fine.eps == doctest::Approx(8.0 * g.spacing()));  // floor engaged
    const MollifiedIndicator forced = build_mollifier(Region{0.0, 1.0}, 64, g, 0.3);
    CHECK(forced.eps == 0.3);
    CHECK_THROWS_AS(build_mollifier(Region{0.0, 1.0}, 4, g, -0.1), config_error);
}

TEST_CASE("degenerate flag for wide transitions") {
    const SpatialGrid g = make_grid(8.0, 256);
    CHECK(build_mollifier(Region{0.0, 1.0}, 4, g, 0.6).degenerate);
    CHECK_FALSE(build_mollifier(Region{0.0, 1.0}, 4, g, 0.2).degenerate);
}

TEST_CASE("derivatives vanish identically off the transition bands") {
    const SpatialGrid g = make_grid(8.0, 256);
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, g, 0.1);
    for (const double x : {-0.3, -0.1, 0.0, 0.5, 1.0, 1.1, 1.7}) {
        const auto d = m.derivatives(x, 4);
        for (std::size_t p = 1; p <= 4; ++p) CHECK(d[p] == 0.0);
    }
    // inside the band the first derivative is positive (rising side)
    CHECK(m.derivatives(-0.05, 1)[1] > 0.0);
    CHECK(m.derivatives(1.05, 1)[1] < 0.0);
}

TEST_CASE("jet derivatives agree with finite differences") {
    const SpatialGrid g = make_grid(8.0, 256);
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, g, 0.2);
    const double h = 1e-6;
    for (const double x : {-0.13, -0.07, 1.04, 1.16}) {
        const auto d = m.derivatives(x, 2);
        const double fd1 = (m(x + h) - m(x - h)) / (2.0 * h);
        const double fd2 = (m(x + h) - 2.0 * m(x) + m(x - h)) / (h * h);
        CHECK(d[1] == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(d[2] == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("symbol from mollifier is xi independent") {
    const SpatialGrid xg = make_grid(4.0, 128);
    const PhaseSpaceGrid ps{xg, make_grid(2.0, 32)};
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, xg, 0.1);
    const Symbol s = symbol_from_mollifier(m, ps);
    for (std::size_t i = 0; i < xg.points; ++i)
        for (std::size_t q = 1; q < ps.xi_axis.points; ++q)
            CHECK(s.at(i, q) == s.at(i, 0));
    // plateau rows exactly 1, outside exactly 0
    for (std::size_t q = 0; q < ps.xi_axis.points; ++q) {
        CHECK(s.at(static_cast<std::size_t>((0.5 + 4.0) / xg.spacing()), q) == cplx{1.0, 0.0});
        CHECK(s.at(static_cast<std::size_t>((2.0 + 4.0) / xg.spacing()), q) == cplx{0.0, 0.0});
    }

    const PhaseSpaceGrid tiny{make_grid(0.5, 16), make_grid(2.0, 32)};
    CHECK_THROWS_AS(symbol_from_mollifier(m, tiny), guard_error);
}

TEST_CASE("shifted symbol") {
    const SpatialGrid xg = make_grid(8.0, 256);
    const PhaseSpaceGrid ps{xg, make_grid(2.0, 64)};
    const PhysicalParams pp{1.0, 1.0};
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 4, xg, 0.1);

    const Symbol base = symbol_from_mollifier(m, ps);
    const Symbol k0 = shifted_symbol(m, 0, 4, 1.0, pp, ps);
    for (std::size_t i = 0; i < base.values.size(); ++i)
        CHECK(k0.values[i] == base.values[i]);

    // xi = 0 row equals the unshifted row for any k
    const Symbol kN = shifted_symbol(m, 4, 4, 1.0, pp, ps);
    const std::size_t zero_row = ps.xi_axis.points / 2;
    CHECK(ps.xi_axis.node(zero_row) == 0.0);
    for (std::size_t i = 0; i < xg.points; ++i)
        CHECK(kN.at(i, zero_row) == base.at(i, zero_row));

    // k=2, N=4, t=1, xi=1, x=0 -> chi(0.5) = 1
    const Symbol k2 = shifted_symbol(m, 2, 4, 1.0, pp, ps);
    const std::size_t ix = static_cast<std::size_t>((0.0 + 8.0) / xg.spacing());
    const std::size_t iq = static_cast<std::size_t>((1.0 + 2.0) / ps.xi_axis.spacing());
    REQUIRE(ps.xi_axis.node(iq) == doctest::Approx(1.0));
    CHECK(k2.at(ix, iq) == cplx{1.0, 0.0});

    CHECK_THROWS_AS(shifted_symbol(m, 5, 4, 1.0, pp, ps), config_error);
}

TEST_CASE("escape times") {
    const PhysicalParams pp{1.0, 1.0};
    const Region omega{0.0, 1.0};
    const EscapeTimes e0 = escape_time(omega, pp, 2.0, 0.0);
    CHECK(e0.T_xi == doctest::Approx(0.5));
    CHECK(e0.T_xi_N == doctest::Approx(0.5));
    const EscapeTimes e1 = escape_time(omega, pp, 2.0, 0.1);
    CHECK(e1.T_xi_N == doctest::Approx(0.6));
    CHECK(e1.T_xi_N >= e1.T_xi);
    CHECK_THROWS_AS(escape_time(omega, pp, 0.0, 0.1), config_error);
}

TEST_CASE("shifted symbol equals transported mollifier symbol") {
    // same formula through two code paths, pointwise to 1e-12
    const SpatialGrid xg = make_grid(8.0, 512);
    const PhaseSpaceGrid ps{xg, make_grid(2.0, 64)};
    const PhysicalParams pp{0.5, 2.0};
    const MollifiedIndicator m = build_mollifier(Region{0.0, 1.0}, 8, xg, 0.15);
    const std::size_t N = 8, k = 5;
    const double t = 0.9;
    const Symbol a = shifted_symbol(m, k, N, t, pp, ps);
    const Symbol b =
        heisenberg_symbol(m, static_cast<double>(k) * t / static_cast<double>(N), pp, ps).symbol;
    double dev = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
    CHECK(dev < 1e-12);
}

}  // TEST_SUITE
