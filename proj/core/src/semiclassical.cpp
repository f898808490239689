#include "zeno/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// jet slot bookkeeping: for coefficient q we carry D^{(a,b)} G_q, a+b <= J-q
struct JetLayout {
    std::size_t J;
    // pair list per q, and flat index
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
    JetLayout(std::size_t J_) : J(J_), pairs(J_ + 1) {
        for (std::size_t q = 0; q <= J; ++q)
            for (std::size_t a = 0; a + q <= J; ++a)
                for (std::size_t b = 0; a + b + q <= J; ++b)
                    pairs[q].emplace_back(a, b);
    }
    std::size_t index(std::size_t q, std::size_t a, std::size_t b) const {
        const auto& ps = pairs[q];
        for (std::size_t n = 0; n < ps.size(); ++n)
            if (ps[n].first == a && ps[n].second == b) return n;
        throw std::logic_error("jet slot out of range");
    }
};

/// One row of the hierarchy at fixed xi: all derivatives are closed-form, so
/// every additive term carries an exactly-supported cutoff factor per k and
/// the accumulated coefficients vanish bit-exactly off the common support.
std::vector<std::vector<cplx>> hierarchy_row(double xi, std::size_t N, double t, std::size_t J,
                                             const MollifiedIndicator& moll,
                                             const PhysicalParams& params,
                                             const SpatialGrid& xg) {
    const std::size_t Mx = xg.points;
    const JetLayout lay(J);

    // profile derivative fields chi^(p)(x + c_k xi), p = 0..J, for one factor
    auto factor_derivs = [&](std::size_t k) {
        const double c = static_cast<double>(k) * t / (static_cast<double>(N) * params.mass);
        std::vector<std::vector<double>> P(J + 1, std::vector<double>(Mx));
        for (std::size_t i = 0; i < Mx; ++i) {
            const auto d = moll.derivatives(xg.node(i) + c * xi, J);
            for (std::size_t p = 0; p <= J; ++p) P[p][i] = d[p];
        }
        return std::pair{P, c};
    };

    // init with theta_0
    std::vector<std::vector<std::vector<cplx>>> G(J + 1);
    for (std::size_t q = 0; q <= J; ++q)
        G[q].assign(lay.pairs[q].size(), std::vector<cplx>(Mx, cplx{0.0, 0.0}));
    {
        auto [P0, c0] = factor_derivs(0);
        (void)c0;
        for (std::size_t n = 0; n < lay.pairs[0].size(); ++n) {
            const auto [a, b] = lay.pairs[0][n];
            if (b == 0)
                for (std::size_t i = 0; i < Mx; ++i) G[0][n][i] = P0[a][i];
        }
    }

    // (i/2)^l / l!
    std::vector<cplx> coef(J + 1);
    {
        double lfact = 1.0;
        for (std::size_t l = 0; l <= J; ++l) {
            if (l > 0) lfact *= static_cast<double>(l);
            cplx il{1.0, 0.0};
            for (std::size_t p = 0; p < l; ++p) il *= cplx{0.0, 0.5};
            coef[l] = il / lfact;
        }
    }

    std::vector<std::vector<std::vector<cplx>>> newG(J + 1);
    for (std::size_t k = 1; k <= N; ++k) {
        auto [P, c] = factor_derivs(k);
        std::vector<double> cpow(2 * J + 1, 1.0);
        for (std::size_t p = 1; p <= 2 * J; ++p) cpow[p] = cpow[p - 1] * c;

        for (std::size_t q = 0; q <= J; ++q)
            newG[q].assign(lay.pairs[q].size(), std::vector<cplx>(Mx, cplx{0.0, 0.0}));

        for (std::size_t i_ord = 0; i_ord <= J; ++i_ord) {
            for (std::size_t n = 0; n < lay.pairs[i_ord].size(); ++n) {
                const auto [a, b] = lay.pairs[i_ord][n];
                auto& acc = newG[i_ord][n];
                for (std::size_t l = 0; l <= i_ord; ++l) {
                    const std::size_t q = i_ord - l;
                    for (std::size_t r = 0; r <= l; ++r) {
                        const double sgn = binom(l, r) * (((l - r) % 2 == 0) ? 1.0 : -1.0);
                        for (std::size_t m1 = 0; m1 <= a; ++m1)
                            for (std::size_t m2 = 0; m2 <= b; ++m2) {
                                const double cc = binom(a, m1) * binom(b, m2);
                                const std::size_t A = r + m1;           // d_x on theta_k
                                const std::size_t B = (l - r) + m2;     // d_xi on theta_k
                                const std::size_t ga = (a - m1) + (l - r);
                                const std::size_t gb = (b - m2) + r;
                                const cplx w = coef[l] * sgn * cc * cpow[B];
                                const auto& src = G[q][lay.index(q, ga, gb)];
                                const auto& prof = P[A + B];
                                for (std::size_t i = 0; i < Mx; ++i)
                                    acc[i] += w * prof[i] * src[i];
                            }
                    }
                }
            }
        }
        std::swap(G, newG);
    }

    std::vector<std::vector<cplx>> theta(J + 1);
    for (std::size_t j = 0; j <= J; ++j) theta[j] = std::move(G[j][lay.index(j, 0, 0)]);
    return theta;
}

}  // namespace

Symbol theta_zero(std::size_t N, double t, const MollifiedIndicator& moll,
                  const PhysicalParams& params, const PhaseSpaceGrid& grid) {
    validate(params);
    if (N < 1) throw config_error("theta_zero: N must be >= 1");
    Symbol out = zero_symbol(grid);
    const std::size_t Mx = grid.x_axis.points, Mq = grid.xi_axis.points;
    for (std::size_t q = 0; q < Mq; ++q) {
        const double xi = grid.xi_axis.node(q);
        for (std::size_t i = 0; i < Mx; ++i) {
            const double x = grid.x_axis.node(i);
            double prod = 1.0;
            for (std::size_t k = 0; k <= N && prod != 0.0; ++k) {
                const double c = static_cast<double>(k) * t /
                                 (static_cast<double>(N) * params.mass);
                prod *= moll(x + c * xi);
            }
            out.at(i, q) = prod;
        }
    }
    return out;
}

SymbolHierarchy theta_hierarchy(std::size_t N, double t, const std::vector<double>& xi_list,
                                std::size_t J, const MollifiedIndicator& moll,
                                const PhysicalParams& params, const SpatialGrid& x_grid) {
    validate(params);
    if (J > 3) throw guard_error("theta_hierarchy: order guard J <= 3");
    if (N < 1 || N > 512) throw guard_error("theta_hierarchy: N guard 1 <= N <= 512");
    // Coefficients are evaluated in closed form, so node values are exact at
    // any eps; the band must still span a few cells for reported sup norms and
    // support extents to be meaningful. The auto policy floors eps at 8 dx.
    if (moll.eps < 4.0 * x_grid.spacing())
        throw guard_error("theta_hierarchy: resolution guard eps >= 4 dx, eps = " +
                          std::to_string(moll.eps));
    if (xi_list.empty()) throw config_error("theta_hierarchy: empty xi list");

    SymbolHierarchy h;
    h.n_measurements = N;
    h.t = t;
    h.order = J;
    h.eps = moll.eps;
    h.region = moll.region;
    h.mass = params.mass;
    h.x_grid = x_grid;
    h.xi = xi_list;
    h.rows.reserve(xi_list.size());
    h.sup_norms.reserve(xi_list.size());
    h.support.reserve(xi_list.size());

    for (const double xi : xi_list) {
        auto theta = hierarchy_row(xi, N, t, J, moll, params, x_grid);
        std::vector<double> sups(J + 1, 0.0);
        std::vector<std::pair<double, double>> supp(J + 1, {nan_v, nan_v});
        for (std::size_t j = 0; j <= J; ++j) {
            std::size_t lo = x_grid.points, hi = 0;
            for (std::size_t i = 0; i < x_grid.points; ++i) {
                const double a = std::abs(theta[j][i]);
                sups[j] = std::max(sups[j], a);
                if (a > support_floor) {
                    lo = std::min(lo, i);
                    hi = std::max(hi, i);
                }
            }
            if (lo <= hi) supp[j] = {x_grid.node(lo), x_grid.node(hi)};
        }
        h.rows.push_back(std::move(theta));
        h.sup_norms.push_back(std::move(sups));
        h.support.push_back(std::move(supp));
    }
    return h;
}

GradedSymbol theta_hierarchy_full(std::size_t N, double t, std::size_t J,
                                  const MollifiedIndicator& moll, const PhysicalParams& params,
                                  const PhaseSpaceGrid& grid) {
    std::vector<double> xi(grid.xi_axis.points);
    for (std::size_t q = 0; q < xi.size(); ++q) xi[q] = grid.xi_axis.node(q);
    const SymbolHierarchy h = theta_hierarchy(N, t, xi, J, moll, params, grid.x_axis);
    GradedSymbol out{J, {}};
    out.coeffs.reserve(J + 1);
    for (std::size_t j = 0; j <= J; ++j) {
        Symbol s = zero_symbol(grid);
        for (std::size_t q = 0; q < xi.size(); ++q)
            for (std::size_t i = 0; i < grid.x_axis.points; ++i)
                s.at(i, q) = h.rows[q][j][i];
        out.coeffs.push_back(std::move(s));
    }
    return out;
}

std::vector<VanishingVerdict> vanishing_verdict(const SymbolHierarchy& h) {
    std::vector<VanishingVerdict> out;
    out.reserve(h.xi.size() * (h.order + 1));
    for (std::size_t ix = 0; ix < h.xi.size(); ++ix) {
        const double xi = h.xi[ix];
        double T = nan_v, TN = nan_v;
        bool empty = false;
        if (xi != 0.0) {
            const double axi = std::abs(xi);
            T = h.mass * h.region.diameter() / axi;
            TN = h.mass * (h.region.diameter() + 2.0 * h.eps) / axi;
            empty = h.t > TN;
        }
        for (std::size_t j = 0; j <= h.order; ++j) {
            VanishingVerdict v;
            v.order_j = j;
            v.xi = xi;
            v.sup_norm = h.sup_norms[ix][j];
            v.vanished = v.sup_norm <= support_floor;
            v.analytic_empty = empty;
            v.T_xi = T;
            v.T_xi_N = TN;
            v.consistent = !empty || v.vanished;
            out.push_back(v);
        }
    }
    return out;
}

EscapeSweepTable escape_sweep(const std::vector<std::size_t>& N_list,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& xi_list, std::size_t J,
                              const Region& region, std::optional<double> eps_override,
                              const PhysicalParams& params, const SpatialGrid& x_grid,
                              double budget) {
    if (N_list.empty() || t_grid.empty() || xi_list.empty())
        throw config_error("escape_sweep: empty sweep axis");
    double work = 0.0;
    for (const std::size_t N : N_list)
        work += static_cast<double>(x_grid.points) * static_cast<double>(xi_list.size()) *
                static_cast<double>(N) * static_cast<double>((J + 1) * (J + 1)) *
                static_cast<double>(t_grid.size());
    if (work > budget)
        throw guard_error("escape_sweep: estimated work " + std::to_string(work) +
                          " exceeds budget " + std::to_string(budget));

    EscapeSweepTable table;
    table.estimated_work = work;
    table.eps_min = 1e300;
    table.eps_max = 0.0;
    for (const std::size_t N : N_list) {
        const MollifiedIndicator moll = build_mollifier(region, N, x_grid, eps_override);
        table.eps_min = std::min(table.eps_min, moll.eps);
        table.eps_max = std::max(table.eps_max, moll.eps);
        // t_star per (j, xi): first sweep time with verdict true
        std::vector<std::vector<double>> tstar(J + 1,
                                               std::vector<double>(xi_list.size(), nan_v));
        for (const double t : t_grid) {
            const SymbolHierarchy h = theta_hierarchy(N, t, xi_list, J, moll, params, x_grid);
            const auto verdicts = vanishing_verdict(h);
            for (std::size_t ix = 0; ix < xi_list.size(); ++ix)
                for (std::size_t j = 0; j <= J; ++j) {
                    const auto& v = verdicts[ix * (J + 1) + j];
                    EscapeSweepRow row;
                    row.n_measurements = N;
                    row.order_j = j;
                    row.xi = v.xi;
                    row.t = t;
                    row.sup_norm = v.sup_norm;
                    row.support_lo = h.support[ix][j].first;
                    row.support_hi = h.support[ix][j].second;
                    row.verdict = v.vanished;
                    row.T_xi = v.T_xi;
                    row.T_xi_N = v.T_xi_N;
                    table.rows.push_back(row);
                    if (v.vanished && std::isnan(tstar[j][ix])) tstar[j][ix] = t;
                }
        }
        for (std::size_t j = 0; j <= J; ++j)
            for (std::size_t ix = 0; ix < xi_list.size(); ++ix)
                table.thresholds.push_back(
                    ThresholdTime{N, j, xi_list[ix], tstar[j][ix], moll.eps});
    }
    return table;
}

}  // namespace zeno
