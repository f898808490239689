#include "zeno/verification.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "zeno/dynamics.hpp"
#include "zeno/fft.hpp"
#include "zeno/product_formula.hpp"
#include "zeno/quantization.hpp"
#include "zeno/semiclassical.hpp"
#include "zeno/symbols.hpp"
#include "zeno/table.hpp"

namespace zeno {

WaveFunction random_state(const SpatialGrid& grid, std::uint64_t seed, std::size_t modes) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> spec(grid.points, cplx{0.0, 0.0});
    const std::size_t m = std::min(modes, grid.points / 4);
    for (std::size_t i = 0; i < m; ++i) {
        spec[i] = cplx{dist(gen), dist(gen)};
        spec[grid.points - 1 - i] = cplx{dist(gen), dist(gen)};
    }
    fft::inverse(spec);
    return normalize(WaveFunction{grid, std::move(spec), Space::position, false});
}

namespace {

struct Suite {
    std::vector<CheckResult> results;
    void add(const std::string& name, double measured, double threshold,
             const std::string& note = "") {
        results.push_back({name, measured <= threshold, measured, threshold, note});
    }
    void add_flag(const std::string& name, bool pass, const std::string& note = "") {
        results.push_back({name, pass, pass ? 0.0 : 1.0, 0.5, note});
    }
};

double wf_distance(const WaveFunction& a, const WaveFunction& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * a.measure());
}

Symbol gaussian_symbol(const PhaseSpaceGrid& grid, double x0, double xi0, double sx, double sq) {
    Symbol s = zero_symbol(grid);
    for (std::size_t q = 0; q < grid.xi_axis.points; ++q)
        for (std::size_t i = 0; i < grid.x_axis.points; ++i) {
            const double x = grid.x_axis.node(i), xi = grid.xi_axis.node(q);
            s.at(i, q) = std::exp(-(x - x0) * (x - x0) / (2.0 * sx * sx) -
                                  (xi - xi0) * (xi - xi0) / (2.0 * sq * sq));
        }
    return s;
}

}  // namespace

std::vector<CheckResult> run_verification(const ExperimentConfig& cfg) {
    Suite suite;
    const SpatialGrid grid = spatial_grid(cfg);
    const PhysicalParams& pp = cfg.physical;

    // --- Fourier round trip and Parseval on random states, up to M = 4096 ---
    {
        double rt = 0.0, pv = 0.0;
        for (std::size_t M : {grid.points, std::size_t{4096}}) {
            const SpatialGrid g = make_grid(grid.half_width, M);
            for (int rep = 0; rep < 3; ++rep) {
                const WaveFunction psi = random_state(g, cfg.seed + 11 * rep + M);
                const WaveFunction hat = to_momentum(psi);
                const WaveFunction back = from_momentum(hat);
                for (std::size_t i = 0; i < M; ++i)
                    rt = std::max(rt, std::abs(back.values[i] - psi.values[i]));
                pv = std::max(pv, std::abs(norm_squared(hat) - norm_squared(psi)) /
                                      norm_squared(psi));
            }
        }
        suite.add("fourier_roundtrip_max", rt, 1e-12);
        suite.add("parseval_relative", pv, 1e-12);
    }

    // --- free propagator: unitarity and group law ---
    {
        const WaveFunction psi = random_state(grid, cfg.seed + 1);
        const double t = 0.437;
        const WaveFunction u1 = free_propagate(psi, t, pp);
        suite.add("propagator_unitarity", std::abs(norm(u1) - 1.0), 1e-12);
        const WaveFunction u2 = free_propagate(free_propagate(psi, 0.2, pp), t - 0.2, pp);
        suite.add("propagator_group_law", wf_distance(u1, u2), 1e-12);
    }

    // --- Wigner normalization and marginals on the configured state ---
    {
        const WaveFunction psi = initial_state(cfg);
        const PhaseSpaceGrid ps = commensurate_grid(grid, pp);
        const Symbol w = wigner_transform(psi, pp, ps);
        double total = 0.0;
        for (const auto& v : w.values) total += v.real();
        total *= ps.x_axis.spacing() * ps.xi_axis.spacing();
        suite.add("wigner_normalization", std::abs(total - norm_squared(psi)), 1e-8);
        double marg_err = 0.0;
        for (std::size_t i = 0; i < grid.points; ++i) {
            double m = 0.0;
            for (std::size_t q = 0; q < ps.xi_axis.points; ++q) m += w.at(i, q).real();
            m *= ps.xi_axis.spacing();
            marg_err = std::max(marg_err, std::abs(m - std::norm(psi.values[i])));
        }
        suite.add("wigner_marginal_x", marg_err, 1e-8);
    }

    // --- Dirichlet basis: Gram orthonormality and norm conservation ---
    {
        const DirichletBasis basis = build_dirichlet_basis(cfg.region, grid, pp);
        double gram = 0.0;
        const double dx = grid.spacing();
        const std::size_t probe = std::min<std::size_t>(basis.modes, 24);
        for (std::size_t k = 0; k < probe; ++k)
            for (std::size_t l = k; l < probe; ++l) {
                double s = 0.0;
                for (std::size_t i = 0; i < grid.points; ++i)
                    s += basis.phi[k][i] * basis.phi[l][i];
                s *= dx;
                gram = std::max(gram, std::abs(s - (k == l ? 1.0 : 0.0)));
            }
        suite.add("dirichlet_gram", gram, 1e-8);

        const WaveFunction psi = initial_state(cfg);
        const WaveFunction ev = dirichlet_evolve(psi, basis, 0.31, pp);
        const double before = basis_capture(psi, basis) * norm_squared(project(psi, cfg.region));
        suite.add("dirichlet_norm_conservation",
                  std::abs(norm_squared(ev) - before), 1e-8);
    }

    // --- mollifier exactness: sandwich, plateau/support, derivative bounds ---
    {
        const MollifiedIndicator moll = build_mollifier(cfg.region, 16, grid, 0.1);
        bool sandwich = true, plateau = true, supp = true, monotone = true;
        double prev = 0.0;
        for (std::size_t i = 0; i < grid.points; ++i) {
            const double x = grid.node(i);
            const double v = moll(x);
            const bool inside = x >= cfg.region.a && x <= cfg.region.b;
            const bool outside = x <= cfg.region.a - moll.eps || x >= cfg.region.b + moll.eps;
            if (v < 0.0 || v > 1.0) sandwich = false;
            if (inside && v != 1.0) plateau = false;
            if (outside && v != 0.0) supp = false;
            if (x > cfg.region.a - moll.eps && x <= cfg.region.a && v < prev) monotone = false;
            prev = v;
        }
        suite.add_flag("mollifier_sandwich", sandwich);
        suite.add_flag("mollifier_plateau_exact", plateau);
        suite.add_flag("mollifier_support_exact", supp);
        suite.add_flag("mollifier_monotone", monotone);

        // measured grid finite differences against C_p / eps^p
        const double c1 = 2.5, c2 = 16.0;
        double d1 = 0.0, d2 = 0.0;
        const double dx = grid.spacing();
        for (std::size_t i = 1; i + 1 < grid.points; ++i) {
            const double xm = moll(grid.node(i - 1)), x0 = moll(grid.node(i)),
                         xp = moll(grid.node(i + 1));
            d1 = std::max(d1, std::abs((xp - xm) / (2.0 * dx)));
            d2 = std::max(d2, std::abs((xp - 2.0 * x0 + xm) / (dx * dx)));
        }
        suite.add("mollifier_deriv1_bound", d1, c1 / moll.eps);
        suite.add("mollifier_deriv2_bound", d2, c2 / (moll.eps * moll.eps));
    }

    // --- shifted symbol vs Heisenberg transport (closed form, same formula) ---
    {
        const SpatialGrid xg = make_grid(4.0, 256);
        const PhaseSpaceGrid ps{xg, make_grid(2.0, 64)};
        const MollifiedIndicator moll = build_mollifier(cfg.region, 8, xg, 0.15);
        const std::size_t N = 4, k = 3;
        const double t = 0.7;
        const Symbol a = shifted_symbol(moll, k, N, t, pp, ps);
        const Symbol b = heisenberg_symbol(moll, static_cast<double>(k) * t /
                                                     static_cast<double>(N), pp, ps)
                             .symbol;
        double dev = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
        suite.add("shifted_vs_heisenberg", dev, 1e-12);
    }

    // --- projection: contraction, idempotence, mollified -> sharp ---
    {
        const WaveFunction psi = initial_state(cfg);
        const WaveFunction p1 = project(psi, cfg.region);
        suite.add_flag("projection_contraction", norm(p1) <= norm(psi) + 1e-15);
        suite.add("projection_idempotent", wf_distance(project(p1, cfg.region), p1), 0.0);
        double prev_dev = 1e300;
        bool monotone = true;
        for (const double eps : {0.2, 0.1, 0.05}) {
            const MollifiedIndicator m = build_mollifier(cfg.region, 8, grid, eps);
            const double dev = wf_distance(project(psi, m), p1);
            if (dev > prev_dev) monotone = false;
            prev_dev = dev;
        }
        suite.add_flag("mollified_to_sharp_convergence", monotone);
    }

    // --- star product parities on a small grid ---
    {
        const PhysicalParams qp{0.1, 1.0};
        const SpatialGrid xg = make_grid(3.2, 64);
        const PhaseSpaceGrid ps = commensurate_grid(xg, qp);
        const Symbol f = gaussian_symbol(ps, 0.0, 0.0, 0.5, 0.5);
        const Symbol g = gaussian_symbol(ps, 0.3, -0.2, 0.5, 0.5);
        double swap_dev = 0.0;
        for (std::size_t j : {1, 2}) {
            const Symbol fg = sharp_j(f, g, j);
            const Symbol gf = sharp_j(g, f, j);
            const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < fg.values.size(); ++i)
                swap_dev = std::max(swap_dev, std::abs(fg.values[i] - sgn * gf.values[i]));
        }
        suite.add("sharp_swap_parity", swap_dev, 1e-10);

        const GradedSymbol gf0 = graded_from_symbol(f, 2);
        const GradedSymbol gg0 = graded_from_symbol(g, 2);
        const GradedSymbol br = moyal_bracket_truncated(gf0, gg0, 2);
        suite.add("moyal_order0_zero", br.coeffs[0].max_abs(), 1e-12);

        // order-1 coefficient = i * sharp_1(f, g)
        const Symbol p1 = sharp_j(f, g, 1);
        double dev = 0.0;
        for (std::size_t i = 0; i < p1.values.size(); ++i)
            dev = std::max(dev, std::abs(br.coeffs[1].values[i] -
                                         cplx{0.0, 1.0} * p1.values[i]));
        suite.add("moyal_order1_poisson", dev, 1e-10);
    }

    // --- product formula accounting ---
    {
        const WaveFunction psi = initial_state(cfg);
        const Projector proj = build_projector(cfg, 16);
        const auto pf = product_formula_state(psi, 16, cfg.schedule.t.front(), proj, pp);
        bool chain = true;
        for (std::size_t i = 0; i + 1 < pf.norms.size(); ++i)
            if (pf.norms[i + 1] > pf.norms[i] + 1e-14) chain = false;
        suite.add_flag("contraction_chain", chain);
        suite.add("p_N_leak_consistency",
                  std::abs(norm_squared(pf.state) - (1.0 - pf.leaked_norm_sq)), 1e-10);

        const MollifiedIndicator moll = build_mollifier(cfg.region, 16, grid, cfg.projector.eps);
        double resid = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            WaveFunction r = random_state(grid, cfg.seed + 101 * rep);
            resid = std::max(resid, regularized_product_state(r, 16, cfg.schedule.t.front(),
                                                              moll, pp)
                                        .identity_residual);
        }
        suite.add("regularized_identity", resid, 1e-10);
    }

    // --- hierarchy: theta_0 plateau value, support inclusion, verdicts ---
    {
        const MollifiedIndicator moll = build_mollifier(cfg.region, 16, grid, 0.1);
        const std::vector<double> xi{1.0};
        const SymbolHierarchy h_in =
            theta_hierarchy(16, 0.5, xi, 2, moll, pp, grid);
        suite.add("theta0_plateau_sup", std::abs(h_in.sup_norms[0][0] - 1.0), 0.0);
        const SymbolHierarchy h_out =
            theta_hierarchy(16, 1.3, xi, 2, moll, pp, grid);
        double worst = 0.0;
        for (std::size_t j = 0; j <= 2; ++j) worst = std::max(worst, h_out.sup_norms[0][j]);
        suite.add("support_vanishing_past_escape", worst, support_floor);
        bool consistent = true;
        for (const auto& v : vanishing_verdict(h_out)) consistent = consistent && v.consistent;
        suite.add_flag("verdict_analytic_consistency", consistent);
    }

    // --- byte determinism of table output ---
    {
        ResultTable t1({"a", "b"}), t2({"a", "b"});
        for (ResultTable* t : {&t1, &t2}) {
            t->set_provenance({{"config_hash", fnv1a_hex(cfg.canonical_text)}});
            t->add_row({static_cast<std::int64_t>(1), 0.1 + 0.2});
            t->add_row({static_cast<std::int64_t>(2), 1.0 / 3.0});
        }
        std::ostringstream s1, s2;
        t1.write_csv(s1);
        t2.write_csv(s2);
        suite.add_flag("table_byte_determinism", s1.str() == s2.str());
    }

    return suite.results;
}

}  // namespace zeno
