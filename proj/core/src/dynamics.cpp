#include "zeno/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeno/errors.hpp"
#include "zeno/fft.hpp"

namespace zeno {

namespace {

inline long signed_freq(std::size_t m, std::size_t M) {
    return m < M / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(M);
}

}  // namespace

WaveFunction free_propagate(const WaveFunction& psi, double t, const PhysicalParams& params) {
    validate(params);
    if (psi.space != Space::position)
        throw config_error("free_propagate expects a position-space state");
    // The wrap-around monitor guards localized packets: a state that enters
    // clear of the boundary must stay clear. Delocalized states (plane waves,
    // broadband test states) have no packet to contaminate and are exempt.
    const bool localized = boundary_mass_fraction(psi) <= boundary_mass_threshold;
    const std::size_t M = psi.grid.points;
    const double L = psi.grid.half_width;
    WaveFunction out = psi;
    fft::forward(out.values);
    const double c = params.hbar * t / (2.0 * params.mass);
    for (std::size_t m = 0; m < M; ++m) {
        const double k = (pi / L) * static_cast<double>(signed_freq(m, M));
        out.values[m] *= std::polar(1.0, -c * k * k);
    }
    fft::inverse(out.values);
    if (localized) {
        const double f = boundary_mass_fraction(out);
        if (f > boundary_mass_threshold)
            throw numeric_guard_error(
                "free_propagate: boundary-mass monitor tripped after step, fraction " +
                std::to_string(f));
    }
    return out;
}

std::pair<double, double> classical_flow(double x, double xi, double t,
                                         const PhysicalParams& params) {
    validate(params);
    return {x + xi * t / params.mass, xi};
}

TransportedSymbol heisenberg_symbol(const Symbol& tau, double t, const PhysicalParams& params) {
    validate(params);
    const std::size_t Mx = tau.nx(), Mq = tau.nxi();
    const double Lx = tau.grid.x_axis.half_width;

    // flow-exit guard, row by row: cells whose image x + xi t/m leaves [-L, L)
    // would wrap; refuse if any such cell holds mass above the support floor
    for (std::size_t q = 0; q < Mq; ++q) {
        const double shift = tau.grid.xi_axis.node(q) * t / params.mass;
        if (shift == 0.0) continue;
        for (std::size_t i = 0; i < Mx; ++i) {
            const double target = tau.grid.x_axis.node(i) - shift;  // preimage of node i
            if (target >= -Lx && target < Lx) continue;
            if (std::abs(tau.at(i, q)) > 1e-13)
                throw guard_error("heisenberg_symbol: flow exits the grid at xi = " +
                                  std::to_string(tau.grid.xi_axis.node(q)));
        }
    }

    TransportedSymbol out{tau, true};
    for (std::size_t q = 0; q < Mq; ++q) {
        const double a = tau.grid.xi_axis.node(q) * t / params.mass;  // f(x + a)
        cplx* r = out.symbol.values.data() + q * Mx;
        fft::forward(r, Mx);
        for (std::size_t m = 0; m < Mx; ++m) {
            const double k = (pi / Lx) * static_cast<double>(signed_freq(m, Mx));
            r[m] *= std::polar(1.0, k * a);
        }
        fft::inverse(r, Mx);
    }
    return out;
}

TransportedSymbol heisenberg_symbol(const MollifiedIndicator& moll, double t,
                                    const PhysicalParams& params, const PhaseSpaceGrid& grid) {
    validate(params);
    Symbol out = zero_symbol(grid);
    const std::size_t Mx = grid.x_axis.points, Mq = grid.xi_axis.points;
    for (std::size_t q = 0; q < Mq; ++q) {
        const double shift = grid.xi_axis.node(q) * t / params.mass;
        for (std::size_t i = 0; i < Mx; ++i)
            out.at(i, q) = moll(grid.x_axis.node(i) + shift);
    }
    return TransportedSymbol{std::move(out), false};
}

DirichletBasis build_dirichlet_basis(const Region& region, const SpatialGrid& grid,
                                     const PhysicalParams& params, std::size_t K) {
    validate(region);
    validate(params);
    const double dx = grid.spacing();
    const double ia_f = (region.a + grid.half_width) / dx;
    const double ib_f = (region.b + grid.half_width) / dx;
    const auto ia = static_cast<std::size_t>(std::llround(ia_f));
    const auto ib = static_cast<std::size_t>(std::llround(ib_f));
    if (std::abs(ia_f - std::round(ia_f)) > 1e-9 || std::abs(ib_f - std::round(ib_f)) > 1e-9)
        throw config_error("dirichlet basis: region endpoints must lie on grid nodes");
    if (ib >= grid.points || ib <= ia + 1)
        throw config_error("dirichlet basis: region too small or outside the grid");

    const std::size_t interior = ib - ia - 1;
    const std::size_t cap = std::min(interior, grid.points / 2);
    const std::size_t nmodes = (K == 0) ? cap : std::min(K, cap);
    const double delta = region.diameter();

    DirichletBasis basis{region, grid, nmodes, {}, {}};
    basis.phi.reserve(nmodes);
    basis.energy.reserve(nmodes);
    const double amp = std::sqrt(2.0 / delta);
    for (std::size_t k = 1; k <= nmodes; ++k) {
        std::vector<double> mode(grid.points, 0.0);
        for (std::size_t i = ia + 1; i < ib; ++i)
            mode[i] = amp * std::sin(static_cast<double>(k) * pi * (grid.node(i) - region.a) / delta);
        basis.phi.push_back(std::move(mode));
        const double kk = static_cast<double>(k);
        basis.energy.push_back(params.hbar * params.hbar * pi * pi * kk * kk /
                               (2.0 * params.mass * delta * delta));
    }
    return basis;
}

DirichletBasis dirichlet_basis_for(const WaveFunction& psi, const Region& region,
                                   const PhysicalParams& params) {
    DirichletBasis full = build_dirichlet_basis(region, psi.grid, params);
    const WaveFunction p = project(psi, region);
    const double total = norm_squared(p);
    if (total == 0.0) {
        full.phi.resize(1);
        full.energy.resize(1);
        full.modes = 1;
        return full;
    }
    const double dx = psi.grid.spacing();
    double captured = 0.0;
    for (std::size_t k = 0; k < full.modes; ++k) {
        cplx c{0.0, 0.0};
        const auto& mode = full.phi[k];
        for (std::size_t i = 0; i < mode.size(); ++i) c += mode[i] * p.values[i];
        captured += std::norm(c * dx);
        if (captured / total >= 1.0 - 1e-8) {
            full.phi.resize(k + 1);
            full.energy.resize(k + 1);
            full.modes = k + 1;
            return full;
        }
    }
    throw numeric_guard_error("dirichlet_basis_for: even " + std::to_string(full.modes) +
                              " modes capture only " + std::to_string(captured / total));
}

double basis_capture(const WaveFunction& psi, const DirichletBasis& basis) {
    if (!(psi.grid == basis.grid)) throw config_error("basis_capture: grid mismatch");
    const WaveFunction p = project(psi, basis.region);
    const double total = norm_squared(p);
    if (total == 0.0) return 1.0;
    const double dx = basis.grid.spacing();
    double captured = 0.0;
    for (const auto& mode : basis.phi) {
        cplx c{0.0, 0.0};
        for (std::size_t i = 0; i < mode.size(); ++i) c += mode[i] * p.values[i];
        captured += std::norm(c * dx);
    }
    return captured / total;
}

WaveFunction dirichlet_evolve(const WaveFunction& psi, const DirichletBasis& basis, double t,
                              const PhysicalParams& params) {
    validate(params);
    if (!(psi.grid == basis.grid)) throw config_error("dirichlet_evolve: grid mismatch");
    const WaveFunction p = project(psi, basis.region);
    const double total = norm_squared(p);
    WaveFunction out = zero_state(basis.grid);
    if (total == 0.0) return out;

    const double dx = basis.grid.spacing();
    std::vector<cplx> coeff(basis.modes);
    double captured = 0.0;
    for (std::size_t k = 0; k < basis.modes; ++k) {
        cplx c{0.0, 0.0};
        const auto& mode = basis.phi[k];
        for (std::size_t i = 0; i < mode.size(); ++i) c += mode[i] * p.values[i];
        c *= dx;
        coeff[k] = c;
        captured += std::norm(c);
    }
    if (captured / total < 1.0 - 1e-8)
        throw numeric_guard_error("dirichlet_evolve: basis captures only " +
                                  std::to_string(captured / total) + " of ||P psi||^2");
    for (std::size_t k = 0; k < basis.modes; ++k) {
        const cplx ph = coeff[k] * std::polar(1.0, -basis.energy[k] * t / params.hbar);
        const auto& mode = basis.phi[k];
        for (std::size_t i = 0; i < mode.size(); ++i) out.values[i] += ph * mode[i];
    }
    return out;
}

WaveFunction project(const WaveFunction& psi, const Region& region) {
    if (psi.space != Space::position)
        throw config_error("project expects a position-space state");
    WaveFunction out = psi;
    out.normalized = false;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double x = psi.grid.node(i);
        if (x < region.a || x > region.b) out.values[i] = cplx{0.0, 0.0};
    }
    return out;
}

WaveFunction project(const WaveFunction& psi, const MollifiedIndicator& moll) {
    if (psi.space != Space::position)
        throw config_error("project expects a position-space state");
    WaveFunction out = psi;
    out.normalized = false;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= moll(psi.grid.node(i));
    return out;
}

}  // namespace zeno
