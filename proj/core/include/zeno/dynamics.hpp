#ifndef ZENO_DYNAMICS_HPP
#define ZENO_DYNAMICS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "zeno/phase_space.hpp"
#include "zeno/symbols.hpp"

namespace zeno {

/// Free propagation by exp(-i t H / hbar), H = -hbar^2 d^2/dx^2 / (2m), as a
/// momentum-space multiplier exp(-i hbar k^2 t / 2m). Unitary on the grid.
/// The boundary-mass monitor runs before and after the step and throws
/// numeric_guard_error on wrap-around contamination.
WaveFunction free_propagate(const WaveFunction& psi, double t, const PhysicalParams& params);

/// Free classical flow (x, xi) -> (x + xi t / m, xi).
std::pair<double, double> classical_flow(double x, double xi, double t,
                                         const PhysicalParams& params);

struct FlowMap {
    PhysicalParams params;
    std::pair<double, double> operator()(double x, double xi, double t) const {
        return classical_flow(x, xi, t, params);
    }
};

struct TransportedSymbol {
    Symbol symbol;
    /// Set when the transport used trigonometric (spectral) interpolation of a
    /// sampled field rather than closed-form evaluation.
    bool interpolated = false;
};

/// Symbol of the Heisenberg-evolved operator for the free (quadratic)
/// Hamiltonian: exact transport along the classical flow, tau(x + xi t/m, xi).
/// Sampled fields are shifted row-by-row with trigonometric interpolation
/// (exact for band-limited fields); errors if the numerical support would
/// leave the grid.
TransportedSymbol heisenberg_symbol(const Symbol& tau, double t, const PhysicalParams& params);

/// Closed-form transport of a cutoff symbol: chi(x + xi t / m), never interpolated.
TransportedSymbol heisenberg_symbol(const MollifiedIndicator& moll, double t,
                                    const PhysicalParams& params, const PhaseSpaceGrid& grid);

/// Sine eigenbasis of the Dirichlet Laplacian on the region, sampled on the
/// grid. Region endpoints must coincide with grid nodes so the sampled modes
/// are exactly orthonormal under the grid quadrature. Eigenvalues are the
/// analytic E_k = hbar^2 pi^2 k^2 / (2 m delta^2).
struct DirichletBasis {
    Region region;
    SpatialGrid grid;
    std::size_t modes = 0;                 // K
    std::vector<std::vector<double>> phi;  // K full-grid sampled eigenfunctions
    std::vector<double> energy;            // E_k, strictly increasing
};

/// K = 0 selects the default: all interior modes, capped at M/2.
DirichletBasis build_dirichlet_basis(const Region& region, const SpatialGrid& grid,
                                     const PhysicalParams& params, std::size_t K = 0);

/// Smallest K whose span captures at least 1 - 1e-8 of ||P psi||^2, capped at
/// M/2; errors (numeric_guard_error) if even the cap falls short.
DirichletBasis dirichlet_basis_for(const WaveFunction& psi, const Region& region,
                                   const PhysicalParams& params);

/// Norm^2 fraction of (the sharp projection of) psi captured by the basis span.
double basis_capture(const WaveFunction& psi, const DirichletBasis& basis);

/// exp(-i t H_Omega / hbar) P psi: expand P psi in the sine basis, advance each
/// mode phase, resynthesize. Errors (numeric_guard_error) if the basis captures
/// less than 1 - 1e-8 of ||P psi||^2.
WaveFunction dirichlet_evolve(const WaveFunction& psi, const DirichletBasis& basis, double t,
                              const PhysicalParams& params);

/// Sharp projection: pointwise multiplication by the indicator of [a, b].
WaveFunction project(const WaveFunction& psi, const Region& region);
/// Fuzzy projection: pointwise multiplication by the mollified cutoff.
WaveFunction project(const WaveFunction& psi, const MollifiedIndicator& moll);

}  // namespace zeno

#endif
