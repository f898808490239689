#ifndef ZENO_PHASE_SPACE_HPP
#define ZENO_PHASE_SPACE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace zeno {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
};

/// Throws config_error unless hbar > 0 and mass > 0.
void validate(const PhysicalParams& p);

/// Uniform periodic grid on [-L, L) with M nodes, x_i = -L + i*dx, dx = 2L/M.
/// The dual (momentum/wavenumber) lattice is k_s = s*pi/L for signed integers
/// s in [-M/2, M/2), stored monotonically as index j = s + M/2.
struct SpatialGrid {
    double half_width = 0.0;   // L
    std::size_t points = 0;    // M, power of two

    double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
    double node(std::size_t i) const { return -half_width + spacing() * static_cast<double>(i); }
    double dual_spacing() const { return pi / half_width; }
    double dual_node(std::size_t j) const {
        return dual_spacing() * (static_cast<double>(j) - static_cast<double>(points) / 2.0);
    }
    bool operator==(const SpatialGrid& o) const {
        return half_width == o.half_width && points == o.points;
    }
};

/// Build a grid; errors on non-positive L, M < 8 or M not a power of two.
SpatialGrid make_grid(double half_width, std::size_t points);

enum class Space { position, momentum };

/// Complex field on a spatial grid; `space` records the active representation.
/// In momentum space the values live on the dual lattice (monotone order) and
/// the quadrature weight is the dual spacing.
struct WaveFunction {
    SpatialGrid grid;
    std::vector<cplx> values;
    Space space = Space::position;
    bool normalized = false;

    double measure() const {
        return space == Space::position ? grid.spacing() : grid.dual_spacing();
    }
};

/// All-zero position-space state on the grid.
WaveFunction zero_state(const SpatialGrid& grid);

double norm_squared(const WaveFunction& psi);
double norm(const WaveFunction& psi);

/// Scales to unit norm and sets the flag. Errors on the zero state.
WaveFunction normalize(WaveFunction psi);

/// Conjugate-linear in the first argument. Errors on grid/space mismatch.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

/// Unitary grid Fourier transform: psihat(k_s) = dx/sqrt(2 pi) * sum_i psi_i e^{-i k_s x_i}.
WaveFunction to_momentum(const WaveFunction& psi);
WaveFunction from_momentum(const WaveFunction& psihat);

/// Fraction of the norm^2 within 10% of the periodic boundary (|x| >= 0.9 L).
double boundary_mass_fraction(const WaveFunction& psi);

/// Threshold for the wrap-around monitor used by the propagator.
inline constexpr double boundary_mass_threshold = 1e-8;

struct PhaseSpaceGrid {
    SpatialGrid x_axis;    // position
    SpatialGrid xi_axis;   // momentum units

    bool operator==(const PhaseSpaceGrid& o) const {
        return x_axis == o.x_axis && xi_axis == o.xi_axis;
    }
};

/// Phase-space grid whose xi axis is the quantum momentum lattice of the
/// x grid: d_xi = pi*hbar/L, M_xi = M_x. On this grid Weyl quantization is an
/// exact change of basis (see quantization.hpp).
PhaseSpaceGrid commensurate_grid(const SpatialGrid& x_axis, const PhysicalParams& params);

/// Scalar field on a phase-space grid, stored xi-major: values[iq*Mx + ix],
/// so a fixed-xi row is contiguous in x.
struct Symbol {
    PhaseSpaceGrid grid;
    std::vector<cplx> values;

    std::size_t nx() const { return grid.x_axis.points; }
    std::size_t nxi() const { return grid.xi_axis.points; }
    cplx& at(std::size_t ix, std::size_t iq) { return values[iq * nx() + ix]; }
    const cplx& at(std::size_t ix, std::size_t iq) const { return values[iq * nx() + ix]; }

    double max_abs() const;
    /// True when every imaginary part is below tol in magnitude.
    bool approximately_real(double tol = 1e-10) const;
};

Symbol zero_symbol(const PhaseSpaceGrid& grid);

}  // namespace zeno

#endif
