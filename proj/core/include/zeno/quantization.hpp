#ifndef ZENO_QUANTIZATION_HPP
#define ZENO_QUANTIZATION_HPP

#include <cstddef>
#include <vector>

#include "zeno/phase_space.hpp"

namespace zeno {

/// Dense kernel matrix of an operator on a spatial grid. entries[i*M + j]
/// holds K(x_i, x_j)*dx, so matrix-vector multiplication is the quadrature
/// application of the integral kernel.
struct OperatorMatrix {
    SpatialGrid grid;
    std::vector<cplx> entries;
    /// max |K - K^dagger| measured at construction, and the derived flag.
    double hermiticity_deviation = 0.0;
    bool hermitian = false;

    std::size_t size() const { return grid.points; }
    cplx& at(std::size_t i, std::size_t j) { return entries[i * size() + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
};

void measure_hermiticity(OperatorMatrix& op, double tol = 1e-8);

OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b);
WaveFunction apply(const OperatorMatrix& op, const WaveFunction& psi);
double max_abs_difference(const OperatorMatrix& a, const OperatorMatrix& b);

/// Weyl quantization of a sampled symbol. Requires the commensurate phase-space
/// grid (xi axis = the quantum momentum lattice, d_xi = pi*hbar/L, M_xi = M_x):
/// there the xi quadrature of the midpoint kernel formula is an exact expansion
/// over discrete Weyl operators (modulation x cyclic shift with the half-step
/// chirp), making quantization an invertible change of basis. Dense-matrix
/// oracle path: M <= 256.
OperatorMatrix weyl_quantize(const Symbol& symbol, const PhysicalParams& params);

/// Exact inverse of weyl_quantize on the commensurate grid.
Symbol inverse_weyl(const OperatorMatrix& op, const PhysicalParams& params);

/// Wigner distribution of a position-space state on the commensurate grid:
/// W(x,xi) = (2 pi hbar)^-1 integral psi(x+v/2) conj(psi(x-v/2)) e^{-i xi v/hbar} dv,
/// evaluated with the trigonometric half-step interpolant of psi.
Symbol wigner_transform(const WaveFunction& psi, const PhysicalParams& params,
                        const PhaseSpaceGrid& grid);

/// Exact twisted convolution (star product) of the band-limited interpolants:
/// plane waves compose as e^{ik.z} # e^{il.z} = e^{i(k+l).z} e^{-(i hbar/2)(kx l_xi - k_xi lx)},
/// so the product is a twisted convolution of the two spectra. This is the
/// refined-quadrature limit of the 4-fold integral for fields resolved on the
/// grid. Oracle-scale guard: Mx*Mxi <= 128^2; inputs must be compactly
/// supported on the grid.
Symbol twisted_convolution_exact(const Symbol& f, const Symbol& g, const PhysicalParams& params);

/// Spectral partial derivative d^ox/dx^ox d^oxi/dxi^oxi on the periodic grid.
/// Nyquist modes are zeroed for odd orders.
Symbol spectral_derivative(const Symbol& f, std::size_t order_x, std::size_t order_xi);

struct SharpDiagnostics {
    bool nonsmooth_f = false;   // spectral-tail monitor tripped on f
    bool nonsmooth_g = false;
    double tail_fraction_f = 0.0;
    double tail_fraction_g = 0.0;
};

/// j-th term of the star-product expansion:
/// sharp_j(f,g) = sum_{r=0}^{j} C(j,r) (-1)^{j-r} (dx^r dxi^{j-r} f)(dxi^r dx^{j-r} g),
/// derivatives evaluated spectrally. Guard: j <= 4.
Symbol sharp_j(const Symbol& f, const Symbol& g, std::size_t j,
               SharpDiagnostics* diag = nullptr);

/// Finite list of hbar-free coefficients c_0..c_J representing sum_j hbar^j c_j.
struct GradedSymbol {
    std::size_t order = 0;
    std::vector<Symbol> coeffs;
};

GradedSymbol graded_from_symbol(const Symbol& s, std::size_t order);

/// Sum hbar^j coeffs[j] evaluated at a concrete hbar.
Symbol graded_sum(const GradedSymbol& g, double hbar);

/// Graded composition of truncated star products:
/// c_i = sum_{l+p+q=i} (i/2)^l (1/l!) sharp_l(f_p, g_q), i = 0..J. Guard: J <= 4.
GradedSymbol star_truncated(const GradedSymbol& f, const GradedSymbol& g, std::size_t J);

/// star_truncated(f,g,J) - star_truncated(g,f,J).
GradedSymbol moyal_bracket_truncated(const GradedSymbol& f, const GradedSymbol& g, std::size_t J);

}  // namespace zeno

#endif
