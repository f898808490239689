#include "zeno/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeno/errors.hpp"
#include "zeno/fft.hpp"

namespace zeno {

void validate(const PhysicalParams& p) {
    if (!(p.hbar > 0.0)) throw config_error("hbar must be positive");
    if (!(p.mass > 0.0)) throw config_error("mass must be positive");
}

SpatialGrid make_grid(double half_width, std::size_t points) {
    if (!(half_width > 0.0)) throw config_error("grid half-width must be positive");
    if (points < 8) throw config_error("grid needs at least 8 points");
    if ((points & (points - 1)) != 0)
        throw config_error("grid size must be a power of two, got " + std::to_string(points));
    return SpatialGrid{half_width, points};
}

WaveFunction zero_state(const SpatialGrid& grid) {
    return WaveFunction{grid, std::vector<cplx>(grid.points, cplx{0.0, 0.0}),
                        Space::position, false};
}

double norm_squared(const WaveFunction& psi) {
    double s = 0.0;
    for (const auto& v : psi.values) s += std::norm(v);
    return s * psi.measure();
}

double norm(const WaveFunction& psi) { return std::sqrt(norm_squared(psi)); }

WaveFunction normalize(WaveFunction psi) {
    const double n = norm(psi);
    if (!(n > 0.0)) throw config_error("cannot normalize the zero state");
    for (auto& v : psi.values) v /= n;
    psi.normalized = true;
    return psi;
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) throw config_error("inner_product: grid mismatch");
    if (a.space != b.space) throw config_error("inner_product: representation mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += std::conj(a.values[i]) * b.values[i];
    return s * a.measure();
}

// Index bookkeeping: e^{-i k_s x_i} = (-1)^s e^{-2 pi i s i / M} with s = j - M/2,
// so the unitary transform is an FFT plus alternating signs on both sides.
WaveFunction to_momentum(const WaveFunction& psi) {
    if (psi.space != Space::position)
        throw config_error("to_momentum expects a position-space state");
    const std::size_t M = psi.grid.points;
    WaveFunction out{psi.grid, psi.values, Space::momentum, psi.normalized};
    fft::forward(out.values);
    const double c = psi.grid.spacing() / std::sqrt(2.0 * pi);
    std::vector<cplx> mono(M);
    const std::size_t half = M / 2;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t m = (j + half) % M;          // s mod M
        const double sign = ((j + half) % 2 == 0) ? 1.0 : -1.0;  // (-1)^(j - M/2)
        mono[j] = c * sign * out.values[m];
    }
    out.values = std::move(mono);
    return out;
}

WaveFunction from_momentum(const WaveFunction& psihat) {
    if (psihat.space != Space::momentum)
        throw config_error("from_momentum expects a momentum-space state");
    const std::size_t M = psihat.grid.points;
    const std::size_t half = M / 2;
    std::vector<cplx> fftord(M);
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t m = (j + half) % M;
        const double sign = ((j + half) % 2 == 0) ? 1.0 : -1.0;
        fftord[m] = sign * psihat.values[j];
    }
    fft::inverse(fftord);
    const double c = psihat.grid.dual_spacing() * static_cast<double>(M) / std::sqrt(2.0 * pi);
    for (auto& v : fftord) v *= c;
    return WaveFunction{psihat.grid, std::move(fftord), Space::position, psihat.normalized};
}

double boundary_mass_fraction(const WaveFunction& psi) {
    if (psi.space != Space::position)
        throw config_error("boundary_mass_fraction expects a position-space state");
    const double edge = 0.9 * psi.grid.half_width;
    double total = 0.0, near = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double w = std::norm(psi.values[i]);
        total += w;
        if (std::abs(psi.grid.node(i)) >= edge) near += w;
    }
    return total > 0.0 ? near / total : 0.0;
}

PhaseSpaceGrid commensurate_grid(const SpatialGrid& x_axis, const PhysicalParams& params) {
    validate(params);
    const double dxi = pi * params.hbar / x_axis.half_width;
    const double Lxi = dxi * static_cast<double>(x_axis.points) / 2.0;
    return PhaseSpaceGrid{x_axis, SpatialGrid{Lxi, x_axis.points}};
}

double Symbol::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

bool Symbol::approximately_real(double tol) const {
    for (const auto& v : values)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

Symbol zero_symbol(const PhaseSpaceGrid& grid) {
    return Symbol{grid, std::vector<cplx>(grid.x_axis.points * grid.xi_axis.points,
                                          cplx{0.0, 0.0})};
}

}  // namespace zeno
