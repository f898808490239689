#include "zeno/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeno/errors.hpp"
#include "zeno/fft.hpp"

namespace zeno {

namespace {

// signed frequency index for FFT storage position m (0..M-1)
inline long signed_freq(std::size_t m, std::size_t M) {
    return m < M / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(M);
}

void require_commensurate(const PhaseSpaceGrid& grid, const PhysicalParams& params,
                          const char* who) {
    validate(params);
    if (grid.xi_axis.points != grid.x_axis.points)
        throw guard_error(std::string(who) + ": xi axis must have M_xi = M_x "
                          "(commensurate momentum lattice)");
    const double want = pi * params.hbar / grid.x_axis.half_width;
    const double have = grid.xi_axis.spacing();
    if (std::abs(have - want) > 1e-12 * want)
        throw guard_error(std::string(who) + ": xi spacing must equal pi*hbar/L "
                          "(use commensurate_grid); the xi quadrature is exact only "
                          "on the momentum lattice");
}

// 2D FFT of a Symbol field (xi-major storage), in place, both axes.
void fft2_forward(std::vector<cplx>& v, std::size_t Mx, std::size_t Mq) {
    for (std::size_t q = 0; q < Mq; ++q) fft::forward(v.data() + q * Mx, Mx);
    std::vector<cplx> col(Mq);
    for (std::size_t i = 0; i < Mx; ++i) {
        for (std::size_t q = 0; q < Mq; ++q) col[q] = v[q * Mx + i];
        fft::forward(col);
        for (std::size_t q = 0; q < Mq; ++q) v[q * Mx + i] = col[q];
    }
}

void fft2_inverse(std::vector<cplx>& v, std::size_t Mx, std::size_t Mq) {
    for (std::size_t q = 0; q < Mq; ++q) fft::inverse(v.data() + q * Mx, Mx);
    std::vector<cplx> col(Mq);
    for (std::size_t i = 0; i < Mx; ++i) {
        for (std::size_t q = 0; q < Mq; ++q) col[q] = v[q * Mx + i];
        fft::inverse(col);
        for (std::size_t q = 0; q < Mq; ++q) v[q * Mx + i] = col[q];
    }
}

// trigonometric x2 upsample, FFT-order spectrum with split Nyquist
std::vector<cplx> upsample2(const std::vector<cplx>& a) {
    const std::size_t M = a.size();
    std::vector<cplx> F(a);
    fft::forward(F);
    std::vector<cplx> F2(2 * M, cplx{0.0, 0.0});
    for (std::size_t m = 0; m < M / 2; ++m) F2[m] = F[m];
    F2[M / 2] = 0.5 * F[M / 2];
    F2[2 * M - M / 2] = 0.5 * F[M / 2];
    for (std::size_t m = M / 2 + 1; m < M; ++m) F2[m + M] = F[m];
    fft::inverse(F2);
    for (auto& v : F2) v *= 2.0;
    return F2;
}

}  // namespace

void measure_hermiticity(OperatorMatrix& op, double tol) {
    const std::size_t M = op.size();
    double dev = 0.0;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i; j < M; ++j)
            dev = std::max(dev, std::abs(op.at(i, j) - std::conj(op.at(j, i))));
    op.hermiticity_deviation = dev;
    op.hermitian = dev <= tol;
}

OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.grid == b.grid)) throw config_error("operator product: grid mismatch");
    const std::size_t M = a.size();
    OperatorMatrix c{a.grid, std::vector<cplx>(M * M, cplx{0.0, 0.0})};
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t k = 0; k < M; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            const cplx* brow = &b.entries[k * M];
            cplx* crow = &c.entries[i * M];
            for (std::size_t j = 0; j < M; ++j) crow[j] += aik * brow[j];
        }
    measure_hermiticity(c);
    return c;
}

WaveFunction apply(const OperatorMatrix& op, const WaveFunction& psi) {
    if (!(op.grid == psi.grid) || psi.space != Space::position)
        throw config_error("operator apply: grid/space mismatch");
    const std::size_t M = op.size();
    WaveFunction out = zero_state(op.grid);
    for (std::size_t i = 0; i < M; ++i) {
        cplx s{0.0, 0.0};
        const cplx* row = &op.entries[i * M];
        for (std::size_t j = 0; j < M; ++j) s += row[j] * psi.values[j];
        out.values[i] = s;
    }
    return out;
}

double max_abs_difference(const OperatorMatrix& a, const OperatorMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

// Plane wave e^{i(kap_s x + lam_r xi)} with kap_s = s pi/L, lam_r = r dx/hbar
// quantizes exactly to (W psi)(x_i) = e^{i kap_s (x_i + r dx/2)} psi(x_{i+r mod M}).
// Coefficients come from the 2D FFT of the sampled symbol; assembling the
// cyclic r-diagonals costs one length-M FFT per diagonal.
OperatorMatrix weyl_quantize(const Symbol& symbol, const PhysicalParams& params) {
    require_commensurate(symbol.grid, params, "weyl_quantize");
    const std::size_t M = symbol.grid.x_axis.points;
    if (M > 256)
        throw guard_error("weyl_quantize: dense-matrix path is an oracle, M <= 256 required");

    // c_{s,r} = (-1)^{s+r} FFT2(tau)[s mod M, r mod M] / M^2
    std::vector<cplx> c(symbol.values);
    fft2_forward(c, M, M);
    const double inv_m2 = 1.0 / (static_cast<double>(M) * static_cast<double>(M));

    OperatorMatrix op{symbol.grid.x_axis, std::vector<cplx>(M * M, cplx{0.0, 0.0})};
    std::vector<cplx> diag(M);
    for (std::size_t mr = 0; mr < M; ++mr) {
        const long r = signed_freq(mr, M);
        // g[ms] = c_{s,r} (-1)^s e^{i pi s r / M}; diagonal = M * IFFT(g)
        for (std::size_t ms = 0; ms < M; ++ms) {
            const long s = signed_freq(ms, M);
            const cplx coeff = c[mr * M + ms] * inv_m2 *
                               (((s + r) % 2 == 0) ? 1.0 : -1.0);  // (-1)^{s+r}
            const double sign_s = (s % 2 == 0) ? 1.0 : -1.0;
            const double chirp = pi * static_cast<double>(s) * static_cast<double>(r) /
                                 static_cast<double>(M);
            diag[ms] = coeff * sign_s * cplx{std::cos(chirp), std::sin(chirp)};
        }
        fft::inverse(diag);
        for (std::size_t i = 0; i < M; ++i) {
            const std::size_t j = (i + static_cast<std::size_t>(r + static_cast<long>(M))) % M;
            op.at(i, j) += diag[i] * static_cast<double>(M);
        }
    }
    measure_hermiticity(op);
    return op;
}

Symbol inverse_weyl(const OperatorMatrix& op, const PhysicalParams& params) {
    validate(params);
    const std::size_t M = op.size();
    const PhaseSpaceGrid grid = commensurate_grid(op.grid, params);
    std::vector<cplx> c(M * M);  // c[mr*M + ms]
    std::vector<cplx> diag(M);
    for (std::size_t mr = 0; mr < M; ++mr) {
        const long r = signed_freq(mr, M);
        for (std::size_t i = 0; i < M; ++i) {
            const std::size_t j = (i + static_cast<std::size_t>(r + static_cast<long>(M))) % M;
            diag[i] = op.at(i, j);
        }
        fft::forward(diag);
        for (std::size_t ms = 0; ms < M; ++ms) {
            const long s = signed_freq(ms, M);
            const double sign_s = (s % 2 == 0) ? 1.0 : -1.0;
            const double chirp = pi * static_cast<double>(s) * static_cast<double>(r) /
                                 static_cast<double>(M);
            c[mr * M + ms] = diag[ms] / static_cast<double>(M) * sign_s *
                             cplx{std::cos(chirp), -std::sin(chirp)};
        }
    }
    // tau[i,q] = sum_{s,r} c (-1)^{s+r} e^{2 pi i (s i + r q)/M}
    for (std::size_t mr = 0; mr < M; ++mr)
        for (std::size_t ms = 0; ms < M; ++ms) {
            const long s = signed_freq(ms, M), r = signed_freq(mr, M);
            c[mr * M + ms] *= ((s + r) % 2 == 0) ? 1.0 : -1.0;
        }
    fft2_inverse(c, M, M);
    Symbol out{grid, std::move(c)};
    const double m2 = static_cast<double>(M) * static_cast<double>(M);
    for (auto& v : out.values) v *= m2;
    return out;
}

Symbol wigner_transform(const WaveFunction& psi, const PhysicalParams& params,
                        const PhaseSpaceGrid& grid) {
    if (psi.space != Space::position)
        throw config_error("wigner_transform expects a position-space state");
    if (!(grid.x_axis == psi.grid))
        throw config_error("wigner_transform: grid mismatch");
    require_commensurate(grid, params, "wigner_transform");
    const std::size_t M = psi.grid.points;
    const double dx = psi.grid.spacing();
    const std::vector<cplx> half = upsample2(psi.values);  // 2M half-step samples

    Symbol out = zero_symbol(grid);
    std::vector<cplx> corr(M);
    const double scale = dx / (2.0 * pi * params.hbar);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t mm = 0; mm < M; ++mm) {
            const long m = signed_freq(mm, M);
            const std::size_t ip = static_cast<std::size_t>(
                ((2 * static_cast<long>(i) + m) % static_cast<long>(2 * M) +
                 static_cast<long>(2 * M)) % static_cast<long>(2 * M));
            const std::size_t im = static_cast<std::size_t>(
                ((2 * static_cast<long>(i) - m) % static_cast<long>(2 * M) +
                 static_cast<long>(2 * M)) % static_cast<long>(2 * M));
            corr[mm] = half[ip] * std::conj(half[im]);
        }
        fft::forward(corr);  // sum_m corr e^{-2 pi i k m / M}
        for (std::size_t q = 0; q < M; ++q) {
            const std::size_t k = (q + M / 2) % M;  // (q - M/2) mod M
            out.at(i, q) = scale * corr[k];
        }
    }
    return out;
}

Symbol twisted_convolution_exact(const Symbol& f, const Symbol& g,
                                 const PhysicalParams& params) {
    validate(params);
    if (!(f.grid == g.grid)) throw config_error("twisted convolution: grid mismatch");
    const std::size_t Mx = f.nx(), Mq = f.nxi();
    if (Mx * Mq > 128 * 128)
        throw guard_error("twisted_convolution_exact: oracle-scale guard Mx*Mxi <= 128^2");
    // compact-support check on the outermost ring
    const double fmax = std::max(f.max_abs(), g.max_abs());
    double edge = 0.0;
    for (std::size_t i = 0; i < Mx; ++i)
        edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(g.at(i, 0))});
    for (std::size_t q = 0; q < Mq; ++q)
        edge = std::max({edge, std::abs(f.at(0, q)), std::abs(g.at(0, q))});
    if (edge > 1e-6 * fmax)
        throw guard_error("twisted_convolution_exact: inputs are not compactly "
                          "supported on the grid");

    const double Lx = f.grid.x_axis.half_width, Lq = f.grid.xi_axis.half_width;
    std::vector<cplx> F(f.values), G(g.values);
    fft2_forward(F, Mx, Mq);
    fft2_forward(G, Mx, Mq);
    const double inv_sz = 1.0 / static_cast<double>(Mx * Mq);
    for (auto& v : F) v *= inv_sz;
    for (auto& v : G) v *= inv_sz;

    std::vector<cplx> out(Mx * Mq, cplx{0.0, 0.0});
    std::vector<cplx> px(Mx), pq(Mq);
    const double h2 = 0.5 * params.hbar;
    for (std::size_t a2 = 0; a2 < Mq; ++a2) {
        const double kap_q = (pi / Lq) * static_cast<double>(signed_freq(a2, Mq));
        for (std::size_t a1 = 0; a1 < Mx; ++a1) {
            const cplx Fk = F[a2 * Mx + a1];
            if (std::abs(Fk) < 1e-300) continue;
            const double kap_x = (pi / Lx) * static_cast<double>(signed_freq(a1, Mx));
            // phase e^{-(i hbar/2)(kap_x mu_xi - kap_xi mu_x)}, separable in mu
            for (std::size_t m1 = 0; m1 < Mx; ++m1) {
                const double mu_x = (pi / Lx) * static_cast<double>(signed_freq(m1, Mx));
                px[m1] = std::polar(1.0, h2 * kap_q * mu_x);
            }
            for (std::size_t m2 = 0; m2 < Mq; ++m2) {
                const double mu_q = (pi / Lq) * static_cast<double>(signed_freq(m2, Mq));
                pq[m2] = std::polar(1.0, -h2 * kap_x * mu_q);
            }
            for (std::size_t m2 = 0; m2 < Mq; ++m2) {
                const std::size_t b2 = (m2 + Mq - a2) % Mq;
                const cplx fp = Fk * pq[m2];
                const cplx* grow = &G[b2 * Mx];
                cplx* orow = &out[m2 * Mx];
                for (std::size_t m1 = 0; m1 < Mx; ++m1) {
                    const std::size_t b1 = (m1 + Mx - a1) % Mx;
                    orow[m1] += fp * px[m1] * grow[b1];
                }
            }
        }
    }
    fft2_inverse(out, Mx, Mq);
    const double sz = static_cast<double>(Mx * Mq);
    for (auto& v : out) v *= sz;
    return Symbol{f.grid, std::move(out)};
}

Symbol spectral_derivative(const Symbol& f, std::size_t order_x, std::size_t order_xi) {
    Symbol out = f;
    const std::size_t Mx = f.nx(), Mq = f.nxi();
    if (order_x > 0) {
        const double Lx = f.grid.x_axis.half_width;
        for (std::size_t q = 0; q < Mq; ++q) {
            cplx* row = out.values.data() + q * Mx;
            fft::forward(row, Mx);
            for (std::size_t m = 0; m < Mx; ++m) {
                long s = signed_freq(m, Mx);
                if (order_x % 2 == 1 && m == Mx / 2) s = 0;  // zero Nyquist, odd order
                cplx mult{1.0, 0.0};
                const cplx ik{0.0, (pi / Lx) * static_cast<double>(s)};
                for (std::size_t p = 0; p < order_x; ++p) mult *= ik;
                row[m] *= mult;
            }
            fft::inverse(row, Mx);
        }
    }
    if (order_xi > 0) {
        const double Lq = f.grid.xi_axis.half_width;
        std::vector<cplx> col(Mq);
        for (std::size_t i = 0; i < Mx; ++i) {
            for (std::size_t q = 0; q < Mq; ++q) col[q] = out.values[q * Mx + i];
            fft::forward(col);
            for (std::size_t m = 0; m < Mq; ++m) {
                long s = signed_freq(m, Mq);
                if (order_xi % 2 == 1 && m == Mq / 2) s = 0;
                cplx mult{1.0, 0.0};
                const cplx ik{0.0, (pi / Lq) * static_cast<double>(s)};
                for (std::size_t p = 0; p < order_xi; ++p) mult *= ik;
                col[m] *= mult;
            }
            fft::inverse(col);
            for (std::size_t q = 0; q < Mq; ++q) out.values[q * Mx + i] = col[q];
        }
    }
    return out;
}

namespace {

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// fraction of gradient energy (|freq|^2-weighted spectrum) carried by the
// top-10% frequency ring; flat fields don't mask discontinuities this way
double tail_fraction(const Symbol& f) {
    std::vector<cplx> F(f.values);
    const std::size_t Mx = f.nx(), Mq = f.nxi();
    fft2_forward(F, Mx, Mq);
    double total = 0.0, tail = 0.0;
    for (std::size_t m2 = 0; m2 < Mq; ++m2)
        for (std::size_t m1 = 0; m1 < Mx; ++m1) {
            const double sx = static_cast<double>(signed_freq(m1, Mx));
            const double sq = static_cast<double>(signed_freq(m2, Mq));
            const double e = std::norm(F[m2 * Mx + m1]) * (sx * sx + sq * sq);
            total += e;
            const double rx = std::abs(sx) / (static_cast<double>(Mx) / 2.0);
            const double rq = std::abs(sq) / (static_cast<double>(Mq) / 2.0);
            if (std::max(rx, rq) >= 0.9) tail += e;
        }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

Symbol sharp_j(const Symbol& f, const Symbol& g, std::size_t j, SharpDiagnostics* diag) {
    if (!(f.grid == g.grid)) throw config_error("sharp_j: grid mismatch");
    if (j > 4) throw guard_error("sharp_j: derivative-order guard j <= 4");
    if (diag) {
        diag->tail_fraction_f = tail_fraction(f);
        diag->tail_fraction_g = tail_fraction(g);
        diag->nonsmooth_f = diag->tail_fraction_f > 0.01;
        diag->nonsmooth_g = diag->tail_fraction_g > 0.01;
    }
    Symbol out = zero_symbol(f.grid);
    for (std::size_t r = 0; r <= j; ++r) {
        const Symbol df = spectral_derivative(f, r, j - r);
        const Symbol dg = spectral_derivative(g, j - r, r);
        const double c = binom(j, r) * (((j - r) % 2 == 0) ? 1.0 : -1.0);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += c * df.values[i] * dg.values[i];
    }
    return out;
}

GradedSymbol graded_from_symbol(const Symbol& s, std::size_t order) {
    GradedSymbol g{order, {}};
    g.coeffs.reserve(order + 1);
    g.coeffs.push_back(s);
    for (std::size_t i = 1; i <= order; ++i) g.coeffs.push_back(zero_symbol(s.grid));
    return g;
}

Symbol graded_sum(const GradedSymbol& g, double hbar) {
    Symbol out = zero_symbol(g.coeffs.front().grid);
    double hp = 1.0;
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += hp * g.coeffs[j].values[i];
        hp *= hbar;
    }
    return out;
}

GradedSymbol star_truncated(const GradedSymbol& f, const GradedSymbol& g, std::size_t J) {
    if (J > 4) throw guard_error("star_truncated: order guard J <= 4");
    const PhaseSpaceGrid& grid = f.coeffs.front().grid;
    if (!(grid == g.coeffs.front().grid)) throw config_error("star_truncated: grid mismatch");
    GradedSymbol out{J, {}};
    out.coeffs.reserve(J + 1);
    double lfact = 1.0;
    // (i/2)^l / l! coefficients, i = imaginary unit
    std::vector<cplx> coef(J + 1);
    for (std::size_t l = 0; l <= J; ++l) {
        if (l > 0) lfact *= static_cast<double>(l);
        cplx il{1.0, 0.0};
        for (std::size_t p = 0; p < l; ++p) il *= cplx{0.0, 0.5};
        coef[l] = il / lfact;
    }
    for (std::size_t i = 0; i <= J; ++i) {
        Symbol ci = zero_symbol(grid);
        for (std::size_t l = 0; l <= i; ++l)
            for (std::size_t p = 0; p + l <= i; ++p) {
                const std::size_t q = i - l - p;
                if (p >= f.coeffs.size() || q >= g.coeffs.size()) continue;
                if (f.coeffs[p].max_abs() == 0.0 || g.coeffs[q].max_abs() == 0.0) continue;
                const Symbol term = sharp_j(f.coeffs[p], g.coeffs[q], l);
                for (std::size_t n = 0; n < ci.values.size(); ++n)
                    ci.values[n] += coef[l] * term.values[n];
            }
        out.coeffs.push_back(std::move(ci));
    }
    return out;
}

GradedSymbol moyal_bracket_truncated(const GradedSymbol& f, const GradedSymbol& g,
                                     std::size_t J) {
    GradedSymbol fg = star_truncated(f, g, J);
    const GradedSymbol gf = star_truncated(g, f, J);
    for (std::size_t j = 0; j <= J; ++j)
        for (std::size_t n = 0; n < fg.coeffs[j].values.size(); ++n)
            fg.coeffs[j].values[n] -= gf.coeffs[j].values[n];
    return fg;
}

}  // namespace zeno
