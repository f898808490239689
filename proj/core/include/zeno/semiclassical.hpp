#ifndef ZENO_SEMICLASSICAL_HPP
#define ZENO_SEMICLASSICAL_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "zeno/phase_space.hpp"
#include "zeno/quantization.hpp"
#include "zeno/symbols.hpp"

namespace zeno {

/// Absolute floor below which a symbol value counts as supported nowhere.
inline constexpr double support_floor = 1e-13;

/// The hbar-free coefficients Theta_{j,N} of the regularized product formula's
/// symbol, per momentum row: Theta_j restricted to the x axis at each
/// requested xi, with sup norms and support extents.
struct SymbolHierarchy {
    std::size_t n_measurements = 0;
    double t = 0.0;
    std::size_t order = 0;  // J
    double eps = 0.0;
    Region region;
    double mass = 1.0;
    SpatialGrid x_grid;
    std::vector<double> xi;
    /// rows[ix][j][i]: x-profile of Theta_j at momentum xi[ix]
    std::vector<std::vector<std::vector<cplx>>> rows;
    /// sup_norms[ix][j] = sup_x |Theta_j(x, xi[ix])|
    std::vector<std::vector<double>> sup_norms;
    /// support[ix][j]: smallest [lo, hi] containing {|Theta_j| > support_floor};
    /// NaN pair when the row is identically below the floor.
    std::vector<std::vector<std::pair<double, double>>> support;
};

/// Theta_0 = product over k = 0..N of the shifted cutoffs chi(x + k t xi/(N m)),
/// evaluated in closed form: exactly 1 on the common plateau and exactly 0
/// where any factor's support is missed.
Symbol theta_zero(std::size_t n_measurements, double t, const MollifiedIndicator& moll,
                  const PhysicalParams& params, const PhaseSpaceGrid& grid);

/// Iterative graded accumulation G^(k) = star_truncated([theta_k], G^(k-1), J),
/// carried with analytic derivative jets of every cutoff factor so that each
/// additive term keeps an exactly-supported factor per measurement. This makes
/// the support statement bit-exact: past the classical escape time every
/// coefficient is exactly zero on the row. Guards: J <= 3, N <= 512,
/// eps >= 8 dx.
SymbolHierarchy theta_hierarchy(std::size_t n_measurements, double t,
                                const std::vector<double>& xi_list, std::size_t J,
                                const MollifiedIndicator& moll, const PhysicalParams& params,
                                const SpatialGrid& x_grid);

/// Same accumulation over every row of a phase-space grid, assembled into a
/// 2D GradedSymbol (used by the quantization-side oracles).
GradedSymbol theta_hierarchy_full(std::size_t n_measurements, double t, std::size_t J,
                                  const MollifiedIndicator& moll, const PhysicalParams& params,
                                  const PhaseSpaceGrid& grid);

struct VanishingVerdict {
    std::size_t order_j = 0;
    double xi = 0.0;
    double sup_norm = 0.0;
    bool vanished = false;       // sup <= support_floor
    bool analytic_empty = false; // t > T^N_xi (false at xi = 0)
    double T_xi = 0.0;           // NaN at xi = 0
    double T_xi_N = 0.0;
    /// analytic_empty implies vanished; false would indicate a defect.
    bool consistent = true;
};

/// Per-(j, xi) support verdicts with the analytic escape-time predicate.
std::vector<VanishingVerdict> vanishing_verdict(const SymbolHierarchy& hierarchy);

struct EscapeSweepRow {
    std::size_t n_measurements = 0;
    std::size_t order_j = 0;
    double xi = 0.0;
    double t = 0.0;
    double sup_norm = 0.0;
    double support_lo = 0.0;  // NaN when empty
    double support_hi = 0.0;
    bool verdict = false;
    double T_xi = 0.0;
    double T_xi_N = 0.0;
};

struct ThresholdTime {
    std::size_t n_measurements = 0;
    std::size_t order_j = 0;
    double xi = 0.0;
    double t_star = 0.0;  // first sweep time with verdict true; NaN if none
    double eps = 0.0;
};

struct EscapeSweepTable {
    std::vector<EscapeSweepRow> rows;
    std::vector<ThresholdTime> thresholds;
    /// Range of the eps actually used across N (the auto policy varies with N;
    /// per-N values are in the thresholds).
    double eps_min = 0.0;
    double eps_max = 0.0;
    double estimated_work = 0.0;
};

/// Cartesian sweep over N_list x t_grid x xi_list: hierarchy rows, verdicts,
/// and detected threshold times t*(N) = min{t : verdict true}. The work
/// estimate Mx * |xi| * N * (J+1)^2 summed over runs is checked against the
/// budget before running (guard_error on refusal).
EscapeSweepTable escape_sweep(const std::vector<std::size_t>& N_list,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& xi_list, std::size_t J,
                              const Region& region, std::optional<double> eps_override,
                              const PhysicalParams& params, const SpatialGrid& x_grid,
                              double budget);

}  // namespace zeno

#endif
