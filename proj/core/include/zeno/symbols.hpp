#ifndef ZENO_SYMBOLS_HPP
#define ZENO_SYMBOLS_HPP

#include <array>
#include <cstddef>
#include <optional>

#include "zeno/phase_space.hpp"

namespace zeno {

/// Maximum derivative order carried by the mollifier evaluation machinery.
inline constexpr std::size_t max_profile_order = 4;

/// Closed interval [a, b] in position space.
struct Region {
    double a = 0.0;
    double b = 1.0;

    double diameter() const { return b - a; }
    Region dilation(double eps) const { return Region{a - eps, b + eps}; }
};

/// Throws config_error unless a < b.
void validate(const Region& r);

/// Smooth cutoff equal to exactly 1 on [a, b], exactly 0 outside [a-eps, b+eps],
/// with the standard C^infinity step s(u) = g(u)/(g(u)+g(1-u)), g(u) = e^{-1/u},
/// in both transition bands. Evaluation is closed-form so the plateau and
/// support are bit-exact, and all derivatives vanish at the band endpoints.
struct MollifiedIndicator {
    Region region;
    double eps = 0.1;
    /// Set when eps >= diameter/2: the dilation's transition bands are wide
    /// relative to the region. Still a valid cutoff; callers may warn.
    bool degenerate = false;

    double operator()(double x) const;
    /// Value and derivatives chi^(p)(x) for p = 0..order, order <= max_profile_order.
    std::array<double, max_profile_order + 1> derivatives(double x, std::size_t order) const;
};

/// eps = eps_override if given, else max(1/N^3, 8*dx): the cubic schedule with a
/// grid-resolution floor so transition bands stay representable. The chosen eps
/// is recorded in the result.
MollifiedIndicator build_mollifier(const Region& region, std::size_t n_measurements,
                                   const SpatialGrid& grid,
                                   std::optional<double> eps_override = std::nullopt);

/// The cutoff as a phase-space symbol, constant along xi.
/// Errors if the grid's x range does not contain the support [a-eps, b+eps].
Symbol symbol_from_mollifier(const MollifiedIndicator& moll, const PhaseSpaceGrid& grid);

/// chi^(N)(x + k t xi / (N m)) sampled on the grid: the k-th Heisenberg-evolved
/// cutoff symbol entering the regularized product formula.
Symbol shifted_symbol(const MollifiedIndicator& moll, std::size_t k, std::size_t n_measurements,
                      double t, const PhysicalParams& params, const PhaseSpaceGrid& grid);

struct EscapeTimes {
    double T_xi = 0.0;    // m * diameter / |xi|
    double T_xi_N = 0.0;  // m * (diameter + 2 eps) / |xi|
};

/// Classical escape times for momentum xi. Errors (config_error) on xi = 0,
/// where the escape time is infinite.
EscapeTimes escape_time(const Region& region, const PhysicalParams& params, double xi,
                        double eps);

}  // namespace zeno

#endif
