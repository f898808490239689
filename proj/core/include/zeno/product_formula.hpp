#ifndef ZENO_PRODUCT_FORMULA_HPP
#define ZENO_PRODUCT_FORMULA_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "zeno/dynamics.hpp"
#include "zeno/phase_space.hpp"
#include "zeno/symbols.hpp"

namespace zeno {

/// The measurement applied between free-evolution steps: the sharp indicator
/// projection of the region, or its mollified (fuzzy) version.
struct Projector {
    enum class Kind { sharp, mollified };
    Kind kind = Kind::sharp;
    Region region;
    std::optional<MollifiedIndicator> mollifier;  // set when kind == mollified

    WaveFunction operator()(const WaveFunction& psi) const {
        return kind == Kind::sharp ? project(psi, region) : project(psi, *mollifier);
    }
};

Projector sharp_projector(const Region& region);
Projector mollified_projector(const MollifiedIndicator& moll);

struct ProductFormulaResult {
    WaveFunction state;
    /// ||psi|| after the initial projection and after each of the N steps
    /// (length N+1, nonincreasing).
    std::vector<double> norms;
    /// Norm^2 leaked per projection step, summed. 1 - ||state||^2 for
    /// normalized input, up to rounding.
    double leaked_norm_sq = 0.0;

    /// The state is kept unnormalized so ||state||^2 is the joint survival
    /// probability; this accessor gives the post-hoc unit-norm version.
    WaveFunction normalized_state() const { return normalize(state); }
};

/// The N-measurement product formula applied to psi: project, then N times
/// [free-propagate by t/N, project]. No intermediate normalization.
ProductFormulaResult product_formula_state(const WaveFunction& psi, std::size_t n_measurements,
                                           double t, const Projector& projector,
                                           const PhysicalParams& params);

/// ||product formula state||^2, the joint probability of finding the particle
/// inside the region at all N measurements. Requires a normalized input.
double survival_probability(const WaveFunction& psi, std::size_t n_measurements, double t,
                            const Projector& projector, const PhysicalParams& params);

/// L2 distance between the product-formula state and the confined (Dirichlet)
/// evolution of the sharp projection of psi: the quantity whose decay in N is
/// the Zeno limit.
double zeno_error(const WaveFunction& psi, std::size_t n_measurements, double t,
                  const Projector& projector, const PhysicalParams& params,
                  const DirichletBasis& basis);

struct RegularizedProductResult {
    WaveFunction state;
    /// || route(a) - route(b) || where (a) applies the Heisenberg-evolved
    /// cutoffs right-to-left and (b) back-propagates the plain product formula.
    /// An operator identity, so this is rounding-level.
    double identity_residual = 0.0;
};

/// The regularized product formula: the N+1 Heisenberg-evolved mollified
/// cutoffs P_N(t) P_N((N-1)t/N) ... P_N(0) applied to psi, computed two
/// algebraically-equal ways with the residual reported.
RegularizedProductResult regularized_product_state(const WaveFunction& psi,
                                                   std::size_t n_measurements, double t,
                                                   const MollifiedIndicator& moll,
                                                   const PhysicalParams& params);

}  // namespace zeno

#endif
