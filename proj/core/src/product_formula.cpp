#include "zeno/product_formula.hpp"

#include <cmath>

#include "zeno/errors.hpp"

namespace zeno {

Projector sharp_projector(const Region& region) {
    validate(region);
    return Projector{Projector::Kind::sharp, region, std::nullopt};
}

Projector mollified_projector(const MollifiedIndicator& moll) {
    return Projector{Projector::Kind::mollified, moll.region, moll};
}

ProductFormulaResult product_formula_state(const WaveFunction& psi, std::size_t n_measurements,
                                           double t, const Projector& projector,
                                           const PhysicalParams& params) {
    if (n_measurements < 1) throw config_error("product formula: N must be >= 1");
    ProductFormulaResult res;
    res.norms.reserve(n_measurements + 1);

    double before = norm_squared(psi);
    WaveFunction state = projector(psi);
    double after = norm_squared(state);
    res.leaked_norm_sq += before - after;
    res.norms.push_back(std::sqrt(after));

    const double dt = t / static_cast<double>(n_measurements);
    for (std::size_t step = 0; step < n_measurements; ++step) {
        state = free_propagate(state, dt, params);
        before = norm_squared(state);
        state = projector(state);
        after = norm_squared(state);
        res.leaked_norm_sq += before - after;
        res.norms.push_back(std::sqrt(after));
    }
    res.state = std::move(state);
    return res;
}

double survival_probability(const WaveFunction& psi, std::size_t n_measurements, double t,
                            const Projector& projector, const PhysicalParams& params) {
    if (std::abs(norm_squared(psi) - 1.0) > 1e-10)
        throw config_error("survival_probability requires a normalized state");
    const auto res = product_formula_state(psi, n_measurements, t, projector, params);
    const double p = norm_squared(res.state);
    if (p > 1.0 + 1e-12)
        throw numeric_guard_error("survival probability " + std::to_string(p) +
                                  " exceeds 1 beyond rounding");
    return p;
}

double zeno_error(const WaveFunction& psi, std::size_t n_measurements, double t,
                  const Projector& projector, const PhysicalParams& params,
                  const DirichletBasis& basis) {
    const auto res = product_formula_state(psi, n_measurements, t, projector, params);
    const WaveFunction limit = dirichlet_evolve(psi, basis, t, params);
    double s = 0.0;
    for (std::size_t i = 0; i < res.state.values.size(); ++i)
        s += std::norm(res.state.values[i] - limit.values[i]);
    return std::sqrt(s * psi.grid.spacing());
}

RegularizedProductResult regularized_product_state(const WaveFunction& psi,
                                                   std::size_t n_measurements, double t,
                                                   const MollifiedIndicator& moll,
                                                   const PhysicalParams& params) {
    if (n_measurements < 1) throw config_error("regularized product: N must be >= 1");
    const double dt = t / static_cast<double>(n_measurements);

    // route (a): P_N(k t/N) = U(-s) chi U(s), applied for k = 0..N
    WaveFunction a = psi;
    for (std::size_t k = 0; k <= n_measurements; ++k) {
        const double s = static_cast<double>(k) * dt;
        if (s != 0.0) a = free_propagate(a, s, params);
        a = project(a, moll);
        if (s != 0.0) a = free_propagate(a, -s, params);
    }

    // route (b): U(-t) [chi U(dt)]^N chi
    WaveFunction b = project(psi, moll);
    for (std::size_t k = 0; k < n_measurements; ++k)
        b = project(free_propagate(b, dt, params), moll);
    if (t != 0.0) b = free_propagate(b, -t, params);

    double s2 = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s2 += std::norm(a.values[i] - b.values[i]);

    RegularizedProductResult out;
    out.identity_residual = std::sqrt(s2 * psi.grid.spacing());
    out.state = std::move(a);
    return out;
}

}  // namespace zeno
