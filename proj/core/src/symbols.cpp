#include "zeno/symbols.hpp"

#include <algorithm>
#include <cmath>

#include "zeno/errors.hpp"
#include "zeno/jet.hpp"

namespace zeno {

void validate(const Region& r) {
    if (!(r.a < r.b)) throw config_error("region requires a < b");
}

namespace {

// s(u) and derivatives on the open interval (0,1). exp(-1/u) underflows to an
// exact 0.0 for u < ~1/745, which keeps the endpoint limits exact as well.
std::array<double, max_profile_order + 1> smooth_step(double u, std::size_t order) {
    using J = Jet<max_profile_order>;
    const J uj = J::variable(u);
    const J one = J::constant(1.0);
    const J g = exp_jet(J::constant(0.0) - one / uj);
    const J h = exp_jet(J::constant(0.0) - one / (one - uj));
    const J s = g / (g + h);
    std::array<double, max_profile_order + 1> out{};
    for (std::size_t p = 0; p <= order; ++p) out[p] = s.d[p];
    return out;
}

}  // namespace

double MollifiedIndicator::operator()(double x) const { return derivatives(x, 0)[0]; }

std::array<double, max_profile_order + 1> MollifiedIndicator::derivatives(
    double x, std::size_t order) const {
    if (order > max_profile_order)
        throw config_error("mollifier derivatives carried up to order " +
                           std::to_string(max_profile_order) + ", requested " +
                           std::to_string(order));
    std::array<double, max_profile_order + 1> out{};
    const double a = region.a, b = region.b;
    if (x >= a && x <= b) {
        out[0] = 1.0;
        return out;
    }
    if (x <= a - eps || x >= b + eps) return out;
    if (x < a) {
        // rising band, u = (x - (a - eps)) / eps, chi^(p) = s^(p) / eps^p
        auto s = smooth_step((x - (a - eps)) / eps, order);
        double scale = 1.0;
        for (std::size_t p = 0; p <= order; ++p) {
            out[p] = s[p] * scale;
            scale /= eps;
        }
        return out;
    }
    // falling band, u = ((b + eps) - x) / eps, chain rule brings (-1)^p
    auto s = smooth_step(((b + eps) - x) / eps, order);
    double scale = 1.0;
    for (std::size_t p = 0; p <= order; ++p) {
        out[p] = s[p] * scale;
        scale /= -eps;
    }
    return out;
}

MollifiedIndicator build_mollifier(const Region& region, std::size_t n_measurements,
                                   const SpatialGrid& grid,
                                   std::optional<double> eps_override) {
    validate(region);
    if (n_measurements < 1) throw config_error("build_mollifier: N must be >= 1");
    double eps;
    if (eps_override) {
        if (!(*eps_override > 0.0)) throw config_error("build_mollifier: eps must be positive");
        eps = *eps_override;
    } else {
        const double n = static_cast<double>(n_measurements);
        eps = std::max(1.0 / (n * n * n), 8.0 * grid.spacing());
    }
    MollifiedIndicator m{region, eps, eps >= 0.5 * region.diameter()};
    return m;
}

Symbol symbol_from_mollifier(const MollifiedIndicator& moll, const PhaseSpaceGrid& grid) {
    const double lo = moll.region.a - moll.eps, hi = moll.region.b + moll.eps;
    if (lo < -grid.x_axis.half_width || hi > grid.x_axis.half_width)
        throw guard_error("symbol_from_mollifier: grid does not contain the cutoff support");
    Symbol out = zero_symbol(grid);
    const std::size_t Mx = grid.x_axis.points, Mq = grid.xi_axis.points;
    std::vector<double> row(Mx);
    for (std::size_t i = 0; i < Mx; ++i) row[i] = moll(grid.x_axis.node(i));
    for (std::size_t q = 0; q < Mq; ++q)
        for (std::size_t i = 0; i < Mx; ++i) out.at(i, q) = row[i];
    return out;
}

Symbol shifted_symbol(const MollifiedIndicator& moll, std::size_t k, std::size_t n_measurements,
                      double t, const PhysicalParams& params, const PhaseSpaceGrid& grid) {
    validate(params);
    if (k > n_measurements) throw config_error("shifted_symbol: k must be in 0..N");
    const double c = static_cast<double>(k) * t /
                     (static_cast<double>(n_measurements) * params.mass);
    Symbol out = zero_symbol(grid);
    const std::size_t Mx = grid.x_axis.points, Mq = grid.xi_axis.points;
    for (std::size_t q = 0; q < Mq; ++q) {
        const double shift = c * grid.xi_axis.node(q);
        for (std::size_t i = 0; i < Mx; ++i)
            out.at(i, q) = moll(grid.x_axis.node(i) + shift);
    }
    return out;
}

EscapeTimes escape_time(const Region& region, const PhysicalParams& params, double xi,
                        double eps) {
    validate(region);
    validate(params);
    if (eps < 0.0) throw config_error("escape_time: eps must be nonnegative");
    if (xi == 0.0)
        throw config_error("escape_time: infinite escape time at xi = 0");
    const double axi = std::abs(xi);
    return EscapeTimes{params.mass * region.diameter() / axi,
                       params.mass * (region.diameter() + 2.0 * eps) / axi};
}

}  // namespace zeno
