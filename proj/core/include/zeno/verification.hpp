#ifndef ZENO_VERIFICATION_HPP
#define ZENO_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zeno/experiment.hpp"
#include "zeno/phase_space.hpp"

namespace zeno {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string note;
};

/// The full invariant suite behind the `verify` subcommand: Fourier and
/// propagator identities, Wigner normalization, Dirichlet conservation,
/// mollifier exactness, star-product parities, product-formula accounting,
/// hierarchy support inclusion, and output determinism.
std::vector<CheckResult> run_verification(const ExperimentConfig& cfg);

/// Deterministic band-limited random state (lowest `modes` frequencies filled
/// from the seeded generator), normalized.
WaveFunction random_state(const SpatialGrid& grid, std::uint64_t seed, std::size_t modes = 64);

}  // namespace zeno

#endif
