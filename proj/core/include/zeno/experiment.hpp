#ifndef ZENO_EXPERIMENT_HPP
#define ZENO_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zeno/phase_space.hpp"
#include "zeno/product_formula.hpp"
#include "zeno/symbols.hpp"

namespace zeno {

struct GridConfig {
    double L = 8.0;
    std::size_t Mx = 2048;
    /// Defaults to the commensurate momentum lattice of the x grid.
    std::optional<std::size_t> Mxi;
    std::optional<double> Lxi;
};

struct GaussianStateConfig {
    double center = 0.5;
    double width = 0.08;
    double momentum = 0.0;
};

struct DirichletModeConfig {
    std::size_t k = 1;
};

struct TimeGridConfig {
    double start = 0.0, stop = 0.0, step = 0.0;
};

struct ScheduleConfig {
    std::vector<double> t;
    std::vector<std::size_t> N_list;
    std::vector<double> xi_list;
    std::size_t J = 2;
    std::optional<TimeGridConfig> t_grid;
};

struct ProjectorConfig {
    Projector::Kind kind = Projector::Kind::sharp;
    std::optional<double> eps;  // mollified only; empty = auto policy
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
    PhysicalParams physical;
    Region region;
    GridConfig grid;
    std::variant<GaussianStateConfig, DirichletModeConfig> state;
    ScheduleConfig schedule;
    ProjectorConfig projector;
    OutputConfig output;
    std::uint64_t seed = 1;
    double budget = 1e10;

    /// Canonical (sorted-key) JSON text of the resolved config; hashed into
    /// every output file's provenance header.
    std::string canonical_text;
};

/// Strict parse: unknown keys anywhere are rejected (config_error).
ExperimentConfig parse_config_text(const std::string& json_text);

/// Load from file and apply dotted-path overrides ("schedule.J=3",
/// "projector.kind=mollified") before validation.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

SpatialGrid spatial_grid(const ExperimentConfig& cfg);
PhaseSpaceGrid phase_grid(const ExperimentConfig& cfg);
WaveFunction initial_state(const ExperimentConfig& cfg);

/// Projector for a given measurement count (the auto mollifier policy depends
/// on N through eps = max(1/N^3, 8 dx)).
Projector build_projector(const ExperimentConfig& cfg, std::size_t n_measurements);

struct RunOptions {
    std::string out_dir;      // overrides cfg.output.directory when nonempty
    std::size_t jobs = 1;
    std::optional<double> budget;
    /// Adds timestamp and wall-time measurements to outputs; off by default so
    /// identical config + seed gives byte-identical files.
    bool stamp = false;
};

/// zeno study: per (N) survival probability, distance to the confined
/// evolution, regularization-identity residual. Writes zeno.csv. Returns the
/// paths written.
std::vector<std::string> run_zeno(const ExperimentConfig& cfg, const RunOptions& opt);

/// hierarchy study over schedule.t (or t_grid when present): sup norms,
/// support extents and vanishing verdicts per (N, j, xi, t), plus detected
/// threshold times. Writes hierarchy.csv and thresholds.csv.
std::vector<std::string> run_hierarchy(const ExperimentConfig& cfg, const RunOptions& opt);

/// Wigner snapshots of the measured (product-formula) state at each schedule
/// time, N = last entry of N_list. Writes flat little-endian f64 dumps with a
/// JSON sidecar and axis files.
std::vector<std::string> run_wigner(const ExperimentConfig& cfg, const RunOptions& opt);

/// Cartesian sweep driver (requires schedule.t_grid): the escape sweep with
/// cost estimation against the budget. Writes sweep.csv and thresholds.csv.
std::vector<std::string> run_sweep(const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace zeno

#endif
