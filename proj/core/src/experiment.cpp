#include "zeno/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "zeno/errors.hpp"
#include "zeno/quantization.hpp"
#include "zeno/semiclassical.hpp"
#include "zeno/table.hpp"
#include "zeno/version.hpp"

namespace zeno {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw config_error(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

template <typename T>
T req(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key))
        throw config_error(std::string("missing key '") + key + "' in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(std::string("bad value for '") + key + "' in " + where + ": " +
                           e.what());
    }
}

const json& req_section(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_object())
        throw config_error(std::string("missing section '") + key + "' in config");
    return obj.at(key);
}

ExperimentConfig parse_config_json(json j) {
    reject_unknown(j, "config", {"physical", "region", "grid", "state", "schedule",
                                 "projector", "output", "seed", "budget"});
    ExperimentConfig cfg;

    const json& ph = req_section(j, "physical");
    reject_unknown(ph, "physical", {"hbar", "mass"});
    cfg.physical.hbar = req<double>(ph, "physical", "hbar");
    cfg.physical.mass = req<double>(ph, "physical", "mass");
    validate(cfg.physical);

    const json& rg = req_section(j, "region");
    reject_unknown(rg, "region", {"a", "b"});
    cfg.region.a = req<double>(rg, "region", "a");
    cfg.region.b = req<double>(rg, "region", "b");
    validate(cfg.region);

    const json& gr = req_section(j, "grid");
    reject_unknown(gr, "grid", {"L", "Mx", "Mxi", "Lxi"});
    cfg.grid.L = req<double>(gr, "grid", "L");
    cfg.grid.Mx = req<std::size_t>(gr, "grid", "Mx");
    if (gr.contains("Mxi")) cfg.grid.Mxi = gr.at("Mxi").get<std::size_t>();
    if (gr.contains("Lxi")) cfg.grid.Lxi = gr.at("Lxi").get<double>();
    make_grid(cfg.grid.L, cfg.grid.Mx);  // validates

    const json& st = req_section(j, "state");
    const std::string kind = req<std::string>(st, "state", "kind");
    if (kind == "gaussian") {
        reject_unknown(st, "state", {"kind", "center", "width", "momentum"});
        GaussianStateConfig g;
        g.center = req<double>(st, "state", "center");
        g.width = req<double>(st, "state", "width");
        g.momentum = req<double>(st, "state", "momentum");
        if (!(g.width > 0.0)) throw config_error("state.width must be positive");
        cfg.state = g;
    } else if (kind == "dirichlet_mode") {
        reject_unknown(st, "state", {"kind", "k"});
        DirichletModeConfig d;
        d.k = req<std::size_t>(st, "state", "k");
        if (d.k < 1) throw config_error("state.k must be >= 1");
        cfg.state = d;
    } else {
        throw config_error("state.kind must be 'gaussian' or 'dirichlet_mode'");
    }

    const json& sc = req_section(j, "schedule");
    reject_unknown(sc, "schedule", {"t", "N_list", "xi_list", "J", "t_grid"});
    cfg.schedule.t = req<std::vector<double>>(sc, "schedule", "t");
    cfg.schedule.N_list = req<std::vector<std::size_t>>(sc, "schedule", "N_list");
    if (sc.contains("xi_list")) cfg.schedule.xi_list = sc.at("xi_list").get<std::vector<double>>();
    if (sc.contains("J")) cfg.schedule.J = sc.at("J").get<std::size_t>();
    if (sc.contains("t_grid")) {
        const json& tg = sc.at("t_grid");
        reject_unknown(tg, "schedule.t_grid", {"start", "stop", "step"});
        TimeGridConfig t;
        t.start = req<double>(tg, "t_grid", "start");
        t.stop = req<double>(tg, "t_grid", "stop");
        t.step = req<double>(tg, "t_grid", "step");
        if (!(t.step > 0.0) || !(t.stop >= t.start))
            throw config_error("t_grid requires step > 0 and stop >= start");
        cfg.schedule.t_grid = t;
    }
    if (cfg.schedule.N_list.empty()) throw config_error("schedule.N_list must be nonempty");
    for (std::size_t i = 0; i + 1 < cfg.schedule.N_list.size(); ++i)
        if (cfg.schedule.N_list[i] >= cfg.schedule.N_list[i + 1])
            throw config_error("schedule.N_list must be strictly increasing");
    for (const double t : cfg.schedule.t)
        if (!(t >= 0.0)) throw config_error("schedule.t entries must be nonnegative");

    const json& pj = req_section(j, "projector");
    const std::string pk = req<std::string>(pj, "projector", "kind");
    if (pk == "sharp") {
        reject_unknown(pj, "projector", {"kind"});
        cfg.projector.kind = Projector::Kind::sharp;
    } else if (pk == "mollified") {
        reject_unknown(pj, "projector", {"kind", "eps"});
        cfg.projector.kind = Projector::Kind::mollified;
        if (pj.contains("eps") && !pj.at("eps").is_string()) {
            const double e = pj.at("eps").get<double>();
            if (!(e > 0.0)) throw config_error("projector.eps must be positive or 'auto'");
            cfg.projector.eps = e;
        } else if (pj.contains("eps") && pj.at("eps").get<std::string>() != "auto") {
            throw config_error("projector.eps must be a number or 'auto'");
        }
    } else {
        throw config_error("projector.kind must be 'sharp' or 'mollified'");
    }

    if (j.contains("output")) {
        const json& out = j.at("output");
        reject_unknown(out, "output", {"directory", "formats"});
        if (out.contains("directory")) cfg.output.directory = out.at("directory").get<std::string>();
        if (out.contains("formats")) {
            cfg.output.formats = out.at("formats").get<std::vector<std::string>>();
            for (const auto& f : cfg.output.formats)
                if (f != "csv" && f != "f64")
                    throw config_error("output.formats entries must be 'csv' or 'f64'");
        }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budget")) cfg.budget = j.at("budget").get<double>();

    cfg.canonical_text = j.dump();
    return cfg;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
}

void apply_override(json& j, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw config_error("override must look like key.path=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw config_error("bad override path: " + path);
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::exception&) {
                parsed = value;  // plain string
            }
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

std::string resolve_outdir(const ExperimentConfig& cfg, const RunOptions& opt) {
    const std::string dir = opt.out_dir.empty() ? cfg.output.directory : opt.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::pair<std::string, std::string>> provenance(const ExperimentConfig& cfg,
                                                            const RunOptions& opt,
                                                            double eps_used) {
    std::vector<std::pair<std::string, std::string>> p;
    p.emplace_back("zenosim", version_string);
    p.emplace_back("config_hash", fnv1a_hex(cfg.canonical_text));
    p.emplace_back("hbar", format_double(cfg.physical.hbar));
    p.emplace_back("mass", format_double(cfg.physical.mass));
    p.emplace_back("region", format_double(cfg.region.a) + " " + format_double(cfg.region.b));
    p.emplace_back("grid", "L=" + format_double(cfg.grid.L) +
                               " Mx=" + std::to_string(cfg.grid.Mx));
    p.emplace_back("eps", eps_used >= 0.0 ? format_double(eps_used) : "n/a");
    p.emplace_back("seed", std::to_string(cfg.seed));
    if (opt.stamp) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now).count();
        p.emplace_back("timestamp_us", std::to_string(us));
    }
    return p;
}

void write_file(const std::string& path, const ResultTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot open output file " + path);
    table.write_csv(os);
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// deterministic parallel map: results land in index order regardless of jobs
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(jobs, count);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::vector<double> sweep_times(const ExperimentConfig& cfg, bool require_grid) {
    if (cfg.schedule.t_grid) {
        const auto& tg = *cfg.schedule.t_grid;
        std::vector<double> ts;
        for (double t = tg.start; t <= tg.stop + 1e-12 * tg.step; t += tg.step)
            ts.push_back(t);
        return ts;
    }
    if (require_grid)
        throw config_error("this study requires schedule.t_grid");
    return cfg.schedule.t;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    return parse_config_json(parse_json_text(text));
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    json j = parse_json_text(text);
    for (const auto& ov : overrides) apply_override(j, ov);
    return parse_config_json(j);
}

SpatialGrid spatial_grid(const ExperimentConfig& cfg) {
    return make_grid(cfg.grid.L, cfg.grid.Mx);
}

PhaseSpaceGrid phase_grid(const ExperimentConfig& cfg) {
    const SpatialGrid x = spatial_grid(cfg);
    if (!cfg.grid.Mxi && !cfg.grid.Lxi) return commensurate_grid(x, cfg.physical);
    const std::size_t Mxi = cfg.grid.Mxi.value_or(cfg.grid.Mx);
    if (!cfg.grid.Lxi) throw config_error("grid.Lxi required when grid.Mxi is given");
    return PhaseSpaceGrid{x, make_grid(*cfg.grid.Lxi, Mxi)};
}

WaveFunction initial_state(const ExperimentConfig& cfg) {
    const SpatialGrid grid = spatial_grid(cfg);
    if (std::holds_alternative<GaussianStateConfig>(cfg.state)) {
        const auto& g = std::get<GaussianStateConfig>(cfg.state);
        WaveFunction psi = zero_state(grid);
        const double norm_c = std::pow(2.0 * pi * g.width * g.width, -0.25);
        for (std::size_t i = 0; i < grid.points; ++i) {
            const double x = grid.node(i);
            const double envelope =
                norm_c * std::exp(-(x - g.center) * (x - g.center) /
                                  (4.0 * g.width * g.width));
            psi.values[i] = envelope * std::polar(1.0, g.momentum * (x - g.center) /
                                                           cfg.physical.hbar);
        }
        return normalize(std::move(psi));
    }
    const auto& d = std::get<DirichletModeConfig>(cfg.state);
    const DirichletBasis basis = build_dirichlet_basis(cfg.region, grid, cfg.physical, d.k);
    if (basis.modes < d.k) throw config_error("dirichlet_mode k exceeds representable modes");
    WaveFunction psi = zero_state(grid);
    for (std::size_t i = 0; i < grid.points; ++i) psi.values[i] = basis.phi[d.k - 1][i];
    return normalize(std::move(psi));
}

Projector build_projector(const ExperimentConfig& cfg, std::size_t n_measurements) {
    if (cfg.projector.kind == Projector::Kind::sharp) return sharp_projector(cfg.region);
    const SpatialGrid grid = spatial_grid(cfg);
    const MollifiedIndicator moll =
        build_mollifier(cfg.region, n_measurements, grid, cfg.projector.eps);
    if (moll.degenerate)
        std::fprintf(stderr,
                     "warning: transition width eps = %g is at least half the region "
                     "diameter; the cutoff is valid but its interior plateau is narrow\n",
                     moll.eps);
    return mollified_projector(moll);
}

std::vector<std::string> run_zeno(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (cfg.schedule.t.size() != 1)
        throw config_error("zeno study expects exactly one schedule.t entry");
    const double t = cfg.schedule.t.front();
    const SpatialGrid grid = spatial_grid(cfg);
    const WaveFunction psi = initial_state(cfg);
    const DirichletBasis basis = build_dirichlet_basis(cfg.region, grid, cfg.physical);

    struct Row {
        std::size_t N;
        double pN, eN, reg, eps, wall;
        bool failed = false;
        std::string why;
    };
    const auto& Ns = cfg.schedule.N_list;
    std::vector<Row> rows(Ns.size());
    std::string first_failure;

    parallel_for(Ns.size(), opt.jobs, [&](std::size_t idx) {
        Row& r = rows[idx];
        r.N = Ns[idx];
        const double t0 = now_ms();
        try {
            const Projector proj = build_projector(cfg, r.N);
            const MollifiedIndicator reg_moll =
                build_mollifier(cfg.region, r.N, grid, cfg.projector.eps);
            const auto pf = product_formula_state(psi, r.N, t, proj, cfg.physical);
            r.pN = norm_squared(pf.state);
            const WaveFunction limit = dirichlet_evolve(psi, basis, t, cfg.physical);
            double s2 = 0.0;
            for (std::size_t i = 0; i < pf.state.values.size(); ++i)
                s2 += std::norm(pf.state.values[i] - limit.values[i]);
            r.eN = std::sqrt(s2 * grid.spacing());
            r.reg = regularized_product_state(psi, r.N, t, reg_moll, cfg.physical)
                        .identity_residual;
            r.eps = reg_moll.eps;
        } catch (const numeric_guard_error& e) {
            r.failed = true;
            r.why = e.what();
        }
        r.wall = opt.stamp ? now_ms() - t0 : 0.0;
    });

    ResultTable table({"N", "p_N", "e_N", "reg_residual", "eps", "wall_ms"});
    double eps_used = -1.0;
    bool failed = false;
    for (const auto& r : rows) {
        if (r.failed) {
            failed = true;
            if (first_failure.empty()) first_failure = r.why;
            break;
        }
        table.add_row({static_cast<std::int64_t>(r.N), r.pN, r.eN, r.reg, r.eps, r.wall});
        eps_used = r.eps;
    }
    auto prov = provenance(cfg, opt, eps_used);
    prov.emplace_back("t", format_double(t));
    prov.emplace_back("projector",
                      cfg.projector.kind == Projector::Kind::sharp ? "sharp" : "mollified");
    table.set_provenance(std::move(prov));
    if (failed) table.set_trailer("FAILED: " + first_failure);

    const std::string path = resolve_outdir(cfg, opt) + "/zeno.csv";
    write_file(path, table);
    if (failed) throw numeric_guard_error(first_failure);
    return {path};
}

namespace {

std::vector<std::string> write_sweep_tables(const ExperimentConfig& cfg, const RunOptions& opt,
                                            const EscapeSweepTable& sweep,
                                            const std::string& stem) {
    ResultTable table({"N", "j", "xi", "t", "sup_norm", "support_lo", "support_hi", "verdict",
                       "T_xi", "T_xi_N"});
    for (const auto& r : sweep.rows)
        table.add_row({static_cast<std::int64_t>(r.n_measurements),
                       static_cast<std::int64_t>(r.order_j), r.xi, r.t, r.sup_norm,
                       r.support_lo, r.support_hi, r.verdict, r.T_xi, r.T_xi_N});
    auto prov = provenance(cfg, opt, sweep.eps_max);
    if (sweep.eps_min != sweep.eps_max) {
        // auto policy: eps varies with N; exact per-N values sit in thresholds.csv
        for (auto& [k, v] : prov)
            if (k == "eps")
                v = format_double(sweep.eps_min) + " .. " + format_double(sweep.eps_max) +
                    " (per N, see thresholds)";
    }
    prov.emplace_back("estimated_work", format_double(sweep.estimated_work));
    prov.emplace_back("J", std::to_string(cfg.schedule.J));
    table.set_provenance(prov);

    ResultTable thr({"N", "j", "xi", "t_star", "eps"});
    for (const auto& th : sweep.thresholds)
        thr.add_row({static_cast<std::int64_t>(th.n_measurements),
                     static_cast<std::int64_t>(th.order_j), th.xi, th.t_star, th.eps});
    thr.set_provenance(prov);

    const std::string dir = resolve_outdir(cfg, opt);
    const std::string p1 = dir + "/" + stem + ".csv";
    const std::string p2 = dir + "/thresholds.csv";
    write_file(p1, table);
    write_file(p2, thr);
    return {p1, p2};
}

}  // namespace

std::vector<std::string> run_hierarchy(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (cfg.schedule.xi_list.empty())
        throw config_error("hierarchy study requires schedule.xi_list");
    const SpatialGrid grid = spatial_grid(cfg);
    const std::vector<double> ts = sweep_times(cfg, false);
    const EscapeSweepTable sweep =
        escape_sweep(cfg.schedule.N_list, ts, cfg.schedule.xi_list, cfg.schedule.J, cfg.region,
                     cfg.projector.eps, cfg.physical, grid, opt.budget.value_or(cfg.budget));
    return write_sweep_tables(cfg, opt, sweep, "hierarchy");
}

std::vector<std::string> run_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (cfg.schedule.xi_list.empty())
        throw config_error("sweep study requires schedule.xi_list");
    const SpatialGrid grid = spatial_grid(cfg);
    const std::vector<double> ts = sweep_times(cfg, true);
    const EscapeSweepTable sweep =
        escape_sweep(cfg.schedule.N_list, ts, cfg.schedule.xi_list, cfg.schedule.J, cfg.region,
                     cfg.projector.eps, cfg.physical, grid, opt.budget.value_or(cfg.budget));
    return write_sweep_tables(cfg, opt, sweep, "sweep");
}

std::vector<std::string> run_wigner(const ExperimentConfig& cfg, const RunOptions& opt) {
    const SpatialGrid grid = spatial_grid(cfg);
    const PhaseSpaceGrid ps = phase_grid(cfg);
    const WaveFunction psi = initial_state(cfg);
    const std::size_t N = cfg.schedule.N_list.back();
    const Projector proj = build_projector(cfg, N);
    const std::string dir = resolve_outdir(cfg, opt);
    std::vector<std::string> written;

    // axes
    const auto dump = [&](const std::string& name, const std::vector<double>& data) {
        const std::string path = dir + "/" + name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw config_error("cannot open output file " + path);
        os.write(reinterpret_cast<const char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(double)));
        written.push_back(path);
    };
    std::vector<double> xs(grid.points), qs(ps.xi_axis.points);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = grid.node(i);
    for (std::size_t q = 0; q < qs.size(); ++q) qs[q] = ps.xi_axis.node(q);
    dump("x_axis.f64", xs);
    dump("xi_axis.f64", qs);

    const double eps_used = proj.mollifier ? proj.mollifier->eps : -1.0;
    for (std::size_t it = 0; it < cfg.schedule.t.size(); ++it) {
        const double t = cfg.schedule.t[it];
        const WaveFunction state = product_formula_state(psi, N, t, proj, cfg.physical).state;
        const Symbol w = wigner_transform(state, cfg.physical, ps);
        std::vector<double> field(w.values.size());
        double max_imag = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i) {
            field[i] = w.values[i].real();
            max_imag = std::max(max_imag, std::abs(w.values[i].imag()));
        }
        const std::string stem = "wigner_t" + std::to_string(it);
        dump(stem + ".f64", field);

        nlohmann::json side;
        side["dtype"] = "<f8";
        side["order"] = "row-major";
        side["shape"] = {ps.xi_axis.points, grid.points};
        side["axes"] = {"xi", "x"};
        side["axis_files"] = {"xi_axis.f64", "x_axis.f64"};
        side["t"] = t;
        side["N"] = N;
        side["hbar"] = cfg.physical.hbar;
        side["mass"] = cfg.physical.mass;
        side["projector"] = cfg.projector.kind == Projector::Kind::sharp ? "sharp" : "mollified";
        if (eps_used >= 0.0) side["eps"] = eps_used;
        side["config_hash"] = fnv1a_hex(cfg.canonical_text);
        side["max_imag"] = max_imag;
        side["state_norm_sq"] = norm_squared(state);
        const std::string spath = dir + "/" + stem + ".json";
        std::ofstream os(spath, std::ios::binary);
        os << side.dump(2) << "\n";
        written.push_back(spath);
    }
    return written;
}

}  // namespace zeno
