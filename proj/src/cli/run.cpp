#include "tamed/cli.hpp"

#include "tamed/driver.hpp"
#include "tamed/error.hpp"
#include "tamed/kernels.hpp"
#include "tamed/parallel.hpp"
#include "tamed/scheme_bm.hpp"
#include "tamed/scheme_jump.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace tamed {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kDefaultAuditSamplesDiffusion = 10000;
constexpr std::size_t kDefaultAuditSamplesJump = 2000;

class OutputSet {
public:
    explicit OutputSet(const ExperimentConfig& cfg) : dir_(cfg.output_dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir_.string() + "': " + ec.message());
    }

    void text(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
        written_.push_back(path);
    }

    void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

    template <class Driver>
    void binary(const std::string& name, const Driver& drv) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        write_binary(out, drv);
        if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
        written_.push_back(path);
    }

    std::vector<fs::path> finish(const ExperimentConfig& cfg, Mode mode, const RunOptions& opts) {
        char stamp[32] = "";
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
        json outputs = json::array();
        for (const auto& p : written_) outputs.push_back(p.filename().string());
        json prov = deterministic_block(cfg, mode);
        prov["wall_clock"] = stamp;
        prov["threads"] = opts.threads;
        prov["isa"] = kernels::isa_name(kernels::active_isa());
        prov["outputs"] = outputs;
        json_file("provenance.json", prov);
        return written_;
    }

    static json deterministic_block(const ExperimentConfig& cfg, Mode mode) {
        return {{"mode", to_string(mode)},
                {"config", config_echo(cfg)},
                {"config_text", cfg.source_text},
                {"seed", cfg.base_seed},
                {"version", kVersion}};
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

BrownianProblem brownian_for(const ExperimentConfig& cfg) {
    BrownianProblem problem = brownian_problem(cfg.problem_id, cfg.params);
    if (cfg.alpha) problem.system.alpha = *cfg.alpha;
    validate(problem.system);
    return problem;
}

JumpProblem jump_for(const ExperimentConfig& cfg) {
    JumpProblem problem = jump_problem(cfg.problem_id, cfg.params, cfg.p);
    if (cfg.alpha) problem.system.alpha = *cfg.alpha;
    validate(problem.system);
    return problem;
}

Rational finest(const std::vector<Rational>& hs) { return *std::min_element(hs.begin(), hs.end()); }

StudyConfig study_for(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (cfg.h_list.empty()) throw Error(ErrorKind::ConfigError, cfg.source_name + ": 'h_list' is required");
    StudyConfig s;
    s.T = cfg.T;
    s.tau = cfg.tau;
    s.h_list = cfg.h_list;
    s.h_ref = cfg.h_ref ? *cfg.h_ref : finest(cfg.h_list);
    s.p = cfg.p;
    s.n_paths = cfg.n_paths;
    s.base_seed = cfg.base_seed;
    s.threads = opts.threads;
    s.extra_moment_orders = cfg.moment_orders;
    return s;
}

void reject_untamed_jump(const ExperimentConfig& cfg) {
    if (cfg.untamed && cfg.driver == DriverKind::Jump) {
        throw Error(ErrorKind::InvalidRange, "the untamed contrast is only defined for Brownian systems");
    }
}

std::string path_name(std::string_view stem, std::size_t j, std::string_view ext) {
    std::ostringstream os;
    os << stem << '_' << j << ext;
    return os.str();
}

}  // namespace

std::vector<fs::path> run_simulate(const ExperimentConfig& cfg, const RunOptions& opts) {
    reject_untamed_jump(cfg);
    if (!cfg.h && cfg.h_list.empty()) throw Error(ErrorKind::ConfigError, cfg.source_name + ": 'h' is required");
    if (cfg.n_paths < 1) throw Error(ErrorKind::InsufficientData, "n_paths must be at least 1");
    const Rational h = cfg.h ? *cfg.h : cfg.h_list.front();
    const GridSpec grid = build_grid(cfg.T, cfg.tau, h);
    const GridSpec source_grid = cfg.h_ref ? build_grid(cfg.T, cfg.tau, *cfg.h_ref) : grid;
    const Rational ratio = h / source_grid.step();
    if (!ratio.is_integer()) {
        throw Error(ErrorKind::NotDivisible, "h = " + h.to_string() + " is not an integer multiple of h_ref = " +
                                                 source_grid.step().to_string());
    }
    const std::int64_t factor = ratio.num();
    coarsen_grid(source_grid, factor);

    std::vector<std::size_t> wanted;
    if (cfg.write_paths) {
        wanted = *cfg.write_paths;
        for (std::size_t j : wanted) {
            if (j >= cfg.n_paths) {
                throw Error(ErrorKind::ConfigError, cfg.source_name + ": write_paths index " + std::to_string(j) +
                                                        " is not below n_paths");
            }
        }
    } else {
        for (std::size_t j = 0; j < cfg.n_paths; ++j) wanted.push_back(j);
    }
    std::vector<char> keep(cfg.n_paths, 0);
    for (std::size_t j : wanted) keep[j] = 1;

    std::vector<std::optional<PathRecord>> records(cfg.n_paths);
    std::vector<std::optional<BrownianPathIncrements>> bm_drivers(cfg.n_paths);
    std::vector<std::optional<JumpRealization>> jump_drivers(cfg.n_paths);
    std::vector<double> sup(cfg.n_paths);
    std::vector<std::optional<std::int64_t>> blown(cfg.n_paths);

    std::size_t dim = 1;
    if (cfg.driver == DriverKind::Brownian) {
        const BrownianProblem problem = brownian_for(cfg);
        const DiffusionSystem& sys = problem.system;
        dim = sys.dim_state;
        parallel_for(cfg.n_paths, opts.threads, [&](std::size_t j) {
            auto inc = gen_brownian(source_grid, sys.dim_noise, path_seed(cfg.base_seed, j, StreamTag::Brownian));
            if (factor > 1) inc = coarsen(inc, factor);
            const auto seg = sample_segment(problem.segment, grid, sys.dim_state);
            PathRecord path = cfg.untamed ? simulate_untamed(sys, seg, inc, cfg.explosion_threshold)
                                          : simulate_bm(sys, seg, inc);
            sup[j] = path.exploded() ? std::numeric_limits<double>::infinity() : sup_norm(path);
            blown[j] = path.exploded_from();
            if (keep[j]) {
                records[j] = std::move(path);
                if (cfg.dump_drivers) bm_drivers[j] = std::move(inc);
            }
        });
    } else {
        const JumpProblem problem = jump_for(cfg);
        const JumpSystem& sys = problem.system;
        if (!(sys.alpha * cfg.p < 1.0)) {
            throw Error(ErrorKind::InvalidRange, "taming exponent alpha must lie in (0, 1/p) for p = " + format_double(cfg.p));
        }
        dim = sys.dim_state;
        parallel_for(cfg.n_paths, opts.threads, [&](std::size_t j) {
            auto jr = gen_jumps(grid, sys.total_intensity, sys.dim_mark, sys.mark_sampler,
                                path_seed(cfg.base_seed, j, StreamTag::Jumps));
            PathRecord path = simulate_jump(sys, sample_segment(problem.segment, grid, sys.dim_state), grid, jr);
            sup[j] = sup_norm(path);
            if (keep[j]) {
                records[j] = std::move(path);
                if (cfg.dump_drivers) jump_drivers[j] = std::move(jr);
            }
        });
    }

    OutputSet out(cfg);
    for (std::size_t j : wanted) {
        out.text(path_name("path", j, ".csv"), to_csv(*records[j]));
        if (bm_drivers[j]) out.binary(path_name("drivers", j, ".bin"), *bm_drivers[j]);
        if (jump_drivers[j]) out.binary(path_name("drivers", j, ".bin"), *jump_drivers[j]);
    }
    json paths = json::array();
    std::size_t exploded = 0;
    for (std::size_t j = 0; j < cfg.n_paths; ++j) {
        json entry = {{"index", j}, {"sup_norm", std::isfinite(sup[j]) ? json(sup[j]) : json("inf")}};
        entry["exploded_from"] = blown[j] ? json(*blown[j]) : json(nullptr);
        if (blown[j]) ++exploded;
        paths.push_back(entry);
    }
    json summary = OutputSet::deterministic_block(cfg, Mode::Simulate);
    summary["grid"] = {{"T", grid.horizon().to_string()},
                       {"tau", grid.delay().to_string()},
                       {"h", grid.step().to_string()},
                       {"M", grid.steps()},
                       {"Mbar", grid.delay_steps()},
                       {"dim", dim}};
    summary["driver_step"] = source_grid.step().to_string();
    summary["exploded"] = exploded;
    summary["paths"] = paths;
    out.json_file("simulate.json", summary);
    return out.finish(cfg, Mode::Simulate, opts);
}

std::vector<fs::path> run_converge(const ExperimentConfig& cfg, const RunOptions& opts) {
    const StudyConfig study = study_for(cfg, opts);
    ErrorReport report;
    if (cfg.driver == DriverKind::Brownian) {
        const BrownianProblem problem = brownian_for(cfg);
        if (cfg.exact_reference) {
            if (!problem.exact_path) {
                throw Error(ErrorKind::ConfigError, cfg.source_name + ": problem '" + cfg.problem_id +
                                                        "' has no exact solution; use reference: self");
            }
            report = strong_error(problem.system, problem.segment, *problem.exact_path, study);
        } else {
            report = strong_error(problem.system, problem.segment, study);
        }
    } else {
        if (cfg.exact_reference) {
            throw Error(ErrorKind::ConfigError, cfg.source_name + ": jump problems support reference: self only");
        }
        const JumpProblem problem = jump_for(cfg);
        report = strong_error(problem.system, problem.segment, study);
    }
    OutputSet out(cfg);
    out.text("converge.csv", to_csv(report));
    json j = to_json(report);
    j["h_ref"] = study.h_ref.to_string();
    j["reference"] = cfg.exact_reference ? "exact" : "self";
    j["provenance"] = OutputSet::deterministic_block(cfg, Mode::Converge);
    out.json_file("converge.json", j);
    return out.finish(cfg, Mode::Converge, opts);
}

std::vector<fs::path> run_moments(const ExperimentConfig& cfg, const RunOptions& opts) {
    reject_untamed_jump(cfg);
    const StudyConfig study = study_for(cfg, opts);
    const MomentOptions mopts{cfg.untamed, cfg.explosion_threshold};
    MomentReport report;
    if (cfg.driver == DriverKind::Brownian) {
        const BrownianProblem problem = brownian_for(cfg);
        report = moment_sweep(problem.system, problem.segment, study, mopts);
    } else {
        const JumpProblem problem = jump_for(cfg);
        report = moment_sweep(problem.system, problem.segment, study, mopts);
    }
    OutputSet out(cfg);
    out.text("moments.csv", to_csv(report));
    json j = to_json(report);
    j["h_ref"] = study.h_ref.to_string();
    j["untamed"] = cfg.untamed;
    j["explosion_threshold"] = cfg.explosion_threshold;
    j["provenance"] = OutputSet::deterministic_block(cfg, Mode::Moments);
    out.json_file("moments.json", j);
    return out.finish(cfg, Mode::Moments, opts);
}

std::vector<fs::path> run_check(const ExperimentConfig& cfg, const RunOptions& opts) {
    const std::uint64_t seed = cfg.audit_seed ? *cfg.audit_seed : cfg.base_seed;
    AuditReport report;
    if (cfg.driver == DriverKind::Brownian) {
        // The auditor reports on the declared constants as shipped; alpha is irrelevant here.
        const BrownianProblem problem = brownian_problem(cfg.problem_id, cfg.params);
        const std::size_t n = cfg.audit_samples ? cfg.audit_samples : kDefaultAuditSamplesDiffusion;
        report = audit_assumptions(problem.system, n, cfg.audit_radius, seed);
    } else {
        const JumpProblem problem = jump_problem(cfg.problem_id, cfg.params, cfg.p);
        const std::size_t n = cfg.audit_samples ? cfg.audit_samples : kDefaultAuditSamplesJump;
        report = audit_assumptions(problem.system, n, cfg.audit_radius, seed);
    }
    OutputSet out(cfg);
    json j = to_json(report);
    j["problem"] = cfg.problem_id;
    j["provenance"] = OutputSet::deterministic_block(cfg, Mode::Check);
    out.json_file("audit.json", j);
    return out.finish(cfg, Mode::Check, opts);
}

std::vector<fs::path> run_mode(Mode mode, const ExperimentConfig& cfg, const RunOptions& opts) {
    if (cfg.mode && *cfg.mode != mode) {
        throw Error(ErrorKind::ConfigError, cfg.source_name + ": config declares mode '" +
                                                std::string(to_string(*cfg.mode)) + "' but the '" +
                                                std::string(to_string(mode)) + "' subcommand was used");
    }
    switch (mode) {
        case Mode::Simulate: return run_simulate(cfg, opts);
        case Mode::Converge: return run_converge(cfg, opts);
        case Mode::Moments: return run_moments(cfg, opts);
        case Mode::Check: return run_check(cfg, opts);
    }
    return {};
}

}  // namespace tamed
