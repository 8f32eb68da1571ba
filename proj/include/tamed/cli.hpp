#pragma once

#include "tamed/analysis.hpp"
#include "tamed/error.hpp"
#include "tamed/problems.hpp"
#include "tamed/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tamed {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Mode { Simulate, Converge, Moments, Check };
enum class DriverKind { Brownian, Jump };

std::string_view to_string(Mode mode) noexcept;
std::string_view to_string(DriverKind kind) noexcept;

/// Parsed experiment file. Every optional field falls back to a default
/// documented in the README.
struct ExperimentConfig {
    std::optional<Mode> mode;
    DriverKind driver = DriverKind::Brownian;
    std::string problem_id;
    ProblemParams params;
    Rational T{1};
    Rational tau{1, 4};
    std::vector<Rational> h_list;
    std::optional<Rational> h_ref;
    std::optional<Rational> h;
    std::optional<double> alpha;
    double p = 2.0;
    std::size_t n_paths = 1000;
    std::uint64_t base_seed = 1;
    std::filesystem::path output_dir = "out";
    double explosion_threshold = 1e10;
    bool untamed = false;
    bool exact_reference = false;
    std::optional<std::vector<std::size_t>> write_paths;
    bool dump_drivers = false;
    std::vector<double> moment_orders;
    std::size_t audit_samples = 0;  ///< 0 picks a default per system kind
    double audit_radius = 10.0;
    std::optional<std::uint64_t> audit_seed;

    std::string source_name;  ///< file name used in diagnostics
    std::string source_text;  ///< raw bytes, echoed into reports
};

/// Parses YAML text. Throws ConfigError prefixed with "name:line:column" for
/// unknown keys, wrong types and malformed numbers.
ExperimentConfig parse_config(std::string_view text, std::string_view source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Normalized view of the config, as echoed into every report.
nlohmann::json config_echo(const ExperimentConfig& cfg);

/// "%.17g": round-trip exact for doubles.
std::string format_double(double v);

nlohmann::json to_json(const ErrorReport& report);
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const AuditReport& report);

std::string to_csv(const ErrorReport& report);
std::string to_csv(const MomentReport& report);
/// Header n,t,x (x0,x1,... when dim > 1); rows from n = -Mbar to M.
std::string to_csv(const PathRecord& path);

struct RunOptions {
    unsigned threads = 1;
};

/// Each runner writes into cfg.output_dir and returns the files it wrote.
/// Everything except provenance.json is a pure function of the config bytes.
std::vector<std::filesystem::path> run_simulate(const ExperimentConfig& cfg, const RunOptions& opts);
std::vector<std::filesystem::path> run_converge(const ExperimentConfig& cfg, const RunOptions& opts);
std::vector<std::filesystem::path> run_moments(const ExperimentConfig& cfg, const RunOptions& opts);
std::vector<std::filesystem::path> run_check(const ExperimentConfig& cfg, const RunOptions& opts);

/// Dispatches on `mode`; throws ConfigError if the file names another mode.
std::vector<std::filesystem::path> run_mode(Mode mode, const ExperimentConfig& cfg, const RunOptions& opts);

/// {"error": kind, "message": what} plus "step" for NonFiniteState.
nlohmann::json error_json(const Error& e);

}  // namespace tamed
