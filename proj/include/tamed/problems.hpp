#pragma once

#include "tamed/analysis.hpp"
#include "tamed/driver.hpp"
#include "tamed/model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tamed {

// Scalar test systems. Each declares assumption constants that the auditor
// below confirms on sampled balls:
//
//  gbm               D = 0, b = mu x, sigma = s x. Globally Lipschitz with a
//                    closed-form solution.
//  cubic_neutral     D(y) = k y, b = -(x - k y)^3 + y, sigma = 0.2 x + 0.1 y.
//                    With u = x - k y: <u, b> = -u^4 + u y <= 1/16 + y^2/2, so
//                    K~ = 1; the monotone part of A4 needs L >= 0.55 + k and
//                    |b - b'| <= (1 + 3(x^2+y^2+x'^2+y'^2))(|dx|+|dy|) gives
//                    L = 3, l = 2.
//  broken_cubic      D = 0, b = x^3, sigma = 0 with K~ = 1 declared. Violates
//                    A1 for |x| > ~1.3; shipped as the auditor's negative
//                    control.
//  zero              all coefficients 0.
//  jump_linear       G = 0, f = -x, g = x u, marks uniform on [0, 2 mean].
//  jump_cubic_neutral G(y) = k y, f = -(x - k y)^3 + y, g = 0.1 x u.

struct BrownianProblem {
    std::string id;
    DiffusionSystem system;
    SegmentFunction segment;
    /// Exact solution on the reference grid, when one exists.
    std::optional<ExactPathFn> exact_path;
    /// Exact X(T) given the increments, when one exists.
    std::function<double(const BrownianPathIncrements&)> exact_terminal;
};

struct JumpProblem {
    std::string id;
    JumpSystem system;
    SegmentFunction segment;
};

BrownianProblem make_gbm(double mu, double sigma_hat, double x0);
DiffusionSystem make_cubic_neutral(double kappa = 0.25);
DiffusionSystem make_broken_cubic();
DiffusionSystem make_zero_system();

/// Declared B1/B4 constants are computed for the given moment order p.
JumpSystem make_jump_linear(double lambda_tot, double mean_mark, double moment_order = 2.0);
JumpSystem make_jump_cubic_neutral(double kappa = 0.25, double lambda_tot = 1.0,
                                   double mean_mark = 0.5, double moment_order = 2.0);

/// Family parameters from a config; absent keys take the catalog defaults.
using ProblemParams = std::map<std::string, double, std::less<>>;

std::vector<std::string> brownian_problem_ids();
std::vector<std::string> jump_problem_ids();
bool is_jump_problem(std::string_view id);

/// Throws UnknownProblem for ids outside the catalog and ConfigError for
/// parameters the family does not take.
BrownianProblem brownian_problem(std::string_view id, const ProblemParams& params = {});
JumpProblem jump_problem(std::string_view id, const ProblemParams& params = {},
                         double moment_order = 2.0);

/// Result of checking one assumption inequality lhs <= C * rhs_shape on
/// samples. `max_violation` is max (lhs - C*shape) / (C*shape) over samples
/// where the excess is beyond floating-point rounding, else 0.
/// `empirical_constant` is the smallest C that would satisfy every sample.
struct AssumptionCheck {
    std::string id;
    std::string inequality;
    double constant_used = 0.0;
    double max_violation = 0.0;
    double empirical_constant = 0.0;
    std::vector<double> witness;  ///< sample achieving max_violation (or the empirical constant)
};

struct AuditReport {
    std::string system_kind;  ///< "diffusion" or "jump"
    double radius = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<AssumptionCheck> checks;
    /// Empirical local constants of A3/B3 on the sampled ball.
    double local_drift_bound = 0.0;      ///< K_R: sup |b| (or |f|)
    double local_monotone_constant = 0.0;  ///< K~_R

    bool passed() const noexcept;
    const AssumptionCheck* find(std::string_view id) const noexcept;
};

/// Relative excess below this is attributed to rounding and not reported.
inline constexpr double kAuditRoundingSlack = 1e-12;

/// Samples x, y (and x', y' for the two-point inequalities) uniformly in the
/// ball of radius R and evaluates A1, A2, A4 with the declared constants; A3
/// is reported through the empirical local constants.
AuditReport audit_assumptions(const DiffusionSystem& sys, std::size_t n_samples, double radius,
                              std::uint64_t seed);

/// B1, B2, B4 for jump systems. Mark integrals int_U |.|^p lambda(du) use
/// lambda(U) times a Monte Carlo mean over 10^4 marks from the sampler, with
/// p = sys.moment_order.
AuditReport audit_assumptions(const JumpSystem& sys, std::size_t n_samples, double radius,
                              std::uint64_t seed);

}  // namespace tamed
