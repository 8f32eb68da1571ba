#pragma once

#include "tamed/driver.hpp"
#include "tamed/model.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tamed {

/// max over coarse indices n = 0..M of |coarse[n] - fine[k n]|.
///
/// The supremum over [0,T] is replaced by the supremum over the shared grid
/// points; the intra-step excursion is of lower order and is not sampled.
/// Throws GridMismatch unless `fine` refines `coarse` by exactly `k`.
double sup_diff(const PathRecord& coarse, const PathRecord& fine, std::int64_t k);

/// max over n = 0..M of |path[n]|.
double sup_norm(const PathRecord& path);

/// Mean over paths of sup_norm(path)^p. Throws InsufficientData on an empty
/// collection and InvalidRange for p < 2.
double moment_estimate(std::span<const PathRecord> paths, double p);

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of ln(err) on ln(h). Needs at least two pairs, all strictly
/// positive (InsufficientData / NonPositiveValue otherwise).
OrderFit fit_order(std::span<const std::pair<double, double>> pairs);

struct MomentValue {
    double order;
    double value;
};

struct ErrorRow {
    Rational h;
    std::size_t n_paths = 0;
    double p = 2.0;
    double err_p = 0.0;      ///< E[sup_n |Y_h - Y_ref|^p]
    double err_root = 0.0;   ///< err_p^(1/p)
    double std_error = 0.0;  ///< Monte Carlo standard error of err_p
    double moment_p = 0.0;   ///< E[sup_n |Y_h|^p]
    std::vector<MomentValue> extra_moments;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;  ///< decreasing h
    /// Fit over rows with err_p > 0 (and h != h_ref for self-convergence).
    /// Absent when fewer than two rows qualify.
    std::optional<OrderFit> fit;
};

struct StudyConfig {
    Rational T{1};
    Rational tau{1, 4};
    std::vector<Rational> h_list;
    Rational h_ref{1, 2048};
    double p = 2.0;
    std::size_t n_paths = 1000;
    std::uint64_t base_seed = 1;
    unsigned threads = 1;
    /// Additional orders q for which E[sup_n |Y_h|^q] is reported per row.
    std::vector<double> extra_moment_orders;
};

/// Maps the initial segment and increments on the reference grid to the exact
/// solution sampled on that grid.
using ExactPathFn =
    std::function<PathRecord(const InitialSegment& seg, const BrownianPathIncrements& increments)>;

/// Strong error of the tamed scheme against a self-convergence reference at
/// h_ref. Path j draws its increments on the h_ref grid from stream
/// (base_seed, j); coarser runs use block sums of the same increments.
ErrorReport strong_error(const DiffusionSystem& sys, const SegmentFunction& xi,
                         const StudyConfig& cfg);

/// As above but against the exact solution on the h_ref grid.
ErrorReport strong_error(const DiffusionSystem& sys, const SegmentFunction& xi,
                         const ExactPathFn& exact, const StudyConfig& cfg);

/// Jump version: one JumpRealization per path drives every step size.
ErrorReport strong_error(const JumpSystem& sys, const SegmentFunction& xi, const StudyConfig& cfg);

struct MomentRow {
    Rational h;
    std::size_t n_paths = 0;
    double p = 2.0;
    double moment_p = 0.0;  ///< +inf if any path exploded
    double std_error = 0.0;
    std::size_t exploded = 0;
    double exploded_fraction = 0.0;
};

struct MomentReport {
    std::vector<MomentRow> rows;  ///< decreasing h
};

struct MomentOptions {
    bool untamed = false;
    double explosion_threshold = 1e10;
};

/// E[sup_n |Y_h|^p] over an h sweep with the same coupled drivers as
/// strong_error. A path counts as exploded once it exceeds the threshold;
/// with `untamed` the classical EM recursion is used.
MomentReport moment_sweep(const DiffusionSystem& sys, const SegmentFunction& xi,
                          const StudyConfig& cfg, const MomentOptions& opts = {});
MomentReport moment_sweep(const JumpSystem& sys, const SegmentFunction& xi, const StudyConfig& cfg,
                          const MomentOptions& opts = {});

}  // namespace tamed
