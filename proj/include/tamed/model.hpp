#pragma once

#include "tamed/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace tamed {

using ConstVec = std::span<const double>;
using Vec = std::span<double>;

// Coefficient maps write into caller-provided storage so the hot loop never
// allocates. `out` is sized by the caller (n, or n*m row-major for sigma).
using NeutralMap = std::function<void(ConstVec y, Vec out)>;
using DriftMap = std::function<void(ConstVec x, ConstVec y, Vec out)>;
using DiffusionMap = std::function<void(ConstVec x, ConstVec y, Vec out)>;
using JumpMap = std::function<void(ConstVec x, ConstVec y, ConstVec mark, Vec out)>;
using MarkSampler = std::function<void(std::mt19937_64& engine, Vec mark)>;

/// History function theta -> xi(theta) on [-tau, 0].
using SegmentFunction = std::function<void(double theta, Vec out)>;

/// Uniform time grid with h = T/M = tau/Mbar held exactly.
///
/// Indices run from -Mbar (time -tau) to M (time T). The step, horizon and
/// delay are stored as rationals; only `time(n)` and `step_value()` produce
/// floating point.
class GridSpec {
public:
    const Rational& horizon() const noexcept { return horizon_; }
    const Rational& delay() const noexcept { return delay_; }
    const Rational& step() const noexcept { return step_; }
    std::int64_t steps() const noexcept { return steps_; }
    std::int64_t delay_steps() const noexcept { return delay_steps_; }

    double step_value() const noexcept { return step_.to_double(); }
    /// n*h rounded once from the exact product.
    double time(std::int64_t n) const;

    /// Number of grid points from -Mbar to M inclusive.
    std::size_t point_count() const noexcept {
        return static_cast<std::size_t>(steps_ + delay_steps_ + 1);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    friend GridSpec build_grid(const Rational&, const Rational&, const Rational&);
    GridSpec(Rational T, Rational tau, Rational h, std::int64_t M, std::int64_t Mbar)
        : horizon_(T), delay_(tau), step_(h), steps_(M), delay_steps_(Mbar) {}

    Rational horizon_;
    Rational delay_;
    Rational step_;
    std::int64_t steps_;
    std::int64_t delay_steps_;
};

/// Throws InvalidRange unless 0 < h < 1 and 0 < tau < T, and NotCommensurate
/// unless T/h and tau/h are both integers.
GridSpec build_grid(const Rational& T, const Rational& tau, const Rational& h);

/// Grid with the same T and tau and step factor*h. Throws NotDivisible when
/// the coarse step does not divide T and tau.
GridSpec coarsen_grid(const GridSpec& fine, std::int64_t factor);

/// xi sampled at the grid points n = -Mbar..0.
class InitialSegment {
public:
    InitialSegment(GridSpec grid, std::size_t dim, std::vector<double> values,
                   double holder_constant = 0.0);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    double holder_constant() const noexcept { return holder_constant_; }

    /// Value at grid index n in [-Mbar, 0].
    ConstVec at(std::int64_t n) const;
    ConstVec values() const noexcept { return values_; }

private:
    GridSpec grid_;
    std::size_t dim_;
    std::vector<double> values_;
    double holder_constant_;
};

InitialSegment sample_segment(const SegmentFunction& xi, const GridSpec& grid, std::size_t dim,
                              double holder_constant = 0.0);

/// Constant history xi == value (dimension value.size()).
SegmentFunction constant_segment(std::vector<double> value);

/// Coefficients of d[X(t) - D(X(t-tau))] = b dt + sigma dB with the declared
/// assumption constants. Constants are metadata for the auditor; `alpha` is
/// the taming exponent.
struct DiffusionSystem {
    std::size_t dim_state = 1;
    std::size_t dim_noise = 1;
    NeutralMap neutral;
    DriftMap drift;
    DiffusionMap diffusion;
    double kappa = 0.5;
    double growth_K = 1.0;
    double lip_L = 1.0;
    double poly_l = 1.0;
    double alpha = 0.5;
};

/// Coefficients of d[x(t) - G(x(t-tau))] = f dt + int_U g(x(t-), x((t-tau)-), u) N~(du, dt)
/// with a finite intensity measure. `compensator` must equal
/// int_U g(x, y, u) lambda(du) in closed form.
struct JumpSystem {
    std::size_t dim_state = 1;
    std::size_t dim_mark = 1;
    NeutralMap neutral;
    DriftMap drift;
    JumpMap jump;
    DriftMap compensator;
    double total_intensity = 0.0;
    MarkSampler mark_sampler;
    double kappa = 0.5;
    double growth_K1 = 1.0;
    double lip_L = 1.0;
    double poly_l = 1.0;
    double alpha = 0.25;
    double moment_order = 2.0;
};

/// Throws InvalidRange if kappa is outside (0,1), alpha outside (0, 1/2], or
/// D(0) != 0.
void validate(const DiffusionSystem& sys);

/// Throws InvalidRange if kappa is outside (0,1), the intensity is negative,
/// p < 2, alpha outside (0, 1/p), or G(0) != 0.
void validate(const JumpSystem& sys);

/// Grid values of one simulated path for n = -Mbar..M.
///
/// An untamed run that crossed its explosion threshold is flagged exploded;
/// entries from `exploded_from()` on are NaN.
class PathRecord {
public:
    PathRecord(GridSpec grid, std::size_t dim);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }

    ConstVec at(std::int64_t n) const;
    Vec at(std::int64_t n);

    /// Flat row-major storage starting at index -Mbar.
    ConstVec data() const noexcept { return values_; }
    /// Values for n = 0..M only.
    ConstVec forward_data() const noexcept;

    bool exploded() const noexcept { return exploded_from_.has_value(); }
    std::optional<std::int64_t> exploded_from() const noexcept { return exploded_from_; }
    void mark_exploded(std::int64_t from);

    friend bool operator==(const PathRecord&, const PathRecord&) = default;

private:
    std::size_t offset(std::int64_t n) const;

    GridSpec grid_;
    std::size_t dim_;
    std::vector<double> values_;
    std::optional<std::int64_t> exploded_from_;
};

/// Euclidean norm. Falls back to |v0| in one dimension and rescales otherwise
/// so large drifts do not overflow.
double euclidean_norm(ConstVec v) noexcept;

}  // namespace tamed
