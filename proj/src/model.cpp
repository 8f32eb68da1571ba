#include "tamed/model.hpp"

#include "tamed/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tamed {

double GridSpec::time(std::int64_t n) const {
    __int128 num = static_cast<__int128>(n) * step_.num();
    return static_cast<double>(num) / static_cast<double>(step_.den());
}

GridSpec build_grid(const Rational& T, const Rational& tau, const Rational& h) {
    if (!(h > Rational(0)) || !(h < Rational(1))) {
        throw Error(ErrorKind::InvalidRange, "step size h = " + h.to_string() + " is not in (0,1)");
    }
    if (!(tau > Rational(0)) || !(tau < T)) {
        throw Error(ErrorKind::InvalidRange,
                    "delay tau = " + tau.to_string() + " must satisfy 0 < tau < T = " +
                        T.to_string());
    }
    Rational M = T / h;
    Rational Mbar = tau / h;
    if (!M.is_integer()) {
        throw Error(ErrorKind::NotCommensurate,
                    "T/h = " + T.to_string() + " / " + h.to_string() + " is not an integer");
    }
    if (!Mbar.is_integer()) {
        throw Error(ErrorKind::NotCommensurate,
                    "tau/h = " + tau.to_string() + " / " + h.to_string() + " is not an integer");
    }
    return GridSpec(T, tau, h, M.num(), Mbar.num());
}

GridSpec coarsen_grid(const GridSpec& fine, std::int64_t factor) {
    if (factor < 1 || fine.steps() % factor != 0 || fine.delay_steps() % factor != 0) {
        throw Error(ErrorKind::NotDivisible,
                    "refinement factor " + std::to_string(factor) + " does not divide M = " +
                        std::to_string(fine.steps()) + " and Mbar = " +
                        std::to_string(fine.delay_steps()));
    }
    return build_grid(fine.horizon(), fine.delay(), fine.step() * Rational(factor));
}

InitialSegment::InitialSegment(GridSpec grid, std::size_t dim, std::vector<double> values,
                               double holder_constant)
    : grid_(std::move(grid)),
      dim_(dim),
      values_(std::move(values)),
      holder_constant_(holder_constant) {
    const auto expected = static_cast<std::size_t>(grid_.delay_steps() + 1) * dim_;
    if (dim_ == 0 || values_.size() != expected) {
        throw Error(ErrorKind::GridMismatch,
                    "initial segment needs Mbar+1 = " + std::to_string(grid_.delay_steps() + 1) +
                        " points of dimension " + std::to_string(dim_));
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::NonFiniteState, "initial segment has non-finite entries");
    }
    if (!(holder_constant_ >= 0.0)) {
        throw Error(ErrorKind::InvalidRange, "Holder constant must be nonnegative");
    }
}

ConstVec InitialSegment::at(std::int64_t n) const {
    if (n < -grid_.delay_steps() || n > 0) {
        throw Error(ErrorKind::InvalidRange, "segment index " + std::to_string(n) + " out of range");
    }
    auto idx = static_cast<std::size_t>(n + grid_.delay_steps()) * dim_;
    return ConstVec(values_).subspan(idx, dim_);
}

InitialSegment sample_segment(const SegmentFunction& xi, const GridSpec& grid, std::size_t dim,
                              double holder_constant) {
    const std::int64_t Mbar = grid.delay_steps();
    std::vector<double> values(static_cast<std::size_t>(Mbar + 1) * dim);
    for (std::int64_t n = -Mbar; n <= 0; ++n) {
        xi(grid.time(n), Vec(values).subspan(static_cast<std::size_t>(n + Mbar) * dim, dim));
    }
    return InitialSegment(grid, dim, std::move(values), holder_constant);
}

SegmentFunction constant_segment(std::vector<double> value) {
    return [value = std::move(value)](double, Vec out) {
        std::copy(value.begin(), value.end(), out.begin());
    };
}

namespace {

void require_zero_at_origin(const NeutralMap& map, std::size_t dim, const char* name) {
    std::vector<double> zero(dim, 0.0);
    std::vector<double> out(dim, 0.0);
    map(zero, out);
    if (std::any_of(out.begin(), out.end(), [](double v) { return v != 0.0; })) {
        throw Error(ErrorKind::InvalidRange, std::string(name) + "(0) must be 0");
    }
}

}  // namespace

void validate(const DiffusionSystem& sys) {
    if (sys.dim_state == 0 || sys.dim_noise == 0) {
        throw Error(ErrorKind::InvalidRange, "state and noise dimensions must be positive");
    }
    if (!sys.neutral || !sys.drift || !sys.diffusion) {
        throw Error(ErrorKind::InvalidRange, "diffusion system has an empty coefficient map");
    }
    if (!(sys.kappa > 0.0 && sys.kappa < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "kappa must lie in (0,1)");
    }
    if (!(sys.alpha > 0.0 && sys.alpha <= 0.5)) {
        throw Error(ErrorKind::InvalidRange, "taming exponent alpha must lie in (0, 1/2]");
    }
    require_zero_at_origin(sys.neutral, sys.dim_state, "D");
}

void validate(const JumpSystem& sys) {
    if (sys.dim_state == 0 || sys.dim_mark == 0) {
        throw Error(ErrorKind::InvalidRange, "state and mark dimensions must be positive");
    }
    if (!sys.neutral || !sys.drift || !sys.jump || !sys.compensator || !sys.mark_sampler) {
        throw Error(ErrorKind::InvalidRange, "jump system has an empty coefficient map");
    }
    if (!(sys.kappa > 0.0 && sys.kappa < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "kappa must lie in (0,1)");
    }
    if (!(sys.total_intensity >= 0.0) || !std::isfinite(sys.total_intensity)) {
        throw Error(ErrorKind::InvalidRange, "total intensity must be finite and nonnegative");
    }
    if (!(sys.moment_order >= 2.0)) {
        throw Error(ErrorKind::InvalidRange, "moment order p must be at least 2");
    }
    if (!(sys.alpha > 0.0 && sys.alpha * sys.moment_order < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "taming exponent alpha must lie in (0, 1/p)");
    }
    require_zero_at_origin(sys.neutral, sys.dim_state, "G");
}

PathRecord::PathRecord(GridSpec grid, std::size_t dim)
    : grid_(std::move(grid)), dim_(dim), values_(grid_.point_count() * dim, 0.0) {}

std::size_t PathRecord::offset(std::int64_t n) const {
    if (n < -grid_.delay_steps() || n > grid_.steps()) {
        throw Error(ErrorKind::InvalidRange, "path index " + std::to_string(n) + " out of range");
    }
    return static_cast<std::size_t>(n + grid_.delay_steps()) * dim_;
}

ConstVec PathRecord::at(std::int64_t n) const { return ConstVec(values_).subspan(offset(n), dim_); }

Vec PathRecord::at(std::int64_t n) { return Vec(values_).subspan(offset(n), dim_); }

ConstVec PathRecord::forward_data() const noexcept {
    return ConstVec(values_).subspan(static_cast<std::size_t>(grid_.delay_steps()) * dim_);
}

void PathRecord::mark_exploded(std::int64_t from) {
    const std::size_t start = offset(from);
    std::fill(values_.begin() + static_cast<std::ptrdiff_t>(start), values_.end(),
              std::numeric_limits<double>::quiet_NaN());
    exploded_from_ = from;
}

double euclidean_norm(ConstVec v) noexcept {
    if (v.size() == 1) return std::fabs(v[0]);
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::fabs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (double x : v) {
        const double r = x / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

}  // namespace tamed
