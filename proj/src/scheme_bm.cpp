#include "tamed/scheme_bm.hpp"

#include "tamed/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tamed {

namespace {

bool all_finite(ConstVec v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_grids(const InitialSegment& seg, const BrownianPathIncrements& drv,
                 const DiffusionSystem& sys) {
    if (!(seg.grid() == drv.grid())) {
        throw Error(ErrorKind::GridMismatch, "initial segment and Brownian increments use different grids");
    }
    if (seg.dim() != sys.dim_state || drv.dim() != sys.dim_noise) {
        throw Error(ErrorKind::GridMismatch, "segment or increment dimension does not match the system");
    }
}

PathRecord start_path(const InitialSegment& seg) {
    PathRecord path(seg.grid(), seg.dim());
    for (std::int64_t n = -seg.grid().delay_steps(); n <= 0; ++n) {
        auto src = seg.at(n);
        std::copy(src.begin(), src.end(), path.at(n).begin());
    }
    return path;
}

}  // namespace

BrownianStepper::BrownianStepper(const DiffusionSystem& sys, double h, bool tamed)
    : sys_(sys),
      h_(h),
      tamed_(tamed),
      h_pow_alpha_(std::pow(h, sys.alpha)),
      d_next_(sys.dim_state),
      d_prev_(sys.dim_state),
      drift_(sys.dim_state),
      drift_increment_(sys.dim_state),
      sigma_(sys.dim_state * sys.dim_noise) {}

void BrownianStepper::step(ConstVec y_n, ConstVec y_n_delay, ConstVec y_np1_delay, ConstVec dB,
                           Vec out, std::int64_t step_index) {
    const std::size_t n = sys_.dim_state;
    const std::size_t m = sys_.dim_noise;
    sys_.neutral(y_np1_delay, d_next_);
    sys_.neutral(y_n_delay, d_prev_);
    sys_.drift(y_n, y_n_delay, drift_);
    if (tamed_) tame_in_place(drift_, h_pow_alpha_);
    sys_.diffusion(y_n, y_n_delay, sigma_);
    for (std::size_t i = 0; i < n; ++i) {
        drift_increment_[i] = drift_[i] * h_;
        double noise = 0.0;
        for (std::size_t j = 0; j < m; ++j) noise += sigma_[i * m + j] * dB[j];
        out[i] = d_next_[i] + y_n[i] - d_prev_[i] + drift_increment_[i] + noise;
    }
    if (!all_finite(out)) {
        throw Error(ErrorKind::NonFiniteState,
                    "non-finite state produced at step " + std::to_string(step_index), step_index);
    }
}

std::vector<double> step_bm(const DiffusionSystem& sys, ConstVec y_n, ConstVec y_n_delay,
                            ConstVec y_np1_delay, double h, ConstVec dB) {
    for (ConstVec v : {y_n, y_n_delay, y_np1_delay, dB}) {
        if (!all_finite(v)) throw Error(ErrorKind::NonFiniteState, "non-finite input to step_bm");
    }
    BrownianStepper stepper(sys, h);
    std::vector<double> out(sys.dim_state);
    stepper.step(y_n, y_n_delay, y_np1_delay, dB, out);
    return out;
}

PathRecord simulate_bm(const DiffusionSystem& sys, const InitialSegment& seg,
                       const BrownianPathIncrements& drv) {
    check_grids(seg, drv, sys);
    const GridSpec& grid = seg.grid();
    const std::int64_t M = grid.steps();
    const std::int64_t Mbar = grid.delay_steps();
    PathRecord path = start_path(seg);
    BrownianStepper stepper(sys, grid.step_value());
    for (std::int64_t n = 0; n < M; ++n) {
        stepper.step(path.at(n), path.at(n - Mbar), path.at(n + 1 - Mbar), drv.at(n), path.at(n + 1), n);
    }
    return path;
}

PathRecord simulate_untamed(const DiffusionSystem& sys, const InitialSegment& seg,
                            const BrownianPathIncrements& drv, double explosion_threshold) {
    check_grids(seg, drv, sys);
    const GridSpec& grid = seg.grid();
    const std::int64_t M = grid.steps();
    const std::int64_t Mbar = grid.delay_steps();
    PathRecord path = start_path(seg);
    BrownianStepper stepper(sys, grid.step_value(), /*tamed=*/false);
    for (std::int64_t n = 0; n < M; ++n) {
        try {
            stepper.step(path.at(n), path.at(n - Mbar), path.at(n + 1 - Mbar), drv.at(n),
                         path.at(n + 1), n);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonFiniteState) throw;
            path.mark_exploded(n + 1);
            return path;
        }
        const auto next = path.at(n + 1);
        if (std::any_of(next.begin(), next.end(),
                        [&](double v) { return std::fabs(v) > explosion_threshold; })) {
            path.mark_exploded(n + 1);
            return path;
        }
    }
    return path;
}

}  // namespace tamed
