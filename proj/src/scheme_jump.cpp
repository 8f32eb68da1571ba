#include "tamed/scheme_jump.hpp"

#include "tamed/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tamed {

JumpStepper::JumpStepper(const JumpSystem& sys, double h)
    : sys_(sys),
      h_(h),
      h_pow_alpha_(std::pow(h, sys.alpha)),
      g_next_(sys.dim_state),
      g_prev_(sys.dim_state),
      drift_(sys.dim_state),
      drift_increment_(sys.dim_state),
      jump_value_(sys.dim_state),
      compensator_(sys.dim_state),
      jump_increment_(sys.dim_state) {}

void JumpStepper::step(ConstVec z_n, ConstVec z_n_delay, ConstVec z_np1_delay,
                       std::span<const JumpEvent> step_events, Vec out, std::int64_t step_index) {
    const std::size_t n = sys_.dim_state;
    sys_.neutral(z_np1_delay, g_next_);
    sys_.neutral(z_n_delay, g_prev_);
    sys_.drift(z_n, z_n_delay, drift_);
    tame_in_place(drift_, h_pow_alpha_);
    sys_.compensator(z_n, z_n_delay, compensator_);

    std::fill(jump_increment_.begin(), jump_increment_.end(), 0.0);
    for (const auto& event : step_events) {
        sys_.jump(z_n, z_n_delay, event.mark, jump_value_);
        for (std::size_t i = 0; i < n; ++i) jump_increment_[i] += jump_value_[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        jump_increment_[i] = jump_increment_[i] - h_ * compensator_[i];
        drift_increment_[i] = drift_[i] * h_;
        out[i] = g_next_[i] + z_n[i] - g_prev_[i] + drift_increment_[i] + jump_increment_[i];
    }
    if (!std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::NonFiniteState,
                    "non-finite state produced at step " + std::to_string(step_index), step_index);
    }
}

std::vector<double> step_jump(const JumpSystem& sys, ConstVec z_n, ConstVec z_n_delay,
                              ConstVec z_np1_delay, double h, std::span<const JumpEvent> step_events) {
    for (ConstVec v : {z_n, z_n_delay, z_np1_delay}) {
        if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
            throw Error(ErrorKind::NonFiniteState, "non-finite input to step_jump");
        }
    }
    JumpStepper stepper(sys, h);
    std::vector<double> out(sys.dim_state);
    stepper.step(z_n, z_n_delay, z_np1_delay, step_events, out);
    return out;
}

PathRecord simulate_jump(const JumpSystem& sys, const InitialSegment& seg, const GridSpec& grid,
                         const JumpRealization& jr) {
    if (!(seg.grid() == grid)) {
        throw Error(ErrorKind::GridMismatch, "initial segment lives on a different grid");
    }
    if (!(jr.horizon() == grid.horizon())) {
        throw Error(ErrorKind::GridMismatch, "jump realization horizon " + jr.horizon().to_string() +
                                                 " differs from T = " + grid.horizon().to_string());
    }
    if (seg.dim() != sys.dim_state || jr.mark_dim() != sys.dim_mark) {
        throw Error(ErrorKind::GridMismatch, "segment or mark dimension does not match the system");
    }
    const std::int64_t M = grid.steps();
    const std::int64_t Mbar = grid.delay_steps();
    PathRecord path(grid, seg.dim());
    for (std::int64_t n = -Mbar; n <= 0; ++n) {
        auto src = seg.at(n);
        std::copy(src.begin(), src.end(), path.at(n).begin());
    }
    JumpStepper stepper(sys, grid.step_value());
    for (std::int64_t n = 0; n < M; ++n) {
        stepper.step(path.at(n), path.at(n - Mbar), path.at(n + 1 - Mbar),
                     events_in_step(jr, n, grid.step()), path.at(n + 1), n);
    }
    return path;
}

}  // namespace tamed
