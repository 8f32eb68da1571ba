#pragma once

#include "tamed/driver.hpp"
#include "tamed/model.hpp"
#include "tamed/taming.hpp"

#include <span>
#include <vector>

namespace tamed {

/// Tamed EM step for NSDDEs driven by compensated marked Poisson noise:
///
///   z[n+1] = G(z[n+1-Mbar]) + z[n] - G(z[n-Mbar]) + f_h(z[n], z[n-Mbar]) h
///            + ( sum_i g(z[n], z[n-Mbar], u_i) - h Gc(z[n], z[n-Mbar]) )
///
/// where u_i are the marks of the events in the step window and Gc is the
/// closed-form compensator. The jump coefficient sees the pre-step values,
/// i.e. the left limits.
class JumpStepper {
public:
    JumpStepper(const JumpSystem& sys, double h);

    void step(ConstVec z_n, ConstVec z_n_delay, ConstVec z_np1_delay,
              std::span<const JumpEvent> step_events, Vec out, std::int64_t step_index = 0);

    /// f_h(z_n, z_n_delay) * h from the most recent step.
    ConstVec last_drift_increment() const noexcept { return drift_increment_; }
    /// The compensated jump term from the most recent step.
    ConstVec last_jump_increment() const noexcept { return jump_increment_; }

private:
    const JumpSystem& sys_;
    double h_;
    double h_pow_alpha_;
    std::vector<double> g_next_, g_prev_, drift_, drift_increment_, jump_value_, compensator_,
        jump_increment_;
};

std::vector<double> step_jump(const JumpSystem& sys, ConstVec z_n, ConstVec z_n_delay,
                              ConstVec z_np1_delay, double h, std::span<const JumpEvent> step_events);

/// Runs the recursion for n = 0..M-1 (indexing resolved as in simulate_bm),
/// feeding step n the events in (nh, (n+1)h]. Throws GridMismatch if the
/// segment grid differs from `grid` or the realization horizon differs from
/// T, and NonFiniteState with the failing step index.
PathRecord simulate_jump(const JumpSystem& sys, const InitialSegment& seg, const GridSpec& grid,
                         const JumpRealization& jr);

}  // namespace tamed
