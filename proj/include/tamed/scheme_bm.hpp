#pragma once

#include "tamed/driver.hpp"
#include "tamed/model.hpp"
#include "tamed/taming.hpp"

#include <vector>

namespace tamed {

/// One-step map of the tamed Euler-Maruyama scheme for Brownian NSDDEs:
///
///   Y[n+1] = D(Y[n+1-Mbar]) + Y[n] - D(Y[n-Mbar]) + b_h(Y[n], Y[n-Mbar]) h
///            + sigma(Y[n], Y[n-Mbar]) dB[n]
///
/// with the terms added left to right in that order. With `tamed == false`
/// the raw drift b is used instead of b_h (the classical EM contrast).
///
/// Holds scratch buffers, so one stepper per thread.
class BrownianStepper {
public:
    BrownianStepper(const DiffusionSystem& sys, double h, bool tamed = true);

    /// Writes Y[n+1] into `out`. Throws NonFiniteState (stamped with
    /// `step_index`) if the result is not finite.
    void step(ConstVec y_n, ConstVec y_n_delay, ConstVec y_np1_delay, ConstVec dB, Vec out,
              std::int64_t step_index = 0);

    /// b_h(y_n, y_n_delay) * h from the most recent step.
    ConstVec last_drift_increment() const noexcept { return drift_increment_; }

private:
    const DiffusionSystem& sys_;
    double h_;
    bool tamed_;
    double h_pow_alpha_;
    std::vector<double> d_next_, d_prev_, drift_, drift_increment_, sigma_;
};

std::vector<double> step_bm(const DiffusionSystem& sys, ConstVec y_n, ConstVec y_n_delay,
                            ConstVec y_np1_delay, double h, ConstVec dB);

/// Runs the recursion for n = 0..M-1 from Y[n] = xi(nh), n = -Mbar..0.
///
/// Starting at n = 0 (rather than 1) is what defines Y[1].
/// Delayed lookups Y[n-Mbar] and Y[n+1-Mbar] fall into the initial segment
/// while n < Mbar.
///
/// Throws GridMismatch if the segment or increments live on another grid, and
/// NonFiniteState with the failing step index.
PathRecord simulate_bm(const DiffusionSystem& sys, const InitialSegment& seg,
                       const BrownianPathIncrements& drv);

/// Same recursion with the untamed drift. Once any component exceeds
/// `explosion_threshold` in magnitude (or stops being finite) the record is
/// flagged exploded from that index on; this is an outcome, not an error.
PathRecord simulate_untamed(const DiffusionSystem& sys, const InitialSegment& seg,
                            const BrownianPathIncrements& drv, double explosion_threshold);

}  // namespace tamed
