#pragma once

#include "tamed/model.hpp"

namespace tamed {

/// b_h(x,y) = b(x,y) / (1 + h^alpha |b(x,y)|), Euclidean norm.
///
/// The transform keeps the direction of b and bounds the magnitude by
/// min(h^-alpha, |b|). It is total for any h in (0,1) and alpha > 0; the
/// admissible alpha range for each equation class is checked by `validate`.
class TamedDrift {
public:
    TamedDrift(DriftMap base, double h, double alpha);

    void operator()(ConstVec x, ConstVec y, Vec out) const;

    double step() const noexcept { return h_; }
    double alpha() const noexcept { return alpha_; }
    /// h^alpha, the coefficient in the denominator.
    double scale() const noexcept { return h_pow_alpha_; }
    /// h^-alpha, the uniform magnitude bound.
    double bound() const noexcept { return bound_; }

private:
    DriftMap base_;
    double h_;
    double alpha_;
    double h_pow_alpha_;
    double bound_;
};

TamedDrift tame(DriftMap base, double h, double alpha);

/// Applies the taming factor to an already evaluated drift vector.
void tame_in_place(Vec drift, double h_pow_alpha) noexcept;

}  // namespace tamed
