#include "tamed/taming.hpp"

#include <cmath>

namespace tamed {

TamedDrift::TamedDrift(DriftMap base, double h, double alpha)
    : base_(std::move(base)),
      h_(h),
      alpha_(alpha),
      h_pow_alpha_(std::pow(h, alpha)),
      bound_(std::pow(h, -alpha)) {}

void TamedDrift::operator()(ConstVec x, ConstVec y, Vec out) const {
    base_(x, y, out);
    tame_in_place(out, h_pow_alpha_);
}

TamedDrift tame(DriftMap base, double h, double alpha) {
    return TamedDrift(std::move(base), h, alpha);
}

void tame_in_place(Vec drift, double h_pow_alpha) noexcept {
    // Same expression as the batched kernels so 1-d results agree bitwise.
    const double denom = 1.0 + h_pow_alpha * euclidean_norm(drift);
    for (double& v : drift) v = v / denom;
}

}  // namespace tamed
