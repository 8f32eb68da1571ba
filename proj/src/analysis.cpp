#include "tamed/analysis.hpp"

#include "tamed/error.hpp"
#include "tamed/kernels.hpp"
#include "tamed/parallel.hpp"
#include "tamed/scheme_bm.hpp"
#include "tamed/scheme_jump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tamed {

double sup_diff(const PathRecord& coarse, const PathRecord& fine, std::int64_t k) {
    const GridSpec& cg = coarse.grid();
    const GridSpec& fg = fine.grid();
    if (k < 1 || !(fg.horizon() == cg.horizon()) || !(fg.delay() == cg.delay()) ||
        !(fg.step() * Rational(k) == cg.step()) || coarse.dim() != fine.dim()) {
        throw Error(ErrorKind::GridMismatch, "fine path does not refine the coarse path by factor " +
                                                 std::to_string(k));
    }
    if (coarse.dim() == 1) {
        return kernels::max_abs_diff_strided(coarse.forward_data(), fine.forward_data(),
                                             static_cast<std::size_t>(k));
    }
    std::vector<double> diff(coarse.dim());
    double acc = 0.0;
    for (std::int64_t n = 0; n <= cg.steps(); ++n) {
        auto a = coarse.at(n);
        auto b = fine.at(k * n);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[i] - b[i];
        const double d = euclidean_norm(diff);
        acc = d > acc ? d : acc;
    }
    return acc;
}

double sup_norm(const PathRecord& path) {
    if (path.dim() == 1) return kernels::max_abs(path.forward_data());
    double acc = 0.0;
    for (std::int64_t n = 0; n <= path.grid().steps(); ++n) {
        const double d = euclidean_norm(path.at(n));
        acc = d > acc ? d : acc;
    }
    return acc;
}

double moment_estimate(std::span<const PathRecord> paths, double p) {
    if (paths.empty()) throw Error(ErrorKind::InsufficientData, "moment estimate needs at least one path");
    if (!(p >= 2.0)) throw Error(ErrorKind::InvalidRange, "moment order p must be at least 2");
    double sum = 0.0;
    for (const auto& path : paths) sum += std::pow(sup_norm(path), p);
    return sum / static_cast<double>(paths.size());
}

OrderFit fit_order(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw Error(ErrorKind::InsufficientData, "order fit needs at least two points");
    for (auto [h, err] : pairs) {
        if (!(h > 0.0) || !(err > 0.0)) {
            throw Error(ErrorKind::NonPositiveValue, "order fit needs strictly positive h and error");
        }
    }
    const auto n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (auto [h, err] : pairs) {
        mx += std::log(h);
        my += std::log(err);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto [h, err] : pairs) {
        const double dx = std::log(h) - mx;
        const double dy = std::log(err) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw Error(ErrorKind::InsufficientData, "order fit needs at least two distinct h");
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (auto [h, err] : pairs) {
        const double r = std::log(err) - (fit.intercept + fit.slope * std::log(h));
        ss_res += r * r;
    }
    // Flat data fitted exactly counts as a perfect fit.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

namespace {

struct Level {
    Rational h;
    std::int64_t factor;
    GridSpec grid;
};

struct Sweep {
    GridSpec ref_grid;
    std::vector<Level> levels;
};

Sweep plan_sweep(const StudyConfig& cfg) {
    if (cfg.h_list.empty()) throw Error(ErrorKind::InsufficientData, "h_list is empty");
    if (cfg.n_paths < 2) throw Error(ErrorKind::InsufficientData, "need at least two Monte Carlo paths");
    if (!(cfg.p >= 2.0)) throw Error(ErrorKind::InvalidRange, "error order p must be at least 2");
    Sweep sweep{build_grid(cfg.T, cfg.tau, cfg.h_ref), {}};
    std::vector<Rational> hs = cfg.h_list;
    std::sort(hs.begin(), hs.end(), [](const Rational& a, const Rational& b) { return a > b; });
    for (const Rational& h : hs) {
        const Rational ratio = h / cfg.h_ref;
        if (!ratio.is_integer() || ratio.num() < 1) {
            throw Error(ErrorKind::NotDivisible, "h = " + h.to_string() +
                                                     " is not an integer multiple of h_ref = " +
                                                     cfg.h_ref.to_string());
        }
        GridSpec grid = build_grid(cfg.T, cfg.tau, h);
        // Also checks that the factor divides M and Mbar of the reference grid.
        coarsen_grid(sweep.ref_grid, ratio.num());
        sweep.levels.push_back({h, ratio.num(), std::move(grid)});
    }
    return sweep;
}

struct PathSamples {
    // [level][path]
    std::vector<std::vector<double>> sup_diff;
    std::vector<std::vector<double>> sup_norm;

    PathSamples(std::size_t levels, std::size_t paths)
        : sup_diff(levels, std::vector<double>(paths)), sup_norm(levels, std::vector<double>(paths)) {}
};

double mean_of_powers(const std::vector<double>& xs, double p) {
    double sum = 0.0;
    for (double x : xs) sum += std::pow(x, p);
    return sum / static_cast<double>(xs.size());
}

ErrorReport summarize(const Sweep& sweep, const PathSamples& samples, const StudyConfig& cfg,
                      bool self_reference) {
    ErrorReport report;
    const auto N = static_cast<double>(cfg.n_paths);
    for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
        ErrorRow row;
        row.h = sweep.levels[l].h;
        row.n_paths = cfg.n_paths;
        row.p = cfg.p;
        double sum = 0.0;
        for (double d : samples.sup_diff[l]) sum += std::pow(d, cfg.p);
        row.err_p = sum / N;
        double ss = 0.0;
        for (double d : samples.sup_diff[l]) {
            const double r = std::pow(d, cfg.p) - row.err_p;
            ss += r * r;
        }
        row.std_error = std::sqrt(ss / (N - 1.0) / N);
        row.err_root = std::pow(row.err_p, 1.0 / cfg.p);
        row.moment_p = mean_of_powers(samples.sup_norm[l], cfg.p);
        for (double q : cfg.extra_moment_orders) {
            row.extra_moments.push_back({q, mean_of_powers(samples.sup_norm[l], q)});
        }
        report.rows.push_back(std::move(row));
    }
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : report.rows) {
        if (self_reference && row.h == cfg.h_ref) continue;
        if (row.err_p > 0.0) pairs.emplace_back(row.h.to_double(), row.err_p);
    }
    if (pairs.size() >= 2) report.fit = fit_order(pairs);
    return report;
}

ErrorReport brownian_study(const DiffusionSystem& sys, const SegmentFunction& xi,
                           const ExactPathFn* exact, const StudyConfig& cfg) {
    validate(sys);
    const Sweep sweep = plan_sweep(cfg);
    PathSamples samples(sweep.levels.size(), cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const auto inc = gen_brownian(sweep.ref_grid, sys.dim_noise,
                                      path_seed(cfg.base_seed, j, StreamTag::Brownian));
        const auto ref_seg = sample_segment(xi, sweep.ref_grid, sys.dim_state);
        const PathRecord ref = exact ? (*exact)(ref_seg, inc) : simulate_bm(sys, ref_seg, inc);
        for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
            const Level& level = sweep.levels[l];
            const auto seg = sample_segment(xi, level.grid, sys.dim_state);
            const PathRecord path = level.factor == 1 ? simulate_bm(sys, seg, inc)
                                                      : simulate_bm(sys, seg, coarsen(inc, level.factor));
            samples.sup_diff[l][j] = sup_diff(path, ref, level.factor);
            samples.sup_norm[l][j] = sup_norm(path);
        }
    });
    return summarize(sweep, samples, cfg, exact == nullptr);
}

void validate_jump_order(const JumpSystem& sys, double p) {
    validate(sys);
    if (!(sys.alpha * p < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "taming exponent alpha must lie in (0, 1/p) for p = " +
                                                 std::to_string(p));
    }
}

JumpRealization path_jumps(const JumpSystem& sys, const GridSpec& grid, const StudyConfig& cfg,
                           std::size_t j) {
    return gen_jumps(grid, sys.total_intensity, sys.dim_mark, sys.mark_sampler,
                     path_seed(cfg.base_seed, j, StreamTag::Jumps));
}

MomentReport summarize_moments(const Sweep& sweep, const PathSamples& samples,
                               const std::vector<std::vector<char>>& exploded, const StudyConfig& cfg) {
    MomentReport report;
    const auto N = static_cast<double>(cfg.n_paths);
    for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
        MomentRow row;
        row.h = sweep.levels[l].h;
        row.n_paths = cfg.n_paths;
        row.p = cfg.p;
        row.exploded = static_cast<std::size_t>(std::count(exploded[l].begin(), exploded[l].end(), 1));
        row.exploded_fraction = static_cast<double>(row.exploded) / N;
        if (row.exploded > 0) {
            row.moment_p = std::numeric_limits<double>::infinity();
            row.std_error = std::numeric_limits<double>::infinity();
        } else {
            row.moment_p = mean_of_powers(samples.sup_norm[l], cfg.p);
            double ss = 0.0;
            for (double x : samples.sup_norm[l]) {
                const double r = std::pow(x, cfg.p) - row.moment_p;
                ss += r * r;
            }
            row.std_error = std::sqrt(ss / (N - 1.0) / N);
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace

ErrorReport strong_error(const DiffusionSystem& sys, const SegmentFunction& xi,
                         const StudyConfig& cfg) {
    return brownian_study(sys, xi, nullptr, cfg);
}

ErrorReport strong_error(const DiffusionSystem& sys, const SegmentFunction& xi,
                         const ExactPathFn& exact, const StudyConfig& cfg) {
    return brownian_study(sys, xi, &exact, cfg);
}

ErrorReport strong_error(const JumpSystem& sys, const SegmentFunction& xi, const StudyConfig& cfg) {
    validate_jump_order(sys, cfg.p);
    const Sweep sweep = plan_sweep(cfg);
    PathSamples samples(sweep.levels.size(), cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const auto jr = path_jumps(sys, sweep.ref_grid, cfg, j);
        const PathRecord ref =
            simulate_jump(sys, sample_segment(xi, sweep.ref_grid, sys.dim_state), sweep.ref_grid, jr);
        for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
            const Level& level = sweep.levels[l];
            const PathRecord path =
                simulate_jump(sys, sample_segment(xi, level.grid, sys.dim_state), level.grid, jr);
            samples.sup_diff[l][j] = sup_diff(path, ref, level.factor);
            samples.sup_norm[l][j] = sup_norm(path);
        }
    });
    return summarize(sweep, samples, cfg, true);
}

MomentReport moment_sweep(const DiffusionSystem& sys, const SegmentFunction& xi,
                          const StudyConfig& cfg, const MomentOptions& opts) {
    validate(sys);
    const Sweep sweep = plan_sweep(cfg);
    PathSamples samples(sweep.levels.size(), cfg.n_paths);
    std::vector<std::vector<char>> exploded(sweep.levels.size(), std::vector<char>(cfg.n_paths, 0));
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const auto inc = gen_brownian(sweep.ref_grid, sys.dim_noise,
                                      path_seed(cfg.base_seed, j, StreamTag::Brownian));
        for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
            const Level& level = sweep.levels[l];
            const auto seg = sample_segment(xi, level.grid, sys.dim_state);
            const auto drv = level.factor == 1 ? inc : coarsen(inc, level.factor);
            const PathRecord path = opts.untamed
                                        ? simulate_untamed(sys, seg, drv, opts.explosion_threshold)
                                        : simulate_bm(sys, seg, drv);
            const double norm = path.exploded() ? std::numeric_limits<double>::infinity() : sup_norm(path);
            exploded[l][j] = (path.exploded() || norm > opts.explosion_threshold) ? 1 : 0;
            samples.sup_norm[l][j] = norm;
        }
    });
    return summarize_moments(sweep, samples, exploded, cfg);
}

MomentReport moment_sweep(const JumpSystem& sys, const SegmentFunction& xi, const StudyConfig& cfg,
                          const MomentOptions& opts) {
    if (opts.untamed) {
        throw Error(ErrorKind::InvalidRange, "the untamed contrast is only defined for Brownian systems");
    }
    validate_jump_order(sys, cfg.p);
    const Sweep sweep = plan_sweep(cfg);
    PathSamples samples(sweep.levels.size(), cfg.n_paths);
    std::vector<std::vector<char>> exploded(sweep.levels.size(), std::vector<char>(cfg.n_paths, 0));
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const auto jr = path_jumps(sys, sweep.ref_grid, cfg, j);
        for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
            const Level& level = sweep.levels[l];
            const PathRecord path =
                simulate_jump(sys, sample_segment(xi, level.grid, sys.dim_state), level.grid, jr);
            const double norm = sup_norm(path);
            exploded[l][j] = norm > opts.explosion_threshold ? 1 : 0;
            samples.sup_norm[l][j] = norm;
        }
    });
    return summarize_moments(sweep, samples, exploded, cfg);
}

}  // namespace tamed
