#include "tamed/problems.hpp"

#include "tamed/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tamed {

namespace {

double cube(double v) { return v * v * v; }

void zero_neutral(ConstVec, Vec out) { std::fill(out.begin(), out.end(), 0.0); }

MarkSampler uniform_marks(double mean_mark) {
    return [upper = 2.0 * mean_mark](std::mt19937_64& engine, Vec mark) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        mark[0] = upper * unit(engine);
    };
}

// E[u^p] for u uniform on [0, upper].
double uniform_moment(double upper, double p) { return std::pow(upper, p) / (p + 1.0); }

}  // namespace

BrownianProblem make_gbm(double mu, double sigma_hat, double x0) {
    DiffusionSystem sys;
    sys.neutral = zero_neutral;
    sys.drift = [mu](ConstVec x, ConstVec, Vec out) { out[0] = mu * x[0]; };
    sys.diffusion = [sigma_hat](ConstVec x, ConstVec, Vec out) { out[0] = sigma_hat * x[0]; };
    sys.kappa = 0.5;
    sys.growth_K = 1.0 + std::fabs(mu) + sigma_hat * sigma_hat;
    sys.lip_L = 1.0 + std::fabs(mu) + sigma_hat * sigma_hat;
    sys.poly_l = 1.0;
    sys.alpha = 0.5;

    BrownianProblem problem;
    problem.id = "gbm";
    problem.system = std::move(sys);
    problem.segment = constant_segment({x0});
    const double drift_rate = mu - 0.5 * sigma_hat * sigma_hat;
    problem.exact_path = [=](const InitialSegment& seg, const BrownianPathIncrements& inc) {
        const GridSpec& grid = inc.grid();
        PathRecord path(grid, 1);
        for (std::int64_t n = -grid.delay_steps(); n <= 0; ++n) path.at(n)[0] = seg.at(n)[0];
        const auto B = inc.partial_sums();
        for (std::int64_t n = 1; n <= grid.steps(); ++n) {
            path.at(n)[0] = x0 * std::exp(drift_rate * grid.time(n) + sigma_hat * B[static_cast<std::size_t>(n)]);
        }
        return path;
    };
    problem.exact_terminal = [=](const BrownianPathIncrements& inc) {
        double BT = 0.0;
        for (double v : inc.data()) BT += v;
        return x0 * std::exp(drift_rate * inc.grid().horizon().to_double() + sigma_hat * BT);
    };
    return problem;
}

DiffusionSystem make_cubic_neutral(double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidRange, "kappa must lie in (0,1)");
    DiffusionSystem sys;
    sys.neutral = [kappa](ConstVec y, Vec out) { out[0] = kappa * y[0]; };
    sys.drift = [kappa](ConstVec x, ConstVec y, Vec out) { out[0] = -cube(x[0] - kappa * y[0]) + y[0]; };
    sys.diffusion = [](ConstVec x, ConstVec y, Vec out) { out[0] = 0.2 * x[0] + 0.1 * y[0]; };
    sys.kappa = kappa;
    sys.growth_K = 1.0;
    sys.lip_L = 3.0;
    sys.poly_l = 2.0;
    sys.alpha = 0.5;
    return sys;
}

DiffusionSystem make_broken_cubic() {
    DiffusionSystem sys;
    sys.neutral = zero_neutral;
    sys.drift = [](ConstVec x, ConstVec, Vec out) { out[0] = cube(x[0]); };
    sys.diffusion = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.kappa = 0.5;
    sys.growth_K = 1.0;
    sys.lip_L = 1.0;
    sys.poly_l = 1.0;
    sys.alpha = 0.5;
    return sys;
}

DiffusionSystem make_zero_system() {
    DiffusionSystem sys;
    sys.neutral = zero_neutral;
    sys.drift = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.diffusion = [](ConstVec, ConstVec, Vec out) { out[0] = 0.0; };
    sys.kappa = 0.5;
    sys.growth_K = 1.0;
    sys.lip_L = 1.0;
    sys.poly_l = 1.0;
    sys.alpha = 0.5;
    return sys;
}

JumpSystem make_jump_linear(double lambda_tot, double mean_mark, double moment_order) {
    if (!(lambda_tot >= 0.0) || !(mean_mark >= 0.0)) {
        throw Error(ErrorKind::InvalidRange, "jump_linear needs lambda_tot >= 0 and mean_mark >= 0");
    }
    JumpSystem sys;
    sys.neutral = zero_neutral;
    sys.drift = [](ConstVec x, ConstVec, Vec out) { out[0] = -x[0]; };
    sys.jump = [](ConstVec x, ConstVec, ConstVec u, Vec out) { out[0] = x[0] * u[0]; };
    const double rate = lambda_tot * mean_mark;
    sys.compensator = [rate](ConstVec x, ConstVec, Vec out) { out[0] = x[0] * rate; };
    sys.total_intensity = lambda_tot;
    sys.mark_sampler = uniform_marks(mean_mark);
    sys.kappa = 0.5;
    const double jump_moment = lambda_tot * uniform_moment(2.0 * mean_mark, moment_order);
    // 25% headroom over the exact mark integral absorbs the auditor's Monte Carlo error.
    sys.growth_K1 = 1.25 * std::max(1.0, jump_moment);
    sys.lip_L = 1.25 * std::max(1.0, jump_moment);
    sys.poly_l = 1.0;
    sys.alpha = 0.2;
    sys.moment_order = moment_order;
    return sys;
}

JumpSystem make_jump_cubic_neutral(double kappa, double lambda_tot, double mean_mark,
                                   double moment_order) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidRange, "kappa must lie in (0,1)");
    if (!(lambda_tot >= 0.0) || !(mean_mark >= 0.0)) {
        throw Error(ErrorKind::InvalidRange, "jump_cubic_neutral needs lambda_tot >= 0 and mean_mark >= 0");
    }
    JumpSystem sys;
    sys.neutral = [kappa](ConstVec y, Vec out) { out[0] = kappa * y[0]; };
    sys.drift = [kappa](ConstVec x, ConstVec y, Vec out) { out[0] = -cube(x[0] - kappa * y[0]) + y[0]; };
    sys.jump = [](ConstVec x, ConstVec, ConstVec u, Vec out) { out[0] = 0.1 * x[0] * u[0]; };
    const double rate = 0.1 * lambda_tot * mean_mark;
    sys.compensator = [rate](ConstVec x, ConstVec, Vec out) { out[0] = x[0] * rate; };
    sys.total_intensity = lambda_tot;
    sys.mark_sampler = uniform_marks(mean_mark);
    sys.kappa = kappa;
    const double jump_moment = lambda_tot * std::pow(0.1, moment_order) *
                               uniform_moment(2.0 * mean_mark, moment_order);
    sys.growth_K1 = 1.25 * std::max(1.0, jump_moment);
    sys.lip_L = std::max(3.0, 1.25 * jump_moment);
    sys.poly_l = 2.0;
    sys.alpha = 0.2;
    sys.moment_order = moment_order;
    return sys;
}

std::vector<std::string> brownian_problem_ids() { return {"gbm", "cubic_neutral", "broken_cubic", "zero"}; }

std::vector<std::string> jump_problem_ids() { return {"jump_linear", "jump_cubic_neutral"}; }

bool is_jump_problem(std::string_view id) {
    const auto ids = jump_problem_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {

double take(const ProblemParams& params, std::string_view key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const ProblemParams& params, std::string_view id,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorKind::ConfigError,
                        "problem '" + std::string(id) + "' does not take parameter '" + key + "'");
        }
    }
}

}  // namespace

BrownianProblem brownian_problem(std::string_view id, const ProblemParams& params) {
    if (id == "gbm") {
        reject_unknown(params, id, {"mu", "sigma_hat", "x0"});
        return make_gbm(take(params, "mu", 0.05), take(params, "sigma_hat", 0.2), take(params, "x0", 1.0));
    }
    BrownianProblem problem;
    problem.id = std::string(id);
    if (id == "cubic_neutral") {
        reject_unknown(params, id, {"kappa", "x0"});
        problem.system = make_cubic_neutral(take(params, "kappa", 0.25));
    } else if (id == "broken_cubic") {
        reject_unknown(params, id, {"x0"});
        problem.system = make_broken_cubic();
    } else if (id == "zero") {
        reject_unknown(params, id, {"x0"});
        problem.system = make_zero_system();
    } else {
        throw Error(ErrorKind::UnknownProblem, "unknown Brownian problem '" + std::string(id) + "'");
    }
    problem.segment = constant_segment({take(params, "x0", 1.0)});
    return problem;
}

JumpProblem jump_problem(std::string_view id, const ProblemParams& params, double moment_order) {
    JumpProblem problem;
    problem.id = std::string(id);
    if (id == "jump_linear") {
        reject_unknown(params, id, {"lambda_tot", "mean_mark", "x0"});
        problem.system = make_jump_linear(take(params, "lambda_tot", 2.0), take(params, "mean_mark", 0.5),
                                          moment_order);
    } else if (id == "jump_cubic_neutral") {
        reject_unknown(params, id, {"kappa", "lambda_tot", "mean_mark", "x0"});
        problem.system = make_jump_cubic_neutral(take(params, "kappa", 0.25), take(params, "lambda_tot", 1.0),
                                                 take(params, "mean_mark", 0.5), moment_order);
    } else {
        throw Error(ErrorKind::UnknownProblem, "unknown jump problem '" + std::string(id) + "'");
    }
    problem.segment = constant_segment({take(params, "x0", 1.0)});
    return problem;
}

// ---------------------------------------------------------------------------
// Assumption auditor

bool AuditReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AssumptionCheck& c) { return c.max_violation == 0.0; });
}

const AssumptionCheck* AuditReport::find(std::string_view id) const noexcept {
    for (const auto& c : checks) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

namespace {

double dot(ConstVec a, ConstVec b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_norm(ConstVec a) { return dot(a, a); }

double power(double v, double p) { return p == 2.0 ? v * v : std::pow(v, p); }

class BallSampler {
public:
    BallSampler(std::size_t dim, double radius, std::uint64_t seed)
        : dim_(dim), radius_(radius), engine_(make_engine(seed)) {}

    void draw(Vec out) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (dim_ == 1) {
            out[0] = radius_ * (2.0 * unit(engine_) - 1.0);
            return;
        }
        std::normal_distribution<double> normal(0.0, 1.0);
        double norm = 0.0;
        do {
            for (double& v : out) v = normal(engine_);
            norm = euclidean_norm(out);
        } while (norm == 0.0);
        const double r = radius_ * std::pow(unit(engine_), 1.0 / static_cast<double>(dim_));
        for (double& v : out) v *= r / norm;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::size_t dim_;
    double radius_;
    std::mt19937_64 engine_;
};

/// Running maximum of lhs / (C * shape) for one inequality.
class InequalityTracker {
public:
    InequalityTracker(std::string id, std::string inequality, double constant)
        : check_{std::move(id), std::move(inequality), constant, 0.0, 0.0, {}} {}

    void observe(double lhs, double shape, std::initializer_list<ConstVec> point) {
        if (shape > 0.0) {
            const double ratio = lhs / shape;
            if (ratio > check_.empirical_constant) {
                check_.empirical_constant = ratio;
                if (check_.max_violation == 0.0) remember(point);
            }
        }
        const double bound = check_.constant_used * shape;
        const double excess = lhs - bound;
        const double scale = std::max({std::fabs(bound), std::fabs(lhs), std::numeric_limits<double>::min()});
        if (excess > kAuditRoundingSlack * scale) {
            const double rel = excess / std::max(std::fabs(bound), std::numeric_limits<double>::min());
            if (rel > check_.max_violation) {
                check_.max_violation = rel;
                remember(point);
            }
        }
    }

    AssumptionCheck result() const { return check_; }

private:
    void remember(std::initializer_list<ConstVec> point) {
        check_.witness.clear();
        for (ConstVec v : point) check_.witness.insert(check_.witness.end(), v.begin(), v.end());
    }

    AssumptionCheck check_;
};

AssumptionCheck origin_check(const NeutralMap& neutral, std::size_t dim, const char* id,
                             const char* inequality) {
    std::vector<double> zero(dim, 0.0), out(dim, 0.0);
    neutral(zero, out);
    AssumptionCheck c{id, inequality, 0.0, euclidean_norm(out), euclidean_norm(out), zero};
    return c;
}

double poly_weight(double l, ConstVec x, ConstVec y, ConstVec xb, ConstVec yb) {
    return 1.0 + std::pow(euclidean_norm(x), l) + std::pow(euclidean_norm(y), l) +
           std::pow(euclidean_norm(xb), l) + std::pow(euclidean_norm(yb), l);
}

struct PointSet {
    std::vector<double> x, y, xb, yb;
    explicit PointSet(std::size_t n) : x(n), y(n), xb(n), yb(n) {}
    void draw(BallSampler& s) {
        s.draw(x);
        s.draw(y);
        s.draw(xb);
        s.draw(yb);
    }
};

std::vector<double> diff(ConstVec a, ConstVec b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

}  // namespace

AuditReport audit_assumptions(const DiffusionSystem& sys, std::size_t n_samples, double radius,
                              std::uint64_t seed) {
    if (n_samples < 1) throw Error(ErrorKind::InsufficientData, "audit needs at least one sample");
    const std::size_t n = sys.dim_state;
    const std::size_t m = sys.dim_noise;
    BallSampler sampler(n, radius, seed);
    PointSet pts(n);
    std::vector<double> dy(n), dyb(n), b(n), bb(n), sig(n * m), sigb(n * m);

    InequalityTracker a1_drift("A1.drift", "<x-D(y), b(x,y)> <= K(1+|x|^2+|y|^2)", sys.growth_K);
    InequalityTracker a1_diff("A1.diffusion", "||sigma(x,y)||^2 <= K(1+|x|^2+|y|^2)", sys.growth_K);
    InequalityTracker a2("A2.lipschitz", "|D(x)-D(x')| <= kappa|x-x'|", sys.kappa);
    InequalityTracker a4_mono("A4.monotone",
                              "<x-D(y)-x'+D(y'), b-b'> + ||sigma-sigma'||^2 <= L(|x-x'|^2+|y-y'|^2)",
                              sys.lip_L);
    InequalityTracker a4_poly("A4.polynomial",
                              "|b-b'| <= L(1+|x|^l+|y|^l+|x'|^l+|y'|^l)(|x-x'|+|y-y'|)", sys.lip_L);
    double local_bound = 0.0;
    double local_mono = 0.0;

    for (std::size_t s = 0; s < n_samples; ++s) {
        pts.draw(sampler);
        const auto& [x, y, xb, yb] = std::tie(pts.x, pts.y, pts.xb, pts.yb);
        sys.neutral(y, dy);
        sys.neutral(yb, dyb);
        sys.drift(x, y, b);
        sys.drift(xb, yb, bb);
        sys.diffusion(x, y, sig);
        sys.diffusion(xb, yb, sigb);

        const double growth = 1.0 + sq_norm(x) + sq_norm(y);
        const auto u = diff(x, dy);
        a1_drift.observe(dot(u, b), growth, {x, y});
        a1_diff.observe(sq_norm(sig), growth, {x, y});

        std::vector<double> dx_img(n);
        sys.neutral(x, dx_img);
        std::vector<double> dxb_img(n);
        sys.neutral(xb, dxb_img);
        a2.observe(euclidean_norm(diff(dx_img, dxb_img)), euclidean_norm(diff(x, xb)), {x, xb});

        const auto du = diff(u, diff(xb, dyb));
        const auto db = diff(b, bb);
        const double dsig = sq_norm(diff(sig, sigb));
        const double dxy2 = sq_norm(diff(x, xb)) + sq_norm(diff(y, yb));
        const double mono = dot(du, db);
        a4_mono.observe(mono + dsig, dxy2, {x, y, xb, yb});
        const double dxy1 = euclidean_norm(diff(x, xb)) + euclidean_norm(diff(y, yb));
        a4_poly.observe(euclidean_norm(db), poly_weight(sys.poly_l, x, y, xb, yb) * dxy1, {x, y, xb, yb});

        local_bound = std::max({local_bound, euclidean_norm(b), euclidean_norm(bb)});
        if (dxy2 > 0.0) local_mono = std::max(local_mono, std::max(mono, dsig) / dxy2);
    }

    AuditReport report;
    report.system_kind = "diffusion";
    report.radius = radius;
    report.n_samples = n_samples;
    report.seed = seed;
    report.checks = {a1_drift.result(), a1_diff.result(),
                     origin_check(sys.neutral, n, "A2.origin", "D(0) = 0"), a2.result(),
                     a4_mono.result(), a4_poly.result()};
    report.local_drift_bound = local_bound;
    report.local_monotone_constant = local_mono;
    return report;
}

AuditReport audit_assumptions(const JumpSystem& sys, std::size_t n_samples, double radius,
                              std::uint64_t seed) {
    if (n_samples < 1) throw Error(ErrorKind::InsufficientData, "audit needs at least one sample");
    constexpr std::size_t kMarkSamples = 10000;
    const std::size_t n = sys.dim_state;
    const double p = sys.moment_order;
    BallSampler sampler(n, radius, seed);

    std::vector<double> marks(kMarkSamples * sys.dim_mark);
    {
        auto engine = make_engine(path_seed(seed, 0, StreamTag::Audit));
        for (std::size_t k = 0; k < kMarkSamples; ++k) {
            sys.mark_sampler(engine, Vec(marks).subspan(k * sys.dim_mark, sys.dim_mark));
        }
    }
    auto mark = [&](std::size_t k) { return ConstVec(marks).subspan(k * sys.dim_mark, sys.dim_mark); };

    PointSet pts(n);
    std::vector<double> gy(n), gyb(n), f(n), fb(n), g(n), gb(n), gx(n), gxb(n);

    InequalityTracker b1_drift("B1.drift", "2<x-G(y), f(x,y)> <= K1(1+|x|^2+|y|^2)", sys.growth_K1);
    InequalityTracker b1_jump("B1.jump", "int |g(x,y,u)|^p lambda(du) <= K1(1+|x|^p+|y|^p)", sys.growth_K1);
    InequalityTracker b2("B2.lipschitz", "|G(x)-G(x')| <= kappa|x-x'|", sys.kappa);
    InequalityTracker b4_mono("B4.monotone", "2<x-G(y)-x'+G(y'), f-f'> <= L(|x-x'|^2+|y-y'|^2)", sys.lip_L);
    InequalityTracker b4_jump("B4.jump", "int |g-g'|^p lambda(du) <= L(|x-x'|^p+|y-y'|^p)", sys.lip_L);
    InequalityTracker b4_poly("B4.polynomial",
                              "|f-f'| <= L(1+|x|^l+|y|^l+|x'|^l+|y'|^l)(|x-x'|+|y-y'|)", sys.lip_L);
    double local_bound = 0.0;
    double local_mono = 0.0;

    for (std::size_t s = 0; s < n_samples; ++s) {
        pts.draw(sampler);
        const auto& [x, y, xb, yb] = std::tie(pts.x, pts.y, pts.xb, pts.yb);
        sys.neutral(y, gy);
        sys.neutral(yb, gyb);
        sys.drift(x, y, f);
        sys.drift(xb, yb, fb);

        const auto u = diff(x, gy);
        b1_drift.observe(2.0 * dot(u, f), 1.0 + sq_norm(x) + sq_norm(y), {x, y});

        double jump_int = 0.0, jump_diff_int = 0.0;
        for (std::size_t k = 0; k < kMarkSamples; ++k) {
            sys.jump(x, y, mark(k), g);
            sys.jump(xb, yb, mark(k), gb);
            jump_int += power(euclidean_norm(g), p);
            jump_diff_int += power(euclidean_norm(diff(g, gb)), p);
        }
        jump_int *= sys.total_intensity / static_cast<double>(kMarkSamples);
        jump_diff_int *= sys.total_intensity / static_cast<double>(kMarkSamples);
        const double nx = euclidean_norm(x), ny = euclidean_norm(y);
        b1_jump.observe(jump_int, 1.0 + power(nx, p) + power(ny, p), {x, y});

        sys.neutral(x, gx);
        sys.neutral(xb, gxb);
        b2.observe(euclidean_norm(diff(gx, gxb)), euclidean_norm(diff(x, xb)), {x, xb});

        const auto du = diff(u, diff(xb, gyb));
        const auto df = diff(f, fb);
        const double dx_n = euclidean_norm(diff(x, xb));
        const double dy_n = euclidean_norm(diff(y, yb));
        const double dxy2 = dx_n * dx_n + dy_n * dy_n;
        const double mono = 2.0 * dot(du, df);
        b4_mono.observe(mono, dxy2, {x, y, xb, yb});
        b4_jump.observe(jump_diff_int, power(dx_n, p) + power(dy_n, p), {x, y, xb, yb});
        b4_poly.observe(euclidean_norm(df), poly_weight(sys.poly_l, x, y, xb, yb) * (dx_n + dy_n),
                        {x, y, xb, yb});

        local_bound = std::max({local_bound, euclidean_norm(f), euclidean_norm(fb)});
        if (dxy2 > 0.0) local_mono = std::max(local_mono, mono / dxy2);
    }

    AuditReport report;
    report.system_kind = "jump";
    report.radius = radius;
    report.n_samples = n_samples;
    report.seed = seed;
    report.checks = {b1_drift.result(), b1_jump.result(),
                     origin_check(sys.neutral, n, "B2.origin", "G(0) = 0"), b2.result(),
                     b4_mono.result(), b4_jump.result(), b4_poly.result()};
    report.local_drift_bound = local_bound;
    report.local_monotone_constant = local_mono;
    return report;
}

}  // namespace tamed
