#include "tamed/cli.hpp"

#include "tamed/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tamed {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// nlohmann renders non-finite doubles as null; keep them readable instead.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json fit_json(const std::optional<OrderFit>& fit) {
    if (!fit) return nullptr;
    return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r_squared", fit->r_squared}};
}

}  // namespace

json to_json(const ErrorReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json extra = json::array();
        for (const auto& m : r.extra_moments) extra.push_back({{"order", m.order}, {"value", number(m.value)}});
        rows.push_back({{"h", r.h.to_double()},
                        {"h_exact", r.h.to_string()},
                        {"n_paths", r.n_paths},
                        {"p", r.p},
                        {"err_p", number(r.err_p)},
                        {"err_root", number(r.err_root)},
                        {"stderr", number(r.std_error)},
                        {"moment_p", number(r.moment_p)},
                        {"extra_moments", extra}});
    }
    return {{"rows", rows}, {"fit", fit_json(report.fit)}};
}

json to_json(const MomentReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"h", r.h.to_double()},
                        {"h_exact", r.h.to_string()},
                        {"n_paths", r.n_paths},
                        {"p", r.p},
                        {"moment_p", number(r.moment_p)},
                        {"stderr", number(r.std_error)},
                        {"exploded", r.exploded},
                        {"exploded_fraction", r.exploded_fraction}});
    }
    return {{"rows", rows}};
}

json to_json(const AuditReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"id", c.id},
                          {"inequality", c.inequality},
                          {"constant_used", c.constant_used},
                          {"max_violation", number(c.max_violation)},
                          {"empirical_constant", number(c.empirical_constant)},
                          {"witness", c.witness}});
    }
    return {{"system_kind", report.system_kind},
            {"radius", report.radius},
            {"n_samples", report.n_samples},
            {"seed", report.seed},
            {"passed", report.passed()},
            {"checks", checks},
            {"local_drift_bound", number(report.local_drift_bound)},
            {"local_monotone_constant", number(report.local_monotone_constant)}};
}

std::string to_csv(const ErrorReport& report) {
    std::ostringstream os;
    os << "h,n_paths,p,err_p,err_root,stderr,moment_p\n";
    for (const auto& r : report.rows) {
        os << format_double(r.h.to_double()) << ',' << r.n_paths << ',' << format_double(r.p) << ','
           << format_double(r.err_p) << ',' << format_double(r.err_root) << ',' << format_double(r.std_error)
           << ',' << format_double(r.moment_p) << '\n';
    }
    return os.str();
}

std::string to_csv(const MomentReport& report) {
    std::ostringstream os;
    os << "h,n_paths,p,moment_p,stderr,exploded,exploded_fraction\n";
    for (const auto& r : report.rows) {
        os << format_double(r.h.to_double()) << ',' << r.n_paths << ',' << format_double(r.p) << ','
           << format_double(r.moment_p) << ',' << format_double(r.std_error) << ',' << r.exploded << ','
           << format_double(r.exploded_fraction) << '\n';
    }
    return os.str();
}

std::string to_csv(const PathRecord& path) {
    std::ostringstream os;
    os << "n,t";
    if (path.dim() == 1) {
        os << ",x";
    } else {
        for (std::size_t i = 0; i < path.dim(); ++i) os << ",x" << i;
    }
    os << '\n';
    const GridSpec& grid = path.grid();
    for (std::int64_t n = -grid.delay_steps(); n <= grid.steps(); ++n) {
        os << n << ',' << format_double(grid.time(n));
        for (double v : path.at(n)) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

json error_json(const Error& e) {
    json j = {{"error", to_string(e.kind())}, {"message", e.what()}};
    if (e.step()) j["step"] = *e.step();
    return j;
}

}  // namespace tamed
