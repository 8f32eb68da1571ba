#include "tamed/cli.hpp"

#include "tamed/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace tamed {

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Simulate: return "simulate";
        case Mode::Converge: return "converge";
        case Mode::Moments: return "moments";
        case Mode::Check: return "check";
    }
    return "unknown";
}

std::string_view to_string(DriverKind kind) noexcept {
    return kind == DriverKind::Brownian ? "brownian" : "jump";
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const YAML::Node& node, std::string_view field, const std::string& what) const {
        const YAML::Mark mark = node.Mark();
        std::ostringstream os;
        os << source_;
        if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
        os << ": field '" << field << "': " << what;
        throw Error(ErrorKind::ConfigError, os.str());
    }

    std::string scalar(const YAML::Node& node, std::string_view field) const {
        if (!node.IsScalar()) fail(node, field, "expected a scalar");
        return node.Scalar();
    }

    Rational rational(const YAML::Node& node, std::string_view field) const {
        const std::string text = scalar(node, field);
        try {
            return Rational::parse(text);
        } catch (const Error& e) {
            fail(node, field, e.what());
        }
    }

    double real(const YAML::Node& node, std::string_view field) const {
        const std::string text = scalar(node, field);
        double v = 0.0;
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc{} || ptr != end) fail(node, field, "'" + text + "' is not a number");
        return v;
    }

    std::uint64_t unsigned_int(const YAML::Node& node, std::string_view field) const {
        const std::string text = scalar(node, field);
        std::uint64_t v = 0;
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc{} || ptr != end) fail(node, field, "'" + text + "' is not a non-negative integer");
        return v;
    }

    bool boolean(const YAML::Node& node, std::string_view field) const {
        const std::string text = scalar(node, field);
        if (text == "true") return true;
        if (text == "false") return false;
        fail(node, field, "expected true or false, got '" + text + "'");
    }

    template <class F>
    void each(const YAML::Node& node, std::string_view field, F&& f) const {
        if (!node.IsSequence()) fail(node, field, "expected a list");
        for (const auto& item : node) f(item);
    }

private:
    std::string source_;
};

Mode parse_mode(const Reader& r, const YAML::Node& node) {
    const std::string s = r.scalar(node, "mode");
    for (Mode m : {Mode::Simulate, Mode::Converge, Mode::Moments, Mode::Check}) {
        if (s == to_string(m)) return m;
    }
    r.fail(node, "mode", "expected simulate, converge, moments or check, got '" + s + "'");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source_name) {
    ExperimentConfig cfg;
    cfg.source_name = std::string(source_name);
    cfg.source_text = std::string(text);
    const Reader r(source_name);

    YAML::Node root;
    try {
        root = YAML::Load(cfg.source_text);
    } catch (const YAML::Exception& e) {
        std::ostringstream os;
        os << source_name << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
        throw Error(ErrorKind::ConfigError, os.str());
    }
    if (!root.IsMap()) throw Error(ErrorKind::ConfigError, std::string(source_name) + ": expected a mapping at top level");

    static const std::set<std::string, std::less<>> known = {
        "mode",    "driver",   "problem",   "T",           "tau",          "h_list",
        "h_ref",   "h",        "alpha",     "p",           "n_paths",      "base_seed",
        "output_dir", "explosion_threshold", "untamed", "reference", "write_paths", "dump_drivers",
        "moment_orders", "audit"};
    std::optional<DriverKind> driver;
    YAML::Node driver_node;
    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        const YAML::Node& v = kv.second;
        if (!known.contains(key)) r.fail(kv.first, key, "unknown key");
        if (key == "mode") {
            cfg.mode = parse_mode(r, v);
        } else if (key == "driver") {
            const std::string s = r.scalar(v, key);
            if (s == "brownian") driver = DriverKind::Brownian;
            else if (s == "jump") driver = DriverKind::Jump;
            else r.fail(v, key, "expected brownian or jump, got '" + s + "'");
            driver_node = v;
        } else if (key == "problem") {
            if (v.IsScalar()) {
                cfg.problem_id = v.Scalar();
            } else if (v.IsMap()) {
                for (const auto& pkv : v) {
                    const std::string pkey = pkv.first.as<std::string>();
                    if (pkey == "id") cfg.problem_id = r.scalar(pkv.second, "problem.id");
                    else cfg.params[pkey] = r.real(pkv.second, "problem." + pkey);
                }
                if (cfg.problem_id.empty()) r.fail(v, key, "missing 'id'");
            } else {
                r.fail(v, key, "expected a catalog id or a mapping with 'id'");
            }
        } else if (key == "T") {
            cfg.T = r.rational(v, key);
        } else if (key == "tau") {
            cfg.tau = r.rational(v, key);
        } else if (key == "h_list") {
            r.each(v, key, [&](const YAML::Node& item) { cfg.h_list.push_back(r.rational(item, key)); });
        } else if (key == "h_ref") {
            cfg.h_ref = r.rational(v, key);
        } else if (key == "h") {
            cfg.h = r.rational(v, key);
        } else if (key == "alpha") {
            cfg.alpha = r.real(v, key);
        } else if (key == "p") {
            cfg.p = r.real(v, key);
        } else if (key == "n_paths") {
            cfg.n_paths = r.unsigned_int(v, key);
        } else if (key == "base_seed") {
            cfg.base_seed = r.unsigned_int(v, key);
        } else if (key == "output_dir") {
            cfg.output_dir = r.scalar(v, key);
        } else if (key == "explosion_threshold") {
            cfg.explosion_threshold = r.real(v, key);
            if (!(cfg.explosion_threshold > 0.0)) r.fail(v, key, "must be positive");
        } else if (key == "untamed") {
            cfg.untamed = r.boolean(v, key);
        } else if (key == "reference") {
            const std::string s = r.scalar(v, key);
            if (s == "exact") cfg.exact_reference = true;
            else if (s != "self") r.fail(v, key, "expected self or exact, got '" + s + "'");
        } else if (key == "write_paths") {
            std::vector<std::size_t> idx;
            r.each(v, key, [&](const YAML::Node& item) { idx.push_back(r.unsigned_int(item, key)); });
            cfg.write_paths = std::move(idx);
        } else if (key == "dump_drivers") {
            cfg.dump_drivers = r.boolean(v, key);
        } else if (key == "moment_orders") {
            r.each(v, key, [&](const YAML::Node& item) { cfg.moment_orders.push_back(r.real(item, key)); });
        } else if (key == "audit") {
            if (!v.IsMap()) r.fail(v, key, "expected a mapping");
            for (const auto& akv : v) {
                const std::string akey = akv.first.as<std::string>();
                const std::string field = "audit." + akey;
                if (akey == "samples") cfg.audit_samples = r.unsigned_int(akv.second, field);
                else if (akey == "radius") cfg.audit_radius = r.real(akv.second, field);
                else if (akey == "seed") cfg.audit_seed = r.unsigned_int(akv.second, field);
                else r.fail(akv.first, field, "unknown key");
            }
        }
    }

    if (cfg.problem_id.empty()) throw Error(ErrorKind::ConfigError, std::string(source_name) + ": missing 'problem'");
    const auto bm_ids = brownian_problem_ids();
    if (!is_jump_problem(cfg.problem_id) &&
        std::find(bm_ids.begin(), bm_ids.end(), cfg.problem_id) == bm_ids.end()) {
        throw Error(ErrorKind::UnknownProblem, std::string(source_name) + ": unknown problem '" + cfg.problem_id + "'");
    }
    const DriverKind implied = is_jump_problem(cfg.problem_id) ? DriverKind::Jump : DriverKind::Brownian;
    if (driver && *driver != implied) {
        r.fail(driver_node, "driver",
               "problem '" + cfg.problem_id + "' is a " + std::string(to_string(implied)) + " system");
    }
    cfg.driver = implied;
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.filename().string());
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
    using nlohmann::json;
    auto rationals = [](const std::vector<Rational>& v) {
        json a = json::array();
        for (const auto& r : v) a.push_back(r.to_string());
        return a;
    };
    json j;
    j["mode"] = cfg.mode ? json(to_string(*cfg.mode)) : json(nullptr);
    j["driver"] = to_string(cfg.driver);
    json problem;
    problem["id"] = cfg.problem_id;
    for (const auto& [k, v] : cfg.params) problem[k] = v;
    j["problem"] = problem;
    j["T"] = cfg.T.to_string();
    j["tau"] = cfg.tau.to_string();
    j["h_list"] = rationals(cfg.h_list);
    j["h_ref"] = cfg.h_ref ? json(cfg.h_ref->to_string()) : json(nullptr);
    j["h"] = cfg.h ? json(cfg.h->to_string()) : json(nullptr);
    j["alpha"] = cfg.alpha ? json(*cfg.alpha) : json(nullptr);
    j["p"] = cfg.p;
    j["n_paths"] = cfg.n_paths;
    j["base_seed"] = cfg.base_seed;
    j["output_dir"] = cfg.output_dir.generic_string();
    j["explosion_threshold"] = cfg.explosion_threshold;
    j["untamed"] = cfg.untamed;
    j["reference"] = cfg.exact_reference ? "exact" : "self";
    j["write_paths"] = cfg.write_paths ? json(*cfg.write_paths) : json(nullptr);
    j["dump_drivers"] = cfg.dump_drivers;
    j["moment_orders"] = cfg.moment_orders;
    j["audit"] = {{"samples", cfg.audit_samples},
                  {"radius", cfg.audit_radius},
                  {"seed", cfg.audit_seed ? json(*cfg.audit_seed) : json(nullptr)}};
    return j;
}

}  // namespace tamed
