#include "mcvar/config.hpp"

#include <fstream>
#include <sstream>

#include "mcvar/presets.hpp"

namespace mcvar {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(trim(tok)));
        } catch (...) {
            throw ConfigError("bad number in " + key + ": '" + tok + "'");
        }
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    cfg.raw = kv;

    std::string kind = "square";
    if (auto it = kv.find("domain.kind"); it != kv.end()) kind = it->second;
    std::vector<double> extents;
    if (auto it = kv.find("domain.extents"); it != kv.end())
        extents = parse_numbers(it->second, "domain.extents");
    double cx = 0, cy = 0, R = 1;
    if (auto it = kv.find("domain.center"); it != kv.end()) {
        const auto c = parse_numbers(it->second, "domain.center");
        if (c.size() != 2) throw ConfigError("domain.center needs cx,cy");
        cx = c[0];
        cy = c[1];
    }
    if (auto it = kv.find("domain.radius"); it != kv.end()) R = std::stod(it->second);

    if (kind == "square") {
        cfg.domain = DomainSpec::unit_square();
    } else if (kind == "rectangle") {
        if (extents.size() != 4) throw ConfigError("rectangle needs domain.extents = ax,bx,ay,by");
        cfg.domain = DomainSpec::rectangle(extents[0], extents[1], extents[2], extents[3]);
    } else if (kind == "interval") {
        if (extents.size() != 2) throw ConfigError("interval needs domain.extents = a,b");
        cfg.domain = DomainSpec::interval(extents[0], extents[1]);
    } else if (kind == "disk") {
        cfg.domain = DomainSpec::disk(cx, cy, R);
    } else {
        throw ConfigError("unknown domain.kind '" + kind + "'");
    }

    for (const auto& [key, value] : kv) {
        if (key.rfind("domain.", 0) == 0) continue;
        if (key == "m")
            cfg.m = std::stoi(value);
        else if (key == "g_expr")
            cfg.g_text = value;
        else if (key == "h_expr")
            cfg.h_text = value;
        else if (key == "u_exact_expr")
            cfg.u_exact_text = value;
        else if (key == "preset")
            cfg.preset = value;
        else if (key == "resolutions") {
            cfg.resolutions.clear();
            for (double d : parse_numbers(value, key))
                cfg.resolutions.push_back(static_cast<int>(d));
        } else if (key == "mode") {
            if (value == "simplified")
                cfg.iterate.mode = IterateMode::Scalar;
            else if (value == "geometric")
                cfg.iterate.mode = IterateMode::Tensor;
            else
                throw ConfigError("mode must be simplified or geometric");
        } else if (key == "eps0")
            cfg.iterate.eps0 = std::stod(value);
        else if (key == "omega")
            cfg.iterate.omega = std::stod(value);
        else if (key == "fixed_point.tol")
            cfg.iterate.tol = std::stod(value);
        else if (key == "fixed_point.max_iters")
            cfg.iterate.max_iters = std::stoi(value);
        else if (key == "newton.tol")
            cfg.iterate.newton.tol = std::stod(value);
        else if (key == "newton.max_iters")
            cfg.iterate.newton.max_iters = std::stoi(value);
        else if (key == "allow_1d_nonzero_h")
            cfg.iterate.allow_1d_nonzero_h = parse_bool(value, key);
        else if (key == "record_energy")
            cfg.iterate.record_energy = parse_bool(value, key);
        else if (key == "seed")
            cfg.seed = std::stoull(value);
        else if (key == "out")
            cfg.out_dir = value;
        else if (key == "snapshots")
            cfg.snapshots = parse_bool(value, key);
        else if (key == "force")
            cfg.force = parse_bool(value, key);
        else if (key == "dump_system")
            cfg.dump_system = parse_bool(value, key);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const RunConfig& cfg) {
    if (cfg.m < 4) throw ConfigError("m must be at least 4");
    if (!(cfg.iterate.omega > 0 && cfg.iterate.omega <= 1))
        throw ConfigError("omega must lie in (0, 1]");
    if (!(cfg.iterate.tol > 0) || !(cfg.iterate.newton.tol > 0))
        throw ConfigError("tolerances must be positive");
    if (!(cfg.iterate.eps0 > 0 && cfg.iterate.eps0 < 1))
        throw ConfigError("eps0 must lie in (0, 1)");
    Expr::parse(cfg.g_text);
    Expr::parse(cfg.h_text);
    if (!cfg.u_exact_text.empty()) Expr::parse(cfg.u_exact_text);
    if (!cfg.preset.empty()) make_preset(cfg.preset);
}

} // namespace mcvar
