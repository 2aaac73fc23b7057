#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcvar/iterate.hpp"

namespace mcvar {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A run configuration: flat key = value text with dotted keys. Unknown keys
// are rejected so typos fail loudly.
struct RunConfig {
    DomainSpec domain = DomainSpec::unit_square();
    int m = 65;
    std::string g_text = "0";
    std::string h_text = "0";
    std::string u_exact_text;
    std::string preset; // plane | cap[-R] | sine, for the convergence command
    std::vector<int> resolutions = {33, 65, 129};
    IterateOptions iterate;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool snapshots = false;
    bool force = false;
    bool dump_system = false;

    std::map<std::string, std::string> raw; // echoed into reports
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Validates expression syntax, m >= 4, mode/omega ranges; throws ConfigError.
void validate(const RunConfig& cfg);

} // namespace mcvar
