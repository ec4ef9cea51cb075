#pragma once

#include "rha/schedule.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rha {

// schedule spec syntax: hilberg(beta=0.5,n_max=22) | explicit([2,3,9]) |
// constant(k=3,n_max=10) | squaring(k0=2,n_max=22)
Schedule parse_schedule(const std::string& spec);

struct RunConfig {
    std::string schedule_spec;
    uint64_t seed = 1;
    int prefix_log2 = -1;
    std::vector<uint64_t> m_grid;
    uint64_t repetitions = 0;
    std::string out_dir = ".";
    int jobs = 1;
    std::string format = "csv";
    std::map<std::string, std::string> extra;

    Schedule schedule() const; // parses schedule_spec
    std::string extra_or(const std::string& key, const std::string& dflt) const;
    uint64_t extra_u64(const std::string& key, uint64_t dflt) const;
};

// key=value lines, '#' comments; unknown keys land in extra.
RunConfig load_config(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

// accepts plain decimals and 2^k forms
uint64_t parse_u64_token(const std::string& tok);

} // namespace rha
