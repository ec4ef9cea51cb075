#pragma once

#include "rha/config.hpp"

#include <string>
#include <vector>

namespace rha {

inline constexpr const char* kToolVersion = "rha 0.1.0";

struct GenResult {
    std::string sequence_path;
    std::string manifest_path;
    double collision_budget = 0.0;
};

// Writes sequence.sym16 + MANIFEST.txt under cfg.out_dir; byte-identical
// across reruns with the same config.
GenResult run_generate(const RunConfig& cfg);

// Doubling-grid scaling study of one sampled realization: maximal
// repetition, subword counts vs caps, LZ78 statistics, two-part entropy
// bounds, and exponent fits. One CSV per quantity plus a manifest; returns
// the written file names (relative to cfg.out_dir).
std::vector<std::string> run_hilberg_experiment(const RunConfig& cfg);

// Per prefix length m: LZ78 code length against the conditional-entropy
// proxy 2 ln k_{log2 m}, their ratio, the predicted blow-up shape, and the
// fitted growth exponent of the ratio.
std::vector<std::string> run_lz_ratio_experiment(const RunConfig& cfg);

// CSV body shared by the bounds subcommand and the experiment bundle.
void write_bounds_csv(const Schedule& s, int n_lo, int n_hi,
                      const std::string& path);

} // namespace rha
