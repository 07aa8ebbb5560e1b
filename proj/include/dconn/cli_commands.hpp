#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dconn {

struct CliOptions {
    std::string input;
    std::string output;
    std::vector<std::string> tol_overrides; // "key=value", applied over the file's table
    int pairs = 10;
    std::vector<double> steps = {1e-3, 1e-4};
    std::optional<std::uint64_t> seed; // falls back to DARBOUX_CONN_SEED, then default
    double fd_step = 1e-4;             // forwarded to reports for traceability
};

inline constexpr std::uint64_t kDefaultSeed = 20250808ULL;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed);

// exit codes: 0 pass, 1 verification fail, 2 input/degenerate error
int run_solve(const CliOptions& opt);
int run_verify(const CliOptions& opt);
int run_coords(const CliOptions& opt);
int run_invert(const CliOptions& opt);
int run_symp_check(const CliOptions& opt);

} // namespace dconn
