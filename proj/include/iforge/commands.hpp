#pragma once

#include <iforge/serialize.hpp>
#include <iforge/types.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iforge::commands {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPhysicsFailure = 3;
inline constexpr int kExitSizeLimit = 4;

struct CommonOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> species;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const CommonOptions& options);

struct FamilyOptions : CommonOptions {
    // Sweep defaults: 33 gamma points on [0, pi/4].
    std::optional<int> steps;
};
int cmd_family(const FamilyOptions& options);

struct GhzSwapOptions : CommonOptions {
    std::optional<double> min_fidelity;  // exit 3 when the conditional state falls below
};
int cmd_ghz_swap(const GhzSwapOptions& options);

struct Table2Options : CommonOptions {
    std::optional<int> d;
    std::optional<std::string> n_range;  // "4" or "2..7"
    std::optional<std::string> json_path;
    int trials = 5;
    bool timings = false;  // keep the seconds column zero for byte-stable diffs
};
int cmd_table2(const Table2Options& options);

struct VerifyOptions : CommonOptions {
    std::string sizes = "default";  // small | default | large
};
int cmd_verify(const VerifyOptions& options);

struct ReferenceCell {
    const char* species;
    int d;
    int N;
    int rank;
    bool red;  // N = 2 boson cells capped by the two-path combinatorial bound
};

/// Vendored expected manifold dimensions (see data/table2_reference.csv).
const std::vector<ReferenceCell>& table2_reference();

}  // namespace iforge::commands
