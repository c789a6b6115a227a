// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value configuration with [section] headers and '#' comments.
// Keys before the first header belong to the unnamed top-level section.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cointoss/bounds.hpp"
#include "cointoss/classical.hpp"
#include "cointoss/optics.hpp"

namespace cointoss::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Parsed but not yet interpreted configuration text.
class ConfigFile {
public:
    /// Throws ConfigError on syntax errors, unknown sections or keys, and
    /// duplicated keys (except repeatable ones such as tree nodes).
    static ConfigFile parse(std::string_view text, std::string source_name = "<config>");
    static ConfigFile load(const std::string& path);

    [[nodiscard]] const ConfigEntry* find(std::string_view section, std::string_view key) const;
    [[nodiscard]] std::vector<const ConfigEntry*> find_all(std::string_view section,
                                                           std::string_view key) const;

    [[nodiscard]] std::optional<double> get_double(std::string_view section, std::string_view key) const;
    [[nodiscard]] std::optional<std::uint64_t> get_u64(std::string_view section, std::string_view key) const;
    [[nodiscard]] std::optional<std::string> get_string(std::string_view section,
                                                        std::string_view key) const;
    /// Comma-separated numbers, or a range "start:stop:step" (stop inclusive).
    [[nodiscard]] std::optional<std::vector<double>> get_grid(std::string_view section,
                                                              std::string_view key) const;

    /// "<source>:<line>: [section] key: message"
    [[nodiscard]] ConfigError error_at(const ConfigEntry& entry, std::string_view message) const;

    [[nodiscard]] const std::string& source_name() const noexcept { return source_; }

private:
    std::string source_;
    std::vector<ConfigEntry> entries_;
};

enum class OutputFormat { Table, Records };

/// Everything a command may read from a configuration.
struct RunConfig {
    ExperimentParams params = ExperimentParams::reference_experiment();
    std::optional<double> p_abort_override;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::Table;
    std::size_t workers = 1;

    // simulate
    std::string alice = "honest";
    std::string bob = "honest";
    Outcome cheat_target = Outcome::One;
    std::uint64_t sessions = 10000;

    // sweep-loss
    std::vector<double> sweep_grid;
    AbortScaling abort_scaling = AbortScaling::ModelScaled;

    // optimize-alpha
    double optimize_lo = 0.01;
    double optimize_hi = 2.0;

    // classical
    std::string classical_mode = "spec";
    ClassicalProtocolSpec classical_spec;
    std::optional<ProtocolTree> classical_tree;
    std::uint64_t audit_trees = 1000;
    RandomTreeOptions audit_options;
};

/// Interprets a parsed file. Throws ConfigError with line and field on any
/// invalid value, including experiment parameters outside their domain.
RunConfig build_run_config(const ConfigFile& file);

}  // namespace cointoss::cli
