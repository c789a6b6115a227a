// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cointoss/cli/config.hpp"
#include "cointoss/cli/records.hpp"

namespace cointoss::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kInvariantViolation = 3 };

/// A computed quantity broke one of its documented invariants.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<Record> cmd_bounds(const RunConfig& cfg);
std::vector<Record> cmd_simulate(const RunConfig& cfg);
std::vector<Record> cmd_sweep_loss(const RunConfig& cfg);
std::vector<Record> cmd_classical(const RunConfig& cfg);
std::vector<Record> cmd_optimize_alpha(const RunConfig& cfg);

/// Full command line, without the program name:
///   <bounds|simulate|sweep-loss|classical|optimize-alpha>
///   [--config PATH] [--seed U64] [--out PATH] [--format table|records] [--workers N]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cointoss::cli
