// SPDX-License-Identifier: Apache-2.0
#include "cointoss/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cointoss/bounds.hpp"
#include "cointoss/classical.hpp"
#include "cointoss/montecarlo.hpp"
#include "cointoss/optics.hpp"
#include "cointoss/protocol.hpp"

namespace cointoss::cli {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

void check_report(const MeritReport& r) {
    for (const double p : {r.p_star_0, r.p_star_1, r.p_0_star, r.p_1_star, r.p_abort_honest}) {
        check(in_unit(p), "merit report probability outside [0, 1]");
    }
    check(r.merit >= -1.0 && r.merit <= 1.0, "merit outside [-1, 1]");
    check(r.merit <= reference_values().quantum_merit_ceiling + 1e-12,
          "merit above the quantum ceiling");
}

Record experiment_record(const ExperimentParams& p) {
    Record r("experiment");
    r.add("alpha_sq", p.alpha_sq)
        .add("att_transmission_db", p.att_transmission_db)
        .add("att_bob_db", p.att_bob_db)
        .add("detector_efficiency", p.detector_efficiency)
        .add("qber_per_photon", p.qber_per_photon)
        .add("visibility", p.visibility())
        .add("dark_count_prob", p.dark_count_prob);
    return r;
}

Record merit_record(const MeritReport& m, std::string kind = "merit") {
    Record r(std::move(kind));
    r.add("p_star_0", m.p_star_0)
        .add("p_star_1", m.p_star_1)
        .add("p_0_star", m.p_0_star)
        .add("p_1_star", m.p_1_star)
        .add("p_abort_honest", m.p_abort_honest)
        .add("merit", m.merit);
    return r;
}

std::string outcome_name(Outcome o) { return std::string(to_string(o)); }

std::string target_name(const Target& t) {
    switch (t.kind) {
        case Target::Kind::BobOutputs: return "bob-outputs-" + outcome_name(t.value);
        case Target::Kind::AliceOutputs: return "alice-outputs-" + outcome_name(t.value);
        case Target::Kind::BothAbort: return "both-abort";
    }
    return "?";
}

}  // namespace

std::vector<Record> cmd_bounds(const RunConfig& cfg) {
    const auto& p = cfg.params;
    std::vector<Record> out;
    if (p.alpha_sq == 0.0) {
        out.push_back(std::move(Record("warning").add(
            "message", "degenerate: alpha_sq = 0 makes both states vacuum; Alice cheats perfectly")));
    }
    out.push_back(experiment_record(p));

    const auto mu = derive_intensities(p);
    out.push_back(std::move(Record("intensities")
                                .add("mu_at_detector", mu.mu_at_detector)
                                .add("mu_leak", mu.mu_leak)
                                .add("effective_intensity", mu.effective_intensity)));

    const double ov_sq = overlap_sq(p.alpha_sq);
    out.push_back(std::move(Record("discrimination")
                                .add("overlap_sq", ov_sq)
                                .add("overlap", std::sqrt(ov_sq))
                                .add("helstrom_success", helstrom_success(ov_sq))
                                .add("fixed_state_cheat_success", fixed_state_cheat_success(std::sqrt(ov_sq)))
                                .add("homodyne_success", homodyne_success(p.alpha_sq))));

    const double model_abort = model_abort_probability(p);
    const auto report = merit_from_params(p, cfg.p_abort_override);
    check_report(report);
    out.push_back(std::move(Record("bounds")
                                .add("alice_cheat_bound", alice_cheat_bound(p))
                                .add("bob_cheat_bound", bob_cheat_bound(p.alpha_sq))
                                .add("p_abort_model", model_abort)
                                .add("p_abort_used", report.p_abort_honest)
                                .add("abort_source", cfg.p_abort_override ? "override" : "model")));
    out.push_back(merit_record(report));

    const auto bias = bias_from_report(report);
    out.push_back(std::move(Record("bias").add("eps_alice", bias.eps_alice).add("eps_bob", bias.eps_bob)));

    const auto ref = reference_values();
    out.push_back(std::move(Record("reference")
                                .add("quantum_merit_ceiling", ref.quantum_merit_ceiling)
                                .add("ambainis_merit", ref.ambainis_merit)
                                .add("pure_pair_ceiling", ref.pure_pair_ceiling)
                                .add("kitaev_bias", ref.kitaev_bias)));
    return out;
}

std::vector<Record> cmd_simulate(const RunConfig& cfg) {
    const auto alice = make_alice_strategy(cfg.alice, cfg.cheat_target);
    const auto bob = make_bob_strategy(cfg.bob, cfg.cheat_target);
    const Target target = default_target(cfg.alice, cfg.bob, cfg.cheat_target);
    const auto batch = run_batch(*alice, *bob, cfg.params, cfg.sessions, cfg.seed, target,
                                 BatchOptions{.workers = cfg.workers});

    std::uint64_t total = 0;
    for (const auto& row : batch.counts) {
        for (const auto c : row) total += c;
    }
    check(total == batch.n_sessions, "batch counts do not sum to the session count");
    check(batch.ci95.contains(batch.estimate), "estimate outside its confidence interval");

    std::vector<Record> out;
    out.push_back(experiment_record(cfg.params));
    Record b("batch");
    b.add("alice", cfg.alice).add("bob", cfg.bob).add("target", target_name(target));
    b.add("seed", cfg.seed).add("n_sessions", batch.n_sessions);
    for (const Outcome x : kAllOutcomes) {
        for (const Outcome y : kAllOutcomes) {
            b.add(fmt::format("count_{}_{}", to_string(x), to_string(y)), batch.count(x, y));
        }
    }
    b.add("bob_zero", batch.bob_count(Outcome::Zero))
        .add("bob_one", batch.bob_count(Outcome::One))
        .add("bob_abort", batch.bob_count(Outcome::Abort))
        .add("hits", batch.hits)
        .add("estimate", batch.estimate)
        .add("std_error", batch.std_error)
        .add("ci95_lo", batch.ci95.lo)
        .add("ci95_hi", batch.ci95.hi);
    out.push_back(std::move(b));

    Record cmp("comparison");
    if (const auto model = model_prediction(cfg.alice, cfg.bob, cfg.params)) {
        const double sigma = std::sqrt(*model * (1.0 - *model) / static_cast<double>(batch.n_sessions));
        cmp.add("model_prediction", *model).add("model_sigma", sigma);
        if (sigma > 0.0) cmp.add("z_score", (batch.estimate - *model) / sigma);
    }
    if (const auto bound = analytic_cheat_bound(cfg.alice, cfg.bob, cfg.params)) {
        cmp.add("analytic_bound", *bound)
            .add("within_bound_4sigma", batch.estimate <= *bound + 4.0 * batch.std_error);
    }
    if (!cmp.fields.empty()) out.push_back(std::move(cmp));
    return out;
}

std::vector<Record> cmd_sweep_loss(const RunConfig& cfg) {
    std::vector<double> grid = cfg.sweep_grid;
    if (grid.empty()) {
        for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
    }
    const auto sweep = loss_sweep(cfg.params, grid, cfg.abort_scaling, cfg.p_abort_override);
    const std::string scaling =
        cfg.abort_scaling == AbortScaling::ModelScaled ? "model-scaled" : "fixed-measured";

    std::vector<Record> out;
    out.push_back(experiment_record(cfg.params));
    for (const auto& point : sweep.points) {
        check_report(point.report);
        out.push_back(std::move(Record("sweep")
                                    .add("a_t_db", point.att_transmission_db)
                                    .add("p_star_c", point.report.p_star_0)
                                    .add("p_c_star", point.report.p_0_star)
                                    .add("p_abort", point.report.p_abort_honest)
                                    .add("merit", point.report.merit)));
    }
    Record t("threshold");
    t.add("abort_scaling", scaling).add("found", sweep.threshold_db.has_value());
    if (sweep.threshold_db) t.add("threshold_db", *sweep.threshold_db);
    out.push_back(std::move(t));
    return out;
}

std::vector<Record> cmd_optimize_alpha(const RunConfig& cfg) {
    const auto best = optimize_alpha(cfg.params, cfg.optimize_lo, cfg.optimize_hi, cfg.p_abort_override);
    ExperimentParams at = cfg.params;
    at.alpha_sq = best.alpha_sq;
    const auto report = merit_from_params(at, cfg.p_abort_override);
    check_report(report);

    std::vector<Record> out;
    out.push_back(experiment_record(cfg.params));
    out.push_back(std::move(Record("optimum")
                                .add("lo", cfg.optimize_lo)
                                .add("hi", cfg.optimize_hi)
                                .add("alpha_sq", best.alpha_sq)
                                .add("merit", best.merit)));
    out.push_back(merit_record(report, "merit_at_optimum"));
    return out;
}

std::vector<Record> cmd_classical(const RunConfig& cfg) {
    std::vector<Record> out;
    if (cfg.classical_mode == "audit") {
        const auto summary = audit_random_trees(cfg.audit_trees, cfg.seed, cfg.audit_options);
        const std::uint64_t violations =
            summary.lemma1_violations + summary.tj_violations + summary.merit_violations;
        out.push_back(std::move(Record("audit")
                                    .add("trees", static_cast<std::uint64_t>(summary.trees))
                                    .add("seed", cfg.seed)
                                    .add("max_depth", static_cast<std::uint64_t>(cfg.audit_options.max_depth))
                                    .add("max_branching", static_cast<std::uint64_t>(cfg.audit_options.max_branching))
                                    .add("lemma1_violations", static_cast<std::uint64_t>(summary.lemma1_violations))
                                    .add("tj_violations", static_cast<std::uint64_t>(summary.tj_violations))
                                    .add("merit_violations", static_cast<std::uint64_t>(summary.merit_violations))
                                    .add("violations", violations)
                                    .add("min_margin", summary.min_margin)
                                    .add("max_merit", summary.max_merit)));
        check(violations == 0, fmt::format("{} random correct protocols broke a classical bound", violations));
        return out;
    }

    const ProtocolTree tree =
        cfg.classical_mode == "tree" ? *cfg.classical_tree : encode_lemma2(cfg.classical_spec);
    const ClassicalReport report =
        cfg.classical_mode == "tree" ? eval_tree(tree) : eval_lemma2(cfg.classical_spec);

    Record proto("protocol");
    proto.add("mode", cfg.classical_mode).add("correct", report.is_correct());
    if (cfg.classical_mode != "tree") {
        const auto& s = cfg.classical_spec;
        proto.add("q01", s.q01)
            .add("q0perp", s.q0perp)
            .add("q1perp", s.q1perp)
            .add("q0_given_01", s.q0_given_01)
            .add("q0_given_0perp", s.q0_given_0perp)
            .add("q1_given_1perp", s.q1_given_1perp);
    } else {
        proto.add("nodes", static_cast<std::uint64_t>(tree.size()))
            .add("depth", static_cast<std::uint64_t>(tree.depth()));
    }
    out.push_back(std::move(proto));

    out.push_back(std::move(Record("classical_report")
                                .add("p00", report.p00)
                                .add("p11", report.p11)
                                .add("p_perp_perp", report.p_perp_perp)
                                .add("p_star_0", report.p_star_0)
                                .add("p_star_1", report.p_star_1)
                                .add("p_0_star", report.p_0_star)
                                .add("p_1_star", report.p_1_star)));
    out.push_back(std::move(Record("lemma1")
                                .add("lhs_a", report.lemma1_lhs_a)
                                .add("lhs_b", report.lemma1_lhs_b)
                                .add("p_perp_perp", report.p_perp_perp)
                                .add("half_p_perp_perp", report.p_perp_perp / 2.0)
                                .add("margin_a", report.margin_a())
                                .add("margin_b", report.margin_b())));

    const auto tj_a = verify_tj_monotone(tree, Outcome::Zero, Outcome::One);
    const auto tj_b = verify_tj_monotone(tree, Outcome::One, Outcome::Zero);
    for (std::size_t j = 0; j < tj_a.values.size(); ++j) {
        out.push_back(std::move(Record("tj")
                                    .add("level", static_cast<std::uint64_t>(j))
                                    .add("t_0_1", tj_a.values[j])
                                    .add("t_1_0", tj_b.values[j])));
    }
    const double m = classical_merit(report);
    out.push_back(std::move(Record("classical_merit")
                                .add("merit", m)
                                .add("tj_nondecreasing", tj_a.nondecreasing && tj_b.nondecreasing)));

    check(tj_a.nondecreasing && tj_b.nondecreasing, "T_j sequence decreased");
    if (report.is_correct()) {
        check(report.satisfies_lemma1(), "correct classical protocol violates the abort inequalities");
        check(m <= 1e-12, "correct classical protocol has positive merit");
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-coin quantum coin tossing: bounds, simulation and classical audits", "cointoss"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format;
    std::optional<std::size_t> workers;
    app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master seed (overrides the configuration)");
    app.add_option("--out", out_path, "Write output to this file instead of stdout");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "records"}));
    app.add_option("--workers", workers, "Worker threads for Monte Carlo (0 = all cores)");

    using Command = std::function<std::vector<Record>(const RunConfig&)>;
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"bounds", {"Analytic cheat bounds, abort model and merit", cmd_bounds}},
        {"simulate", {"Monte Carlo batch for a strategy pair", cmd_simulate}},
        {"sweep-loss", {"Merit versus channel loss", cmd_sweep_loss}},
        {"classical", {"Classical protocol evaluation and audits", cmd_classical}},
        {"optimize-alpha", {"Merit-maximising mean photon number", cmd_optimize_alpha}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = build_run_config(ConfigFile::load(config_path));
        if (seed) cfg.seed = *seed;
        if (workers) cfg.workers = *workers;
        if (!format.empty()) cfg.format = format == "records" ? OutputFormat::Records : OutputFormat::Table;

        const std::string name = app.get_subcommands().front()->get_name();
        const auto records = commands.at(name).second(cfg);
        const std::string text =
            cfg.format == OutputFormat::Records ? render_records(records) : render_table(records);
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot write " << out_path << "\n";
                return kConfigError;
            }
            file << text;
        }
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kInvariantViolation;
    } catch (const ProtocolViolation& e) {
        err << "protocol violation: " << e.what() << "\n";
        return kInvariantViolation;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace cointoss::cli
