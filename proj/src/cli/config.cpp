// SPDX-License-Identifier: Apache-2.0
#include "cointoss/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace cointoss::cli {

namespace {

struct KeySpec {
    std::string_view section;
    std::string_view key;
    bool repeatable = false;
};

// The complete schema: anything else is rejected.
constexpr KeySpec kSchema[] = {
    {"", "seed"},
    {"", "format"},
    {"", "workers"},
    {"experiment", "alpha_sq"},
    {"experiment", "att_transmission_db"},
    {"experiment", "att_bob_db"},
    {"experiment", "detector_efficiency"},
    {"experiment", "qber_per_photon"},
    {"experiment", "visibility"},
    {"experiment", "dark_count_prob"},
    {"experiment", "p_abort_override"},
    {"simulate", "alice"},
    {"simulate", "bob"},
    {"simulate", "target"},
    {"simulate", "sessions"},
    {"sweep", "grid"},
    {"sweep", "abort_scaling"},
    {"optimize", "lo"},
    {"optimize", "hi"},
    {"classical", "mode"},
    {"classical", "q01"},
    {"classical", "q0perp"},
    {"classical", "q1perp"},
    {"classical", "q0_given_01"},
    {"classical", "q0_given_0perp"},
    {"classical", "q1_given_1perp"},
    {"classical", "t"},
    {"classical", "s"},
    {"classical", "saturate"},
    {"classical", "trees"},
    {"classical", "max_depth"},
    {"classical", "max_branching"},
    {"tree", "node", true},
    {"tree", "leaf", true},
};

const KeySpec* lookup(std::string_view section, std::string_view key) {
    for (const auto& spec : kSchema) {
        if (spec.section == section && spec.key == key) return &spec;
    }
    return nullptr;
}

bool section_known(std::string_view section) {
    return std::any_of(std::begin(kSchema), std::end(kSchema),
                       [&](const KeySpec& s) { return s.section == section; });
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
        if (i > start) parts.push_back(text.substr(start, i - start));
    }
    return parts;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::string source_name) {
    ConfigFile file;
    file.source_ = std::move(source_name);
    std::string section;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto fail = [&](std::string_view message) {
            return ConfigError(fmt::format("{}:{}: {}", file.source_, line_no, message));
        };
        if (line.front() == '[') {
            if (line.back() != ']') throw fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!section_known(section)) throw fail(fmt::format("unknown section [{}]", section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw fail("missing key before '='");
        const KeySpec* spec = lookup(section, key);
        if (spec == nullptr) {
            throw fail(section.empty() ? fmt::format("unknown key '{}'", key)
                                       : fmt::format("unknown key '{}' in [{}]", key, section));
        }
        if (!spec->repeatable && !seen.emplace(section, key).second) {
            throw fail(fmt::format("duplicate key '{}'", key));
        }
        file.entries_.push_back({section, key, value, line_no});
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

const ConfigEntry* ConfigFile::find(std::string_view section, std::string_view key) const {
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) return &e;
    }
    return nullptr;
}

std::vector<const ConfigEntry*> ConfigFile::find_all(std::string_view section,
                                                     std::string_view key) const {
    std::vector<const ConfigEntry*> found;
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) found.push_back(&e);
    }
    return found;
}

ConfigError ConfigFile::error_at(const ConfigEntry& entry, std::string_view message) const {
    const std::string field =
        entry.section.empty() ? entry.key : fmt::format("[{}] {}", entry.section, entry.key);
    return ConfigError(fmt::format("{}:{}: {}: {}", source_, entry.line, field, message));
}

std::optional<double> ConfigFile::get_double(std::string_view section, std::string_view key) const {
    const auto* e = find(section, key);
    if (e == nullptr) return std::nullopt;
    const auto v = parse_double(e->value);
    if (!v) throw error_at(*e, fmt::format("expected a number, got '{}'", e->value));
    return v;
}

std::optional<std::uint64_t> ConfigFile::get_u64(std::string_view section, std::string_view key) const {
    const auto* e = find(section, key);
    if (e == nullptr) return std::nullopt;
    const auto v = parse_u64(e->value);
    if (!v) throw error_at(*e, fmt::format("expected a non-negative integer, got '{}'", e->value));
    return v;
}

std::optional<std::string> ConfigFile::get_string(std::string_view section, std::string_view key) const {
    const auto* e = find(section, key);
    if (e == nullptr) return std::nullopt;
    if (e->value.empty()) throw error_at(*e, "empty value");
    return e->value;
}

std::optional<std::vector<double>> ConfigFile::get_grid(std::string_view section,
                                                        std::string_view key) const {
    const auto* e = find(section, key);
    if (e == nullptr) return std::nullopt;
    if (trim(e->value).empty()) throw error_at(*e, "empty grid");
    std::vector<double> grid;
    if (e->value.find(':') != std::string::npos) {
        const auto parts = split(e->value, ':');
        if (parts.size() != 3) throw error_at(*e, "range must be start:stop:step");
        const auto start = parse_double(parts[0]);
        const auto stop = parse_double(parts[1]);
        const auto step = parse_double(parts[2]);
        if (!start || !stop || !step) throw error_at(*e, "range bounds must be numbers");
        if (*step <= 0.0 || *stop < *start) throw error_at(*e, "range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
        if (count > 1'000'000) throw error_at(*e, "range has too many points");
        for (std::size_t i = 0; i < count; ++i) grid.push_back(*start + static_cast<double>(i) * *step);
    } else {
        for (const auto part : split(e->value, ',')) {
            const auto v = parse_double(part);
            if (!v) throw error_at(*e, fmt::format("grid value '{}' is not a number", part));
            grid.push_back(*v);
        }
    }
    for (const double v : grid) {
        if (v < 0.0) throw error_at(*e, "attenuations must be >= 0 dB");
    }
    return grid;
}

namespace {

Party parse_party(const ConfigFile& file, const ConfigEntry& e, std::string_view text) {
    if (text == "alice") return Party::Alice;
    if (text == "bob") return Party::Bob;
    throw file.error_at(e, fmt::format("expected 'alice' or 'bob', got '{}'", text));
}

/// node = <id> <alice|bob> <child>:<prob> ...   leaf = <id> <alice output> <bob output>
ProtocolTree build_tree(const ConfigFile& file) {
    std::map<std::size_t, std::pair<ProtocolTree::Node, const ConfigEntry*>> nodes;
    auto parse_id = [&](const ConfigEntry& e, std::string_view text) {
        const auto id = parse_u64(text);
        if (!id || *id > 100'000) throw file.error_at(e, fmt::format("invalid node id '{}'", text));
        return static_cast<std::size_t>(*id);
    };
    auto insert = [&](const ConfigEntry& e, std::size_t id, ProtocolTree::Node node) {
        if (!nodes.emplace(id, std::pair{std::move(node), &e}).second) {
            throw file.error_at(e, fmt::format("node {} defined twice", id));
        }
    };
    for (const auto* e : file.find_all("tree", "leaf")) {
        const auto parts = split_ws(e->value);
        if (parts.size() != 3) throw file.error_at(*e, "expected '<id> <alice output> <bob output>'");
        const auto x = parse_outcome(parts[1]);
        const auto y = parse_outcome(parts[2]);
        if (!x || !y) throw file.error_at(*e, "outputs must be 0, 1 or abort");
        insert(*e, parse_id(*e, parts[0]), ProtocolTree::Leaf{*x, *y});
    }
    for (const auto* e : file.find_all("tree", "node")) {
        const auto parts = split_ws(e->value);
        if (parts.size() < 3) throw file.error_at(*e, "expected '<id> <alice|bob> <child>:<prob> ...'");
        ProtocolTree::Move move{parse_party(file, *e, parts[1]), {}, {}};
        for (std::size_t k = 2; k < parts.size(); ++k) {
            const auto colon = parts[k].find(':');
            if (colon == std::string_view::npos) throw file.error_at(*e, "children are written child:prob");
            move.children.push_back(parse_id(*e, parts[k].substr(0, colon)));
            const auto p = parse_double(parts[k].substr(colon + 1));
            if (!p) throw file.error_at(*e, fmt::format("invalid probability in '{}'", parts[k]));
            move.probabilities.push_back(*p);
        }
        insert(*e, parse_id(*e, parts[0]), std::move(move));
    }
    if (nodes.empty()) throw ConfigError(fmt::format("{}: [tree] section defines no nodes", file.source_name()));

    std::vector<ProtocolTree::Node> ordered;
    for (const auto& [id, entry] : nodes) {
        if (id != ordered.size()) {
            throw file.error_at(*entry.second, fmt::format("node ids must be 0..{} without gaps", nodes.size() - 1));
        }
        ordered.push_back(entry.first);
    }
    ProtocolTree tree(std::move(ordered));
    try {
        tree.validate();
    } catch (const MalformedProtocol& ex) {
        throw ConfigError(fmt::format("{}: [tree]: {}", file.source_name(), ex.what()));
    }
    return tree;
}

}  // namespace

RunConfig build_run_config(const ConfigFile& file) {
    RunConfig cfg;

    if (auto v = file.get_u64("", "seed")) cfg.seed = *v;
    if (auto v = file.get_u64("", "workers")) cfg.workers = static_cast<std::size_t>(*v);
    if (auto v = file.get_string("", "format")) {
        if (*v == "table") {
            cfg.format = OutputFormat::Table;
        } else if (*v == "records") {
            cfg.format = OutputFormat::Records;
        } else {
            throw file.error_at(*file.find("", "format"), "expected 'table' or 'records'");
        }
    }

    // Experiment: each field checked against its own domain so the
    // diagnostic names the line.
    auto& p = cfg.params;
    auto read_param = [&](std::string_view key, double& field, double hi, bool hi_open,
                          std::string_view domain) {
        const auto v = file.get_double("experiment", key);
        if (!v) return;
        if (*v < 0.0 || *v > hi || (hi_open && *v == hi)) {
            throw file.error_at(*file.find("experiment", key),
                                fmt::format("value {} outside {}", *v, domain));
        }
        field = *v;
    };
    constexpr double kInf = std::numeric_limits<double>::infinity();
    read_param("alpha_sq", p.alpha_sq, kInf, true, "[0, inf)");
    read_param("att_transmission_db", p.att_transmission_db, kInf, true, "[0, inf)");
    read_param("att_bob_db", p.att_bob_db, kInf, true, "[0, inf)");
    read_param("detector_efficiency", p.detector_efficiency, 1.0, false, "[0, 1]");
    read_param("qber_per_photon", p.qber_per_photon, 1.0, false, "[0, 1]");
    read_param("dark_count_prob", p.dark_count_prob, 1.0, true, "[0, 1)");
    if (const auto v = file.get_double("experiment", "visibility")) {
        const auto* e = file.find("experiment", "visibility");
        if (file.find("experiment", "qber_per_photon") != nullptr) {
            throw file.error_at(*e, "give either visibility or qber_per_photon, not both");
        }
        if (*v < -1.0 || *v > 1.0) throw file.error_at(*e, "visibility must lie in [-1, 1]");
        p.qber_per_photon = (1.0 - *v) / 2.0;
    }
    if (const auto v = file.get_double("experiment", "p_abort_override")) {
        if (*v < 0.0 || *v > 1.0) {
            throw file.error_at(*file.find("experiment", "p_abort_override"), "must lie in [0, 1]");
        }
        cfg.p_abort_override = v;
    }
    p.validate();

    if (auto v = file.get_string("simulate", "alice")) cfg.alice = *v;
    if (auto v = file.get_string("simulate", "bob")) cfg.bob = *v;
    if (auto v = file.get_string("simulate", "target")) {
        const auto o = parse_outcome(*v);
        if (!o || *o == Outcome::Abort) throw file.error_at(*file.find("simulate", "target"), "target must be 0 or 1");
        cfg.cheat_target = *o;
    }
    if (auto v = file.get_u64("simulate", "sessions")) {
        if (*v == 0) throw file.error_at(*file.find("simulate", "sessions"), "need at least one session");
        cfg.sessions = *v;
    }

    if (auto v = file.get_grid("sweep", "grid")) cfg.sweep_grid = std::move(*v);
    if (auto v = file.get_string("sweep", "abort_scaling")) {
        if (*v == "model-scaled") {
            cfg.abort_scaling = AbortScaling::ModelScaled;
        } else if (*v == "fixed-measured") {
            cfg.abort_scaling = AbortScaling::FixedMeasured;
        } else {
            throw file.error_at(*file.find("sweep", "abort_scaling"),
                                "expected 'model-scaled' or 'fixed-measured'");
        }
    }

    if (auto v = file.get_double("optimize", "lo")) cfg.optimize_lo = *v;
    if (auto v = file.get_double("optimize", "hi")) cfg.optimize_hi = *v;
    if (!(cfg.optimize_lo > 0.0 && cfg.optimize_lo < cfg.optimize_hi && cfg.optimize_hi <= 5.0)) {
        const auto* e = file.find("optimize", "lo");
        if (e == nullptr) e = file.find("optimize", "hi");
        throw file.error_at(*e, "search interval must satisfy 0 < lo < hi <= 5");
    }

    if (auto v = file.get_string("classical", "mode")) {
        static constexpr std::string_view kModes[] = {"spec", "correct", "saturating", "tree", "audit"};
        if (std::find(std::begin(kModes), std::end(kModes), *v) == std::end(kModes)) {
            throw file.error_at(*file.find("classical", "mode"),
                                "expected spec, correct, saturating, tree or audit");
        }
        cfg.classical_mode = *v;
    }
    auto& spec = cfg.classical_spec;
    if (cfg.classical_mode == "spec") {
        auto read = [&](std::string_view key, double& field) {
            if (auto v = file.get_double("classical", key)) field = *v;
        };
        read("q01", spec.q01);
        read("q0perp", spec.q0perp);
        read("q1perp", spec.q1perp);
        read("q0_given_01", spec.q0_given_01);
        read("q0_given_0perp", spec.q0_given_0perp);
        read("q1_given_1perp", spec.q1_given_1perp);
    } else if (cfg.classical_mode == "correct") {
        const double t = file.get_double("classical", "t").value_or(0.0);
        const double s = file.get_double("classical", "s").value_or(0.5);
        try {
            spec = make_correct_spec(t, s);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(fmt::format("{}: [classical] t, s: {}", file.source_name(), ex.what()));
        }
    } else if (cfg.classical_mode == "saturating") {
        auto which = SaturatedInequality::A;
        if (auto v = file.get_string("classical", "saturate")) {
            if (*v == "a") {
                which = SaturatedInequality::A;
            } else if (*v == "b") {
                which = SaturatedInequality::B;
            } else {
                throw file.error_at(*file.find("classical", "saturate"), "expected 'a' or 'b'");
            }
        }
        const double q01 = file.get_double("classical", "q01").value_or(0.6);
        const double s = file.get_double("classical", "s").value_or(0.75);
        try {
            spec = make_saturating_spec(which, q01, s);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(fmt::format("{}: [classical] q01, s: {}", file.source_name(), ex.what()));
        }
    } else if (cfg.classical_mode == "tree") {
        cfg.classical_tree = build_tree(file);
    } else if (cfg.classical_mode == "audit") {
        if (auto v = file.get_u64("classical", "trees")) cfg.audit_trees = *v;
        if (auto v = file.get_u64("classical", "max_depth")) {
            if (*v < 1 || *v > 12) throw file.error_at(*file.find("classical", "max_depth"), "must lie in [1, 12]");
            cfg.audit_options.max_depth = static_cast<std::size_t>(*v);
        }
        if (auto v = file.get_u64("classical", "max_branching")) {
            if (*v < 1 || *v > 8) throw file.error_at(*file.find("classical", "max_branching"), "must lie in [1, 8]");
            cfg.audit_options.max_branching = static_cast<std::size_t>(*v);
        }
    }
    if (cfg.classical_mode != "tree" && cfg.classical_mode != "audit") {
        try {
            spec.validate();
        } catch (const MalformedProtocol& ex) {
            throw ConfigError(fmt::format("{}: [classical]: {}", file.source_name(), ex.what()));
        }
    }
    return cfg;
}

}  // namespace cointoss::cli
