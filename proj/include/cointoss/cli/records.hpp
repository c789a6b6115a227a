// SPDX-License-Identifier: Apache-2.0
//
// Command output. Commands build a list of records; the table view and the
// machine-readable view are both rendered from that list, so every number a
// human sees is also in the record stream.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cointoss::cli {

using FieldValue = std::variant<double, std::uint64_t, std::string, bool>;

struct Field {
    std::string name;
    FieldValue value;
};

struct Record {
    std::string kind;
    std::vector<Field> fields;

    explicit Record(std::string kind_) : kind(std::move(kind_)) {}

    Record& add(std::string name, double v) { return push(std::move(name), v); }
    Record& add(std::string name, std::uint64_t v) { return push(std::move(name), v); }
    Record& add(std::string name, bool v) { return push(std::move(name), v); }
    Record& add(std::string name, std::string v) { return push(std::move(name), std::move(v)); }
    Record& add(std::string name, const char* v) { return push(std::move(name), std::string(v)); }
    Record& add(std::string name, std::string_view v) { return push(std::move(name), std::string(v)); }

private:
    Record& push(std::string name, FieldValue v) {
        fields.push_back({std::move(name), std::move(v)});
        return *this;
    }
};

/// 17 significant digits, so the decimal text round-trips to the same double.
std::string format_exact(double v);

/// One line per record: `kind=<kind> name=value ...`.
std::string render_records(const std::vector<Record>& records);

/// Human-readable tables. Runs of records of the same kind become one
/// column table; a lone record becomes a two-column name/value list.
std::string render_table(const std::vector<Record>& records);

}  // namespace cointoss::cli
