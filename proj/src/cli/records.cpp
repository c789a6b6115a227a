// SPDX-License-Identifier: Apache-2.0
#include "cointoss/cli/records.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace cointoss::cli {

namespace {

std::string quote_if_needed(const std::string& s) {
    if (!s.empty() && s.find_first_of(" \t\"=") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

std::string exact_text(const FieldValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_exact(x);
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return quote_if_needed(x);
            } else {
                return fmt::format("{}", x);
            }
        },
        v);
}

std::string display_text(const FieldValue& v) {
    if (const auto* d = std::get_if<double>(&v)) return fmt::format("{:.6g}", *d);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    return exact_text(v);
}

}  // namespace

std::string format_exact(double v) { return fmt::format("{:.17g}", v); }

std::string render_records(const std::vector<Record>& records) {
    std::string out;
    for (const auto& r : records) {
        out += "kind=" + r.kind;
        for (const auto& f : r.fields) out += " " + f.name + "=" + exact_text(f.value);
        out += '\n';
    }
    return out;
}

std::string render_table(const std::vector<Record>& records) {
    std::string out;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i + 1;
        while (j < records.size() && records[j].kind == records[i].kind) ++j;
        out += fmt::format("[{}]\n", records[i].kind);
        if (j - i == 1) {
            std::size_t width = 0;
            for (const auto& f : records[i].fields) width = std::max(width, f.name.size());
            for (const auto& f : records[i].fields) {
                out += fmt::format("  {:<{}}  {}\n", f.name, width, display_text(f.value));
            }
        } else {
            const auto& header = records[i].fields;
            std::vector<std::size_t> widths;
            for (const auto& f : header) widths.push_back(f.name.size());
            for (std::size_t r = i; r < j; ++r) {
                for (std::size_t c = 0; c < records[r].fields.size() && c < widths.size(); ++c) {
                    widths[c] = std::max(widths[c], display_text(records[r].fields[c].value).size());
                }
            }
            std::string line = " ";
            for (std::size_t c = 0; c < header.size(); ++c) line += fmt::format(" {:>{}}", header[c].name, widths[c]);
            out += line + '\n';
            for (std::size_t r = i; r < j; ++r) {
                line = " ";
                for (std::size_t c = 0; c < records[r].fields.size() && c < widths.size(); ++c) {
                    line += fmt::format(" {:>{}}", display_text(records[r].fields[c].value), widths[c]);
                }
                out += line + '\n';
            }
        }
        out += '\n';
        i = j;
    }
    return out;
}

}  // namespace cointoss::cli
