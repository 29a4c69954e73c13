// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/errors.hpp"

#include <cctype>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace expdisc::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes; embedded newlines are not supported.
inline std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) throw ValidationError("unterminated quoted field in CSV record");
    fields.push_back(std::move(field));
    return fields;
}

inline std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

inline std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return std::string(s);
}

/// A parsed table: lowercased header names plus data rows with their
/// 1-based line numbers. Blank lines are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

inline Table read_table(std::istream& in, std::size_t expected_columns) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_record(line);
        for (auto& f : fields) f = trim(f);
        if (fields.size() != expected_columns)
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(expected_columns) + " columns, found " +
                                  std::to_string(fields.size()));
        if (!have_header) {
            for (auto& f : fields)
                for (auto& ch : f) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw ValidationError("input is empty (no header line)");
    return table;
}

}  // namespace expdisc::csv
