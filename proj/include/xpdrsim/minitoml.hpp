#pragma once

// Minimal TOML-style reader/writer covering the subset used by scenario
// files: [section] / [[array-of-tables]] headers, key = value lines with
// strings, booleans, integers, floats and flat numeric arrays, and '#'
// comments.

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace xpdrsim::toml {

using Value = std::variant<bool, std::int64_t, double, std::string,
                           std::vector<double>>;

struct Table {
    std::map<std::string, Value> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    const Value& get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end())
            throw std::runtime_error("missing key: " + key);
        return it->second;
    }

    double number(const std::string& key) const {
        const Value& v = get(key);
        if (std::holds_alternative<std::int64_t>(v))
            return static_cast<double>(std::get<std::int64_t>(v));
        if (std::holds_alternative<double>(v)) return std::get<double>(v);
        throw std::runtime_error("key is not numeric: " + key);
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::int64_t integer(const std::string& key) const {
        const Value& v = get(key);
        if (!std::holds_alternative<std::int64_t>(v))
            throw std::runtime_error("key is not an integer: " + key);
        return std::get<std::int64_t>(v);
    }

    std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    std::string str(const std::string& key) const {
        const Value& v = get(key);
        if (!std::holds_alternative<std::string>(v))
            throw std::runtime_error("key is not a string: " + key);
        return std::get<std::string>(v);
    }

    std::string str_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? str(key) : fallback;
    }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const Value& v = get(key);
        if (!std::holds_alternative<bool>(v))
            throw std::runtime_error("key is not a boolean: " + key);
        return std::get<bool>(v);
    }

    std::vector<double> numbers(const std::string& key) const {
        const Value& v = get(key);
        if (std::holds_alternative<std::vector<double>>(v))
            return std::get<std::vector<double>>(v);
        throw std::runtime_error("key is not an array: " + key);
    }
};

struct Document {
    std::map<std::string, Table> tables;                      // [section]
    std::map<std::string, std::vector<Table>> table_arrays;   // [[section]]

    bool has_table(const std::string& name) const { return tables.count(name) != 0; }

    const Table& table(const std::string& name) const {
        auto it = tables.find(name);
        if (it == tables.end())
            throw std::runtime_error("missing section: [" + name + "]");
        return it->second;
    }

    const std::vector<Table>& array(const std::string& name) const {
        static const std::vector<Table> empty;
        auto it = table_arrays.find(name);
        return it == table_arrays.end() ? empty : it->second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline Value parse_scalar(const std::string& tok, int line_no) {
    if (tok.empty())
        throw std::runtime_error("line " + std::to_string(line_no) + ": empty value");
    if (tok == "true") return Value(true);
    if (tok == "false") return Value(false);
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": unterminated string");
        return Value(tok.substr(1, tok.size() - 2));
    }
    // integer if it parses fully without '.', 'e', 'E'
    if (tok.find_first_of(".eE") == std::string::npos ||
        (tok.size() > 1 && tok.substr(0, 2) == "0x")) {
        try {
            std::size_t pos = 0;
            std::int64_t i = std::stoll(tok, &pos, 0);
            if (pos == tok.size()) return Value(i);
        } catch (...) {
        }
    }
    try {
        std::size_t pos = 0;
        double d = std::stod(tok, &pos);
        if (pos == tok.size()) return Value(d);
    } catch (...) {
    }
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": cannot parse value '" + tok + "'");
}

}  // namespace detail

inline Document parse(std::istream& in) {
    Document doc;
    Table* current = &doc.tables[""];
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments (not inside strings; scenario files don't need that)
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) {
                line = line.substr(0, i);
                break;
            }
        }
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.size() >= 4 && line.substr(0, 2) == "[[" &&
            line.substr(line.size() - 2) == "]]") {
            std::string name = detail::trim(line.substr(2, line.size() - 4));
            doc.table_arrays[name].emplace_back();
            current = &doc.table_arrays[name].back();
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            std::string name = detail::trim(line.substr(1, line.size() - 2));
            current = &doc.tables[name];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("line " + std::to_string(line_no) + ": empty key");
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']')
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": unterminated array");
            std::vector<double> arr;
            std::string body = val.substr(1, val.size() - 2);
            std::stringstream ss(body);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = detail::trim(tok);
                if (tok.empty()) continue;
                Value v = detail::parse_scalar(tok, line_no);
                if (std::holds_alternative<std::int64_t>(v))
                    arr.push_back(static_cast<double>(std::get<std::int64_t>(v)));
                else if (std::holds_alternative<double>(v))
                    arr.push_back(std::get<double>(v));
                else
                    throw std::runtime_error("line " + std::to_string(line_no) +
                                             ": arrays must be numeric");
            }
            current->values[key] = Value(std::move(arr));
        } else {
            current->values[key] = detail::parse_scalar(val, line_no);
        }
    }
    return doc;
}

inline void write_value(std::ostream& os, const Value& v) {
    if (std::holds_alternative<bool>(v)) {
        os << (std::get<bool>(v) ? "true" : "false");
    } else if (std::holds_alternative<std::int64_t>(v)) {
        os << std::get<std::int64_t>(v);
    } else if (std::holds_alternative<double>(v)) {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << std::get<double>(v);
        std::string s = tmp.str();
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        os << s;
    } else if (std::holds_alternative<std::string>(v)) {
        os << '"' << std::get<std::string>(v) << '"';
    } else {
        const auto& arr = std::get<std::vector<double>>(v);
        os << '[';
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (i) os << ", ";
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << arr[i];
            os << tmp.str();
        }
        os << ']';
    }
}

inline void write(std::ostream& os, const Document& doc) {
    auto dump_table = [&os](const Table& t) {
        for (const auto& [k, v] : t.values) {
            os << k << " = ";
            write_value(os, v);
            os << '\n';
        }
    };
    if (doc.tables.count("")) dump_table(doc.tables.at(""));
    for (const auto& [name, t] : doc.tables) {
        if (name.empty()) continue;
        os << "\n[" << name << "]\n";
        dump_table(t);
    }
    for (const auto& [name, arr] : doc.table_arrays) {
        for (const auto& t : arr) {
            os << "\n[[" << name << "]]\n";
            dump_table(t);
        }
    }
}

}  // namespace xpdrsim::toml
