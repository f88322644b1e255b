#pragma once

// Line-oriented `key = value` text with `[section]` headers.
//
//   # comment (also ';')
//   top_level_key = value
//   [section.name]
//   key = value
//
// Section order and key order are preserved. Every entry remembers its line so
// that semantic errors downstream can point back into the file.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc::kv {

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;  // empty for the top-level block
    int line = 0;
    std::vector<Entry> entries;

    const Entry* find(std::string_view key) const {
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const Entry& e) { return e.key == key; });
        return it == entries.end() ? nullptr : &*it;
    }

    /// Rejects keys not in `allowed`; catches typos that would otherwise fall back to defaults.
    void require_known(std::initializer_list<std::string_view> allowed) const {
        for (const auto& e : entries) {
            if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
                const std::string where = name.empty() ? "top level" : "[" + name + "]";
                throw ConfigError("unknown key '" + e.key + "' in " + where, e.line);
            }
        }
    }

    std::string get_string(std::string_view key) const {
        if (const Entry* e = find(key)) return e->value;
        throw ConfigError(missing(key), line);
    }

    std::string get_string(std::string_view key, std::string fallback) const {
        if (const Entry* e = find(key)) return e->value;
        return fallback;
    }

    double get_double(std::string_view key) const {
        if (const Entry* e = find(key)) return parse_double(*e);
        throw ConfigError(missing(key), line);
    }

    double get_double(std::string_view key, double fallback) const {
        if (const Entry* e = find(key)) return parse_double(*e);
        return fallback;
    }

    long long get_int(std::string_view key, long long fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        long long v = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw ConfigError("'" + e->key + "' expects an integer, got '" + e->value + "'", e->line);
        return v;
    }

    bool get_bool(std::string_view key, bool fallback) const {
        const Entry* e = find(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "0") return false;
        throw ConfigError("'" + e->key + "' expects true/false, got '" + e->value + "'", e->line);
    }

    static double parse_double(const Entry& e) {
        double v = 0.0;
        const char* first = e.value.data();
        const char* last = first + e.value.size();
        if (first != last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw ConfigError("'" + e.key + "' expects a number, got '" + e.value + "'", e.line);
        return v;
    }

private:
    std::string missing(std::string_view key) const {
        const std::string where = name.empty() ? "top level" : "[" + name + "]";
        return "missing key '" + std::string(key) + "' in " + where;
    }
};

struct Document {
    std::vector<Section> sections;  // sections[0] is always the top-level block

    const Section& root() const { return sections.front(); }

    const Section* find(std::string_view name) const {
        auto it = std::find_if(sections.begin(), sections.end(),
                               [&](const Section& s) { return s.name == name; });
        return it == sections.end() ? nullptr : &*it;
    }
};

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline Document parse(std::istream& in) {
    Document doc;
    doc.sections.push_back(Section{"", 1, {}});
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.empty()) throw ConfigError("empty section name", lineno);
            if (doc.find(name)) throw ConfigError("duplicate section [" + name + "]", lineno);
            doc.sections.push_back(Section{std::move(name), lineno, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", lineno);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("empty key", lineno);
        Section& sec = doc.sections.back();
        if (sec.find(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
        sec.entries.push_back(Entry{std::move(key), std::move(value), lineno});
    }
    return doc;
}

inline Document parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

inline Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return parse(in);
}

}  // namespace spdc::kv
