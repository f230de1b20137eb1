#include "qfp/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qfp::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

void assign(std::vector<std::pair<std::string, std::string>>& entries, const std::string& key,
            const std::string& value, const std::string& origin) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
    if (it == entries.end()) throw ConfigError(origin + ": unknown key '" + key + "'");
    it->second = value;
}

void read_file(const std::string& path, const std::string& command,
               std::vector<std::pair<std::string, std::string>>& entries) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::string line, section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineNo);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        if (!section.empty() && section != command) continue;  // other commands' sections
        assign(entries, normalize_key(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), where);
    }
}

}  // namespace

double parse_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (!value.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError("key '" + key + "': expected a finite number, got '" + value + "'");
    return v;
}

Config Config::resolve(const std::string& command, const Schema& schema, const std::vector<std::string>& flags) {
    Config c;
    c.entries_ = schema;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string file;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        const std::string& f = flags[i];
        if (f.rfind("--", 0) != 0 || f.size() == 2) throw ConfigError("unexpected argument '" + f + "'");
        std::string key = f.substr(2), value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= flags.size()) throw ConfigError("flag '" + f + "' needs a value");
            value = flags[++i];
        }
        key = normalize_key(key);
        if (key == "config") file = value;
        else overrides.emplace_back(key, value);
    }
    if (!file.empty()) read_file(file, command, c.entries_);
    for (const auto& [k, v] : overrides) assign(c.entries_, k, v, "flag --" + k);
    return c;
}

const std::string& Config::text(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.first == key) return e.second;
    throw ConfigError("internal: key '" + key + "' missing from schema");
}

double Config::number(const std::string& key) const { return parse_number(key, text(key)); }

std::size_t Config::count(const std::string& key) const {
    const double v = number(key);
    if (v < 0.0 || v != std::floor(v) || v > 1e9) throw ConfigError("key '" + key + "': expected a count");
    return static_cast<std::size_t>(v);
}

std::vector<std::string> Config::list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> Config::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : list(key)) out.push_back(parse_number(key, s));
    return out;
}

}  // namespace qfp::cli
