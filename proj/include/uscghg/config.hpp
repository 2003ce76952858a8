#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uscghg/common.hpp"
#include "uscghg/rng.hpp"

namespace uscghg {

// Distribution spec as (family, params), validated at parse time.
struct Dist {
    enum class Family { Const, Uniform, Normal, TruncNormal, LogNormal, Triangular };
    Family family = Family::Const;
    std::vector<double> params;

    double sample(Rng& rng) const {
        switch (family) {
            case Family::Const: return params[0];
            case Family::Uniform: return rng.uniform(params[0], params[1]);
            case Family::Normal: return rng.normal(params[0], params[1]);
            case Family::TruncNormal: return rng.truncated_normal_nonneg(params[0], params[1]);
            case Family::LogNormal: return rng.lognormal(params[0], params[1]);
            case Family::Triangular: return rng.triangular(params[0], params[1], params[2]);
        }
        throw ConfigError("unreachable distribution family");
    }

    double mean() const {
        switch (family) {
            case Family::Const: return params[0];
            case Family::Uniform: return 0.5 * (params[0] + params[1]);
            case Family::Normal: return params[0];
            case Family::TruncNormal: return params[0];  // approximation, truncation mass small
            case Family::LogNormal: return std::exp(params[0] + 0.5 * params[1] * params[1]);
            case Family::Triangular: return (params[0] + params[1] + params[2]) / 3.0;
        }
        throw ConfigError("unreachable distribution family");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline bool parse_number(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace detail

inline Dist parse_dist(const std::string& raw, const std::string& context) {
    const std::string s = detail::trim(raw);
    double v = 0.0;
    if (detail::parse_number(s, v)) return Dist{Dist::Family::Const, {v}};

    const size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw ConfigError(context + ": expected number or family(p1,p2,...), got '" + s + "'");
    const std::string fam = detail::trim(s.substr(0, open));
    std::vector<double> params;
    std::string body = s.substr(open + 1, s.size() - open - 2);
    size_t start = 0;
    while (start <= body.size()) {
        size_t comma = body.find(',', start);
        std::string tok = detail::trim(body.substr(start, comma == std::string::npos
                                                              ? std::string::npos
                                                              : comma - start));
        if (!tok.empty()) {
            double p = 0.0;
            if (!detail::parse_number(tok, p))
                throw ConfigError(context + ": bad distribution parameter '" + tok + "'");
            params.push_back(p);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }

    auto need = [&](size_t n) {
        if (params.size() != n)
            throw ConfigError(context + ": " + fam + " takes " + std::to_string(n) +
                              " parameters, got " + std::to_string(params.size()));
    };
    if (fam == "const") {
        need(1);
        return Dist{Dist::Family::Const, params};
    }
    if (fam == "uniform") {
        need(2);
        if (params[0] >= params[1]) throw ConfigError(context + ": uniform requires lo < hi");
        return Dist{Dist::Family::Uniform, params};
    }
    if (fam == "normal") {
        need(2);
        if (params[1] < 0) throw ConfigError(context + ": normal requires sd >= 0");
        return Dist{Dist::Family::Normal, params};
    }
    if (fam == "truncnormal") {
        need(2);
        if (params[1] < 0) throw ConfigError(context + ": truncnormal requires sd >= 0");
        return Dist{Dist::Family::TruncNormal, params};
    }
    if (fam == "lognormal") {
        need(2);
        if (params[1] < 0) throw ConfigError(context + ": lognormal requires sd_log >= 0");
        return Dist{Dist::Family::LogNormal, params};
    }
    if (fam == "triangular") {
        need(3);
        if (!(params[0] <= params[1] && params[1] <= params[2] && params[0] < params[2]))
            throw ConfigError(context + ": triangular requires lo <= mode <= hi, lo < hi");
        return Dist{Dist::Family::Triangular, params};
    }
    throw ConfigError(context + ": unknown distribution family '" + fam + "'");
}

// INI-style key-value file: [section] headers, key = value lines, '#' comments.
class KeyValues {
public:
    KeyValues() = default;

    static KeyValues parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config '" + path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse_text(text, path);
    }

    static KeyValues parse_text(const std::string& text, const std::string& origin = "<string>") {
        KeyValues kv;
        kv.origin_ = origin;
        std::string section;
        size_t lineno = 0;
        size_t pos = 0;
        std::vector<std::string> violations;
        while (pos <= text.size()) {
            size_t nl = text.find('\n', pos);
            std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                        : nl - pos);
            pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
            ++lineno;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    violations.push_back(origin + ":" + std::to_string(lineno) +
                                         ": malformed section header '" + line + "'");
                    continue;
                }
                section = detail::trim(line.substr(1, line.size() - 2));
                continue;
            }
            const size_t eq = line.find('=');
            if (eq == std::string::npos) {
                violations.push_back(origin + ":" + std::to_string(lineno) +
                                     ": expected key = value, got '" + line + "'");
                continue;
            }
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string val = detail::trim(line.substr(eq + 1));
            if (key.empty()) {
                violations.push_back(origin + ":" + std::to_string(lineno) + ": empty key");
                continue;
            }
            const std::string full = section.empty() ? key : section + "." + key;
            if (kv.values_.count(full))
                violations.push_back(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     full + "'");
            kv.values_[full] = val;
        }
        if (!violations.empty()) throw ConfigError(violations);
        return kv;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        double v = 0.0;
        if (!detail::parse_number(it->second, v))
            throw ConfigError(origin_ + ": key '" + key + "': cannot parse number '" +
                              it->second + "'");
        return v;
    }

    long get_long(const std::string& key, long fallback) const {
        const double v = get_double(key, static_cast<double>(fallback));
        return static_cast<long>(v);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const std::string& s = it->second;
        if (s == "true" || s == "on" || s == "1") return true;
        if (s == "false" || s == "off" || s == "0") return false;
        throw ConfigError(origin_ + ": key '" + key + "': expected boolean, got '" + s + "'");
    }

    Dist get_dist(const std::string& key, const Dist& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_dist(it->second, origin_ + ": key '" + key + "'");
    }

    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        std::string body = it->second;
        size_t start = 0;
        while (start <= body.size()) {
            size_t comma = body.find(',', start);
            std::string tok = detail::trim(body.substr(start, comma == std::string::npos
                                                                  ? std::string::npos
                                                                  : comma - start));
            if (!tok.empty()) {
                double v = 0.0;
                if (!detail::parse_number(tok, v))
                    throw ConfigError(origin_ + ": key '" + key + "': bad list element '" + tok +
                                      "'");
                out.push_back(v);
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }

    // Typo protection: every key present in the file must be declared known.
    // Returns the full list of violations instead of stopping at the first.
    std::vector<std::string> unknown_keys(const std::set<std::string>& known) const {
        std::vector<std::string> bad;
        for (const auto& [k, v] : values_)
            if (!known.count(k)) bad.push_back(origin_ + ": unknown key '" + k + "'");
        return bad;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_ = "<empty>";
};

}  // namespace uscghg
