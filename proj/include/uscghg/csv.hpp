#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uscghg/common.hpp"

namespace uscghg {
namespace csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
    int require_column(const std::string& name) const {
        const int c = column(name);
        if (c < 0) throw ValidationError("missing column '" + name + "'");
        return c;
    }
};

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw ValidationError(path + ": row " + std::to_string(t.rows.size() + 2) +
                                      " has " + std::to_string(cells.size()) + " fields, expected " +
                                      std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw ValidationError(path + ": empty file");
    return t;
}

inline double parse_double(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse '" + s + "' as number (" + context + ")");
    }
}

inline long parse_long(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse '" + s + "' as integer (" + context + ")");
    }
}

// Shortest round-trip formatting keeps result files byte-stable across runs
// while preserving full double precision.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char probe[40];
            std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
            std::sscanf(probe, "%lf", &back);
            if (back == v) return probe;
        }
    }
    return buf;
}

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot write '" + path + "'");
        path_ = path;
    }

    void row(const std::vector<std::string>& cells) {
        std::string line;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        line += '\n';
        out_ << line;
        if (!out_) throw IoError("write failure on '" + path_ + "'");
    }

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace csv
}  // namespace uscghg
