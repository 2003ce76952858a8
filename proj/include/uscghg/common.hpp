#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uscghg {

// Exception taxonomy mapped to CLI exit codes: config 2, validation 3,
// numerical 4. IO failures reuse the validation code.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    explicit ConfigError(const std::vector<std::string>& violations)
        : std::runtime_error(join(violations)), violations_(violations) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "\n";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Annual calendar grid, inclusive on both ends.
struct YearGrid {
    int start = 2020;
    int end = 2300;

    int size() const { return end - start + 1; }
    bool contains(int year) const { return year >= start && year <= end; }
    int index(int year) const {
        if (!contains(year))
            throw ValidationError("year " + std::to_string(year) + " outside grid " +
                                  std::to_string(start) + "-" + std::to_string(end));
        return year - start;
    }
    int year_at(int idx) const { return start + idx; }
    bool operator==(const YearGrid& o) const = default;
};

inline std::vector<int> years_of(const YearGrid& g) {
    std::vector<int> ys(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) ys[static_cast<size_t>(i)] = g.start + i;
    return ys;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw ValidationError("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Linear interpolation over a sorted list of (x, y) knots, clamped at the ends.
struct PiecewiseLinear {
    std::vector<double> xs;
    std::vector<double> ys;

    double operator()(double x) const {
        if (xs.empty()) throw ConfigError("piecewise-linear curve has no knots");
        if (xs.size() != ys.size()) throw ConfigError("piecewise-linear knot size mismatch");
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        size_t hi = 1;
        while (xs[hi] < x) ++hi;
        const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return ys[hi - 1] + w * (ys[hi] - ys[hi - 1]);
    }

    bool monotone_nondecreasing() const {
        for (size_t i = 1; i < ys.size(); ++i)
            if (ys[i] < ys[i - 1]) return false;
        return true;
    }
};

}  // namespace uscghg
