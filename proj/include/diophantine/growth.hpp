#pragma once

// Sweep rows and least-squares growth fits.

#include "integer.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace diophantine {

struct SweepRow {
    std::uint64_t n = 0;
    std::optional<BigInt> count;  // empty when the row was refused
    std::string method;
    double elapsed_ms = 0;
    std::string refusal;
};

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // root mean square
    std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept.
inline FitResult fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_line: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: x values are all equal");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.slope * xs[i] + f.intercept);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.points = xs.size();
    return f;
}

inline double log_of(const BigInt& v) {
    // Values far beyond double range: shift first.
    std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits < 1000) return std::log(v.convert_to<double>());
    std::size_t shift = bits - 64;
    return std::log(BigInt(v >> shift).convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

// Slope of ln(count) against ln(N) over rows with a positive count.
inline FitResult fit_exponent(std::span<const SweepRow> rows) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (!r.count || *r.count <= 0) continue;
        xs.push_back(std::log(static_cast<double>(r.n)));
        ys.push_back(log_of(*r.count));
    }
    if (xs.size() < 3)
        throw std::invalid_argument("fit_exponent needs at least 3 rows with positive counts, got " +
                                    std::to_string(xs.size()));
    return fit_line(xs, ys);
}

}  // namespace diophantine
