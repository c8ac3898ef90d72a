#pragma once

// Arbitrary-precision integer and rational helpers shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diophantine {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Counting refused because the work or memory it needs exceeds the budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::string resource, BigInt required, BigInt allowed)
        : std::runtime_error("budget exceeded: " + resource + " needs " + required.str() +
                             " (budget " + allowed.str() + ")"),
          resource_(std::move(resource)), required_(std::move(required)),
          allowed_(std::move(allowed)) {}

    const std::string& resource() const noexcept { return resource_; }
    const BigInt& required() const noexcept { return required_; }
    const BigInt& allowed() const noexcept { return allowed_; }

private:
    std::string resource_;
    BigInt required_;
    BigInt allowed_;
};

// An operation declined because its input does not have the required shape.
class Refusal : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline BigInt ipow(const BigInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Decimal with optional leading sign; nullopt on anything else.
inline std::optional<BigInt> parse_bigint(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) return std::nullopt;
    BigInt value = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return negative ? BigInt(-value) : value;
}

// floor(v^(1/n)) for v >= 0, n >= 1.
inline BigInt iroot(const BigInt& v, unsigned n) {
    if (v < 0) throw std::domain_error("iroot of a negative value");
    if (n == 0) throw std::domain_error("iroot of degree 0");
    if (v < 2 || n == 1) return v;
    std::size_t bits = boost::multiprecision::msb(v) + 1;
    BigInt x = BigInt(1) << ((bits + n - 1) / n);  // x >= root
    while (true) {
        BigInt y = ((n - 1) * x + v / ipow(x, n - 1)) / n;
        if (y >= x) break;
        x = y;
    }
    while (ipow(x, n) > v) --x;
    while (ipow(x + 1, n) <= v) ++x;
    return x;
}

// Exact n-th root when v is a perfect n-th power (sign allowed for odd n).
inline std::optional<BigInt> exact_root(const BigInt& v, unsigned n) {
    if (v < 0) {
        if (n % 2 == 0) return std::nullopt;
        auto r = exact_root(-v, n);
        if (!r) return std::nullopt;
        return BigInt(-*r);
    }
    BigInt r = iroot(v, n);
    if (ipow(r, n) != v) return std::nullopt;
    return r;
}

inline bool is_perfect_square(const BigInt& v) { return v >= 0 && exact_root(v, 2).has_value(); }

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline BigInt from_u128(unsigned __int128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    return (hi << 64) + static_cast<std::uint64_t>(v);
}

}  // namespace diophantine
