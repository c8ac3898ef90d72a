#pragma once

// Value types for diagonal Diophantine equations
//
//     c_1 * v_1^e_1 + ... + c_m * v_m^e_m + c_0 = 0
//
// together with exact evaluation and structural classification. A variable
// may occur in two terms with different exponents (x^a - x^b forms); all
// other variables occur once.

#include "integer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace diophantine {

// Compares identifiers with embedded digit runs numerically, so x2 < x10.
inline bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            auto ra = a.substr(i, ie - i), rb = b.substr(j, je - j);
            while (ra.size() > 1 && ra.front() == '0') ra.remove_prefix(1);
            while (rb.size() > 1 && rb.front() == '0') rb.remove_prefix(1);
            if (ra.size() != rb.size()) return ra.size() < rb.size();
            if (ra != rb) return ra < rb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

inline bool is_identifier(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    });
}

struct Term {
    BigInt coeff;
    std::string var;
    unsigned exp = 1;

    Term(BigInt coeff_, std::string var_, unsigned exp_ = 1)
        : coeff(std::move(coeff_)), var(std::move(var_)), exp(exp_) {
        if (exp == 0) throw std::invalid_argument("term exponent must be >= 1");
        if (coeff == 0) throw std::invalid_argument("term coefficient must be nonzero");
        if (!is_identifier(var)) throw std::invalid_argument("invalid variable name '" + var + "'");
    }

    bool operator==(const Term&) const = default;
};

// Degree descending, then variable ascending.
inline bool canonical_less(const Term& a, const Term& b) {
    if (a.exp != b.exp) return a.exp > b.exp;
    return natural_less(a.var, b.var);
}

class DiagonalEquation {
public:
    DiagonalEquation(std::vector<Term> terms, BigInt constant = 0)
        : terms_(std::move(terms)), constant_(std::move(constant)) {
        if (terms_.empty()) throw std::invalid_argument("equation needs at least one term");
        std::stable_sort(terms_.begin(), terms_.end(), canonical_less);
        std::map<std::string, std::vector<unsigned>> seen;
        for (const auto& t : terms_) seen[t.var].push_back(t.exp);
        for (const auto& [var, exps] : seen) {
            if (exps.size() > 2)
                throw std::invalid_argument("variable '" + var + "' appears in more than two terms");
            if (exps.size() == 2 && exps[0] == exps[1])
                throw std::invalid_argument("variable '" + var + "' appears twice with exponent " +
                                            std::to_string(exps[0]));
        }
        for (const auto& [var, exps] : seen) variables_.push_back(var);
        std::sort(variables_.begin(), variables_.end(),
                  [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    const BigInt& constant() const noexcept { return constant_; }

    // Distinct variables in ascending identifier order.
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    std::size_t variable_count() const noexcept { return variables_.size(); }

    std::vector<Term> terms_of(std::string_view var) const {
        std::vector<Term> out;
        for (const auto& t : terms_)
            if (t.var == var) out.push_back(t);
        return out;
    }

    unsigned max_degree() const noexcept { return terms_.front().exp; }

    bool operator==(const DiagonalEquation& o) const {
        return terms_ == o.terms_ && constant_ == o.constant_;
    }

private:
    std::vector<Term> terms_;
    BigInt constant_;
    std::vector<std::string> variables_;
};

using Assignment = std::map<std::string, BigInt, std::less<>>;

// Zips values with eq.variables().
inline Assignment make_assignment(const DiagonalEquation& eq, const std::vector<BigInt>& values) {
    if (values.size() != eq.variable_count())
        throw std::domain_error("expected " + std::to_string(eq.variable_count()) + " values, got " +
                                std::to_string(values.size()));
    Assignment a;
    for (std::size_t i = 0; i < values.size(); ++i) a.emplace(eq.variables()[i], values[i]);
    return a;
}

enum class DomainKind { Natural, SymmetricInteger };

inline std::string_view to_string(DomainKind k) {
    return k == DomainKind::Natural ? "natural" : "integer";
}

// Natural: every variable in [1, N]. SymmetricInteger: every variable in [-N, N].
struct Domain {
    DomainKind kind = DomainKind::Natural;
    std::uint64_t bound = 1;

    static constexpr std::uint64_t max_bound = std::uint64_t{1} << 40;

    Domain(DomainKind k, std::uint64_t n) : kind(k), bound(n) {
        if (n == 0) throw std::domain_error("domain bound must be positive");
        if (n > max_bound) throw std::domain_error("domain bound too large");
    }
    static Domain natural(std::uint64_t n) { return {DomainKind::Natural, n}; }
    static Domain symmetric(std::uint64_t n) { return {DomainKind::SymmetricInteger, n}; }

    std::int64_t lo() const noexcept {
        return kind == DomainKind::Natural ? 1 : -static_cast<std::int64_t>(bound);
    }
    std::int64_t hi() const noexcept { return static_cast<std::int64_t>(bound); }
    std::uint64_t size() const noexcept { return static_cast<std::uint64_t>(hi() - lo() + 1); }
    bool contains(const BigInt& v) const { return v >= lo() && v <= hi(); }

    bool operator==(const Domain&) const = default;
};

inline BigInt evaluate(const DiagonalEquation& eq, const Assignment& values) {
    BigInt sum = eq.constant();
    for (const auto& t : eq.terms()) {
        auto it = values.find(t.var);
        if (it == values.end()) throw std::domain_error("no value for variable '" + t.var + "'");
        sum += t.coeff * ipow(it->second, t.exp);
    }
    return sum;
}

inline bool is_solution(const DiagonalEquation& eq, const Assignment& values, const Domain& domain) {
    if (evaluate(eq, values) != 0) return false;
    for (const auto& var : eq.variables())
        if (!domain.contains(values.find(var)->second)) return false;
    return true;
}

struct DegreeBlock {
    unsigned degree = 0;
    std::size_t terms = 0;
    std::size_t positive = 0;
    std::size_t negative = 0;
    bool unit_coefficients = true;  // every coefficient is +1 or -1

    bool balanced() const noexcept { return positive == negative; }
    std::size_t pairs() const noexcept { return std::min(positive, negative); }
    bool operator==(const DegreeBlock&) const = default;
};

struct StructureDescriptor {
    std::vector<DegreeBlock> blocks;  // degree descending
    bool homogeneous = true;          // constant term is zero
    bool all_exponents_even = true;
    bool all_exponents_odd = true;
    bool repeated_variables = false;

    std::size_t term_count() const noexcept {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.terms;
        return n;
    }
    bool all_unit_coefficients() const noexcept {
        return std::all_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.unit_coefficients; });
    }
    bool operator==(const StructureDescriptor&) const = default;
};

inline StructureDescriptor classify(const DiagonalEquation& eq) {
    StructureDescriptor d;
    d.homogeneous = eq.constant() == 0;
    d.repeated_variables = eq.variable_count() != eq.terms().size();
    for (const auto& t : eq.terms()) {
        if (d.blocks.empty() || d.blocks.back().degree != t.exp) d.blocks.push_back({t.exp});
        auto& b = d.blocks.back();
        ++b.terms;
        (t.coeff > 0 ? b.positive : b.negative)++;
        if (t.coeff != 1 && t.coeff != -1) b.unit_coefficients = false;
        if (t.exp % 2 == 0) d.all_exponents_odd = false;
        else d.all_exponents_even = false;
    }
    return d;
}

// x_1^k - y_1^k + ... over one or more degrees: homogeneous, unit coefficients,
// each variable once, and every degree block split evenly between signs.
inline bool is_symmetric_pair_form(const DiagonalEquation& eq) {
    auto d = classify(eq);
    if (!d.homogeneous || d.repeated_variables || !d.all_unit_coefficients()) return false;
    return std::all_of(d.blocks.begin(), d.blocks.end(), [](const auto& b) { return b.balanced(); });
}

}  // namespace diophantine
