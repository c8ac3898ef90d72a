#pragma once

// Constructive infinite solution families: parametric monomial families for
// a_1 x_1^n_1 + ... + a_k x_k^n_k = 0, Pell chains, and integer scaling of
// a homogeneous solution. Every member is checked by exact substitution
// before it is handed out.

#include "count.hpp"
#include "equation.hpp"

#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace diophantine {

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FamilyKind { Parametric, Pell, Scaling };

inline std::string_view to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::Parametric: return "parametric";
        case FamilyKind::Pell: return "pell";
        case FamilyKind::Scaling: return "scaling";
    }
    return "?";
}

// A verified stream of solutions. Members are aligned with
// equation().variables(), and max |coordinate| never decreases along the
// stream, so members_within() can stop at the first member outside the box.
class SolutionFamily {
public:
    using Member = std::vector<BigInt>;
    using Source = std::function<Member()>;

    SolutionFamily(FamilyKind kind, DiagonalEquation eq, std::string description, Source source)
        : kind_(kind), eq_(std::move(eq)), description_(std::move(description)), source_(std::move(source)) {}

    FamilyKind kind() const noexcept { return kind_; }
    const DiagonalEquation& equation() const noexcept { return eq_; }
    const std::string& description() const noexcept { return description_; }
    bool verified() const noexcept { return true; }

    Member next() {
        Member m = source_();
        if (evaluate(eq_, make_assignment(eq_, m)) != 0) {
            std::string text;
            for (const auto& v : m) text += (text.empty() ? "" : ",") + v.str();
            throw ConstructionError("family member (" + text + ") does not satisfy the equation");
        }
        return m;
    }

    std::vector<Member> take(std::size_t count) {
        std::vector<Member> out;
        for (std::size_t i = 0; i < count; ++i) out.push_back(next());
        return out;
    }

    std::vector<Member> members_within(const BigInt& n, std::size_t cap = 100000) {
        std::vector<Member> out;
        for (std::size_t i = 0; i < cap; ++i) {
            auto m = next();
            if (max_abs(m) > n) break;
            out.push_back(std::move(m));
        }
        return out;
    }

    static BigInt max_abs(const Member& m) {
        BigInt best = 0;
        for (const auto& v : m) best = std::max(best, BigInt(abs(v)));
        return best;
    }

private:
    FamilyKind kind_;
    DiagonalEquation eq_;
    std::string description_;
    Source source_;
};

// Which exponent reading produced a verified parametric family.
enum class ParametricReading {
    Printed,            // x_i = |a_i|^(Q/n_i) t^(sP/n_i), x_1 = a_1^(Q-1) t^r
    LeadingCoefficient,  // x_i = a_1^(Q/n_i) t^(sP/n_i), x_1 = a_1^(Q-1) t^r
    ValuationMatched,   // a_1 exponents solved from the a_1-adic balance
};

inline std::string_view to_string(ParametricReading r) {
    switch (r) {
        case ParametricReading::Printed: return "printed";
        case ParametricReading::LeadingCoefficient: return "leading-coefficient";
        case ParametricReading::ValuationMatched: return "valuation-matched";
    }
    return "?";
}

// a_1 x_1^n_1 + a_2 x_2^n_2 + ... = 0 with gcd(n_1, P) = 1, P = n_2...n_k,
// Q = n_1 P, t = -(a_2 + ... + a_k) a_1^(n_1 - 1), and n_1 r - P s = 1.
// Member m uses (r + P m, s + n_1 m):
//   x_1 = a_1^beta t^r,  x_i = base_i^gamma_i t^(s P / n_i).
struct ParametricConstruction {
    std::string leading_var;
    BigInt a1;
    unsigned n1 = 1;
    std::vector<std::string> other_vars;
    std::vector<BigInt> other_coeffs;
    std::vector<unsigned> other_degrees;
    BigInt p = 1;  // n_2 ... n_k
    BigInt q = 1;  // n_1 ... n_k
    BigInt t;
    BigInt r, s;  // minimal pair with r >= 1, s >= 1
    ParametricReading reading = ParametricReading::Printed;
    unsigned beta = 0;
    std::vector<unsigned> gammas;
    std::vector<BigInt> bases;

    // Coordinates aligned with the equation's variables.
    SolutionFamily::Member member(const DiagonalEquation& eq, std::uint64_t index) const {
        BigInt ri = r + p * index;
        BigInt si = s + BigInt(n1) * index;
        std::map<std::string, BigInt, std::less<>> values;
        values[leading_var] = ipow(a1, beta) * ipow(t, ri.convert_to<unsigned>());
        for (std::size_t i = 0; i < other_vars.size(); ++i) {
            BigInt texp = si * p / other_degrees[i];
            values[other_vars[i]] = ipow(bases[i], gammas[i]) * ipow(t, texp.convert_to<unsigned>());
        }
        SolutionFamily::Member m;
        for (const auto& v : eq.variables()) m.push_back(values.at(v));
        return m;
    }
};

namespace detail {

inline std::vector<std::string> parametric_failures(const DiagonalEquation& eq, const Term& lead) {
    std::vector<std::string> failed;
    BigInt others = 0;
    BigInt p = 1;
    for (const auto& t : eq.terms()) {
        if (&t == &lead) continue;
        others += t.coeff;
        p *= t.exp;
    }
    if (lead.coeff <= 0) failed.push_back("a1 > 0");
    if (boost::multiprecision::gcd(BigInt(lead.exp), p) != 1) failed.push_back("gcd(n1, n2...nk) = 1");
    if (others == 0) failed.push_back("a2 + ... + ak != 0");
    else if (others > 0) failed.push_back("a2 + ... + ak < 0");
    else if (lead.coeff > 0 && -others * ipow(lead.coeff, lead.exp - 1) < 2)
        failed.push_back("t = -(a2 + ... + ak) a1^(n1-1) >= 2");
    return failed;
}

inline bool check_construction(const DiagonalEquation& eq, const ParametricConstruction& c) {
    for (std::uint64_t i = 0; i < 2; ++i)
        if (evaluate(eq, make_assignment(eq, c.member(eq, i))) != 0) return false;
    return true;
}

}  // namespace detail

// Builds and verifies the monomial construction. leading_var picks x_1; by
// default the first term (canonical order) meeting every hypothesis.
inline ParametricConstruction parametric_construction(const DiagonalEquation& eq,
                                                      std::optional<std::string> leading_var = std::nullopt) {
    if (eq.constant() != 0) throw Refusal("parametric family: equation must have no constant term");
    if (eq.variable_count() != eq.terms().size()) throw Refusal("parametric family: each variable must occur once");
    if (eq.terms().size() < 2) throw Refusal("parametric family: needs k >= 2 terms");

    const Term* lead = nullptr;
    std::vector<std::string> reasons;
    for (const auto& t : eq.terms()) {
        if (leading_var && t.var != *leading_var) continue;
        auto failed = detail::parametric_failures(eq, t);
        if (failed.empty()) {
            lead = &t;
            break;
        }
        if (reasons.empty() || leading_var) reasons = failed;
    }
    if (!lead) {
        if (leading_var && reasons.empty()) throw Refusal("parametric family: no term in variable " + *leading_var);
        std::string why;
        for (const auto& r : reasons) why += (why.empty() ? "" : "; ") + r;
        throw Refusal("parametric family: hypothesis fails: " + why);
    }

    ParametricConstruction c;
    c.leading_var = lead->var;
    c.a1 = lead->coeff;
    c.n1 = lead->exp;
    BigInt others = 0;
    for (const auto& t : eq.terms()) {
        if (&t == lead) continue;
        c.other_vars.push_back(t.var);
        c.other_coeffs.push_back(t.coeff);
        c.other_degrees.push_back(t.exp);
        c.p *= t.exp;
        others += t.coeff;
    }
    c.q = c.p * c.n1;
    c.t = -others * ipow(c.a1, c.n1 - 1);

    // Smallest r >= 1 with n1 r = 1 (mod P), then lift until s >= 1.
    BigInt r = 1;
    while ((BigInt(c.n1) * r - 1) % c.p != 0) ++r;
    BigInt s = (BigInt(c.n1) * r - 1) / c.p;
    while (s < 1) {
        r += c.p;
        s += c.n1;
    }
    c.r = r;
    c.s = s;

    if (c.q > 4096) throw Refusal("parametric family: degree product too large");
    unsigned q = c.q.convert_to<unsigned>();

    auto with_bases = [&](ParametricReading reading, unsigned beta, std::vector<unsigned> gammas,
                          std::vector<BigInt> bases) {
        ParametricConstruction k = c;
        k.reading = reading;
        k.beta = beta;
        k.gammas = std::move(gammas);
        k.bases = std::move(bases);
        return k;
    };

    std::vector<unsigned> printed_gammas;
    std::vector<BigInt> abs_coeffs, leading_bases;
    for (std::size_t i = 0; i < c.other_vars.size(); ++i) {
        printed_gammas.push_back(q / c.other_degrees[i]);
        abs_coeffs.push_back(abs(c.other_coeffs[i]));
        leading_bases.push_back(c.a1);
    }
    auto printed = with_bases(ParametricReading::Printed, q - 1, printed_gammas, abs_coeffs);
    if (detail::check_construction(eq, printed)) return printed;
    auto leading = with_bases(ParametricReading::LeadingCoefficient, q - 1, printed_gammas, leading_bases);
    if (detail::check_construction(eq, leading)) return leading;

    // a_1-adic balance: a_1 x_1^n_1 carries a_1^(1 + n_1 beta) t^(s P + 1) and
    // t contributes a_1^(n_1 - 1), so each x_i needs n_i gamma_i = n_1 (beta + 1).
    std::vector<unsigned> betas{q - 1};
    for (unsigned m = 1; m <= c.n1 + 1; ++m) betas.push_back(c.p.convert_to<unsigned>() * m - 1);
    for (unsigned beta : betas) {
        std::vector<unsigned> gammas;
        bool ok = true;
        for (auto n : c.other_degrees) {
            unsigned total = c.n1 * (beta + 1);
            if (total % n != 0) {
                ok = false;
                break;
            }
            gammas.push_back(total / n);
        }
        if (!ok) continue;
        auto matched = with_bases(ParametricReading::ValuationMatched, beta, gammas, leading_bases);
        if (detail::check_construction(eq, matched)) return matched;
    }
    throw ConstructionError("parametric family: no exponent assignment verifies");
}

inline SolutionFamily parametric_family(const DiagonalEquation& eq,
                                        std::optional<std::string> leading_var = std::nullopt) {
    auto c = parametric_construction(eq, std::move(leading_var));
    auto index = std::make_shared<std::uint64_t>(0);
    std::string description = "parametric (" + std::string(to_string(c.reading)) + "): t=" + c.t.str() +
                              ", r=" + c.r.str() + ", s=" + c.s.str();
    return SolutionFamily(FamilyKind::Parametric, eq, description,
                          [c, eq, index]() { return c.member(eq, (*index)++); });
}

inline DiagonalEquation pell_equation(const BigInt& d) {
    return DiagonalEquation({Term(1, "x", 2), Term(-d, "y", 2)}, -1);
}

// x^2 - D y^2 = 1 from a fundamental solution, composing with the unit:
// (x, y) -> (x1 x + D y1 y, y1 x + x1 y).
inline SolutionFamily pell_family(const BigInt& d, const BigInt& x1, const BigInt& y1) {
    if (d < 2 || is_perfect_square(d)) throw Refusal("pell: D must be >= 2 and not a perfect square");
    if (x1 < 1 || y1 < 1 || x1 * x1 - d * y1 * y1 != 1)
        throw std::domain_error("pell: (" + x1.str() + ", " + y1.str() + ") is not a positive solution of x^2 - " +
                                d.str() + " y^2 = 1");
    auto state = std::make_shared<std::pair<BigInt, BigInt>>(x1, y1);
    return SolutionFamily(FamilyKind::Pell, pell_equation(d), "pell D=" + d.str(), [state, d, x1, y1]() {
        auto current = *state;
        auto& [x, y] = *state;
        BigInt nx = x1 * x + d * y1 * y;
        BigInt ny = y1 * x + x1 * y;
        x = std::move(nx);
        y = std::move(ny);
        return SolutionFamily::Member{current.first, current.second};
    });
}

inline std::vector<SolutionFamily::Member> pell_solutions(const BigInt& d, const BigInt& x1, const BigInt& y1,
                                                          const BigInt& n) {
    return pell_family(d, x1, y1).members_within(n);
}

// Scaling requires a form: no constant term and one common degree.
inline void require_form(const DiagonalEquation& eq) {
    if (eq.constant() != 0) throw Refusal("scaling: equation has a constant term");
    for (const auto& t : eq.terms())
        if (t.exp != eq.terms().front().exp) throw Refusal("scaling: terms have different degrees");
}

// m * base for m = 1, -1, 2, -2, ...
inline SolutionFamily scaling_family(const DiagonalEquation& eq, const std::vector<BigInt>& base) {
    require_form(eq);
    if (std::all_of(base.begin(), base.end(), [](const BigInt& v) { return v == 0; }))
        throw std::domain_error("scaling: base solution is trivial");
    if (evaluate(eq, make_assignment(eq, base)) != 0) throw std::domain_error("scaling: base is not a solution");
    auto m = std::make_shared<BigInt>(1);
    return SolutionFamily(FamilyKind::Scaling, eq, "scaling", [m, base]() {
        SolutionFamily::Member out;
        for (const auto& v : base) out.push_back(*m * v);
        *m = *m > 0 ? BigInt(-*m) : BigInt(-*m + 1);
        return out;
    });
}

inline std::vector<SolutionFamily::Member> scale_solution(const DiagonalEquation& eq,
                                                          const std::vector<BigInt>& base, const BigInt& n) {
    return scaling_family(eq, base).members_within(n);
}

// Integer roots of c x^n + c0 = 0, ascending.
inline std::vector<BigInt> solve_univariate(const BigInt& c, unsigned n, const BigInt& c0) {
    if (c == 0) throw std::domain_error("solve_univariate: leading coefficient is zero");
    if (n == 0) throw std::domain_error("solve_univariate: degree must be >= 1");
    if (c0 % c != 0) return {};
    BigInt v = -c0 / c;
    auto root = exact_root(v, n);
    if (!root) return {};
    if (*root == 0) return {0};
    if (n % 2 == 0) return {-*root, *root};
    return {*root};
}

// x_1^a_1 - x_1^b_1 + ... + x_s^a_s - x_s^b_s = 0 with a_i > b_i has the
// single natural solution (1, ..., 1): any x_i > 1 makes its pair positive.
// Certified by substitution and by an exact count over [1, 10]^s.
inline bool forced_unique(const DiagonalEquation& eq, const Budget& budget = {}) {
    if (eq.constant() != 0) throw Refusal("forced_unique: equation has a constant term");
    for (const auto& var : eq.variables()) {
        auto terms = eq.terms_of(var);
        if (terms.size() != 2) throw Refusal("forced_unique: variable " + var + " must appear in exactly two terms");
        // terms are degree-descending
        if (terms[0].coeff != 1 || terms[1].coeff != -1)
            throw Refusal("forced_unique: " + var + " must appear as +" + var + "^a - " + var + "^b with a > b");
    }
    std::vector<BigInt> ones(eq.variable_count(), 1);
    if (evaluate(eq, make_assignment(eq, ones)) != 0) return false;
    return count_auto(eq, Domain::natural(10), budget).count == 1;
}

}  // namespace diophantine
