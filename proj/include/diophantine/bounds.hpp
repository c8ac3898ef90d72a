#pragma once

// Symbolic exponent bounds for solution counts, in exact rational arithmetic,
// and an audit that checks claimed bounds against exact counts.
//
// Exponents e mean "count << N^e" (Upper) or "count >> N^e" (Lower). The
// epsilon of circle-method bounds is a flag, never a number; empirical
// comparisons absorb it in a fixed slope tolerance.

#include "count.hpp"
#include "equation.hpp"
#include "growth.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diophantine {

enum class Direction { Upper, Lower };

enum class Regime {
    Hua,
    LargeS,
    BinarySplit,
    Trivial,
    MixedDegree,
    Composition,
    ThueScaling,
    LogFamily,
    ExplicitVar,
    Sphere,
    ThreeCubes,
};

inline std::string_view to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Hua: return "Hua";
        case Regime::LargeS: return "LargeS";
        case Regime::BinarySplit: return "BinarySplit";
        case Regime::Trivial: return "Trivial";
        case Regime::MixedDegree: return "MixedDegree";
        case Regime::Composition: return "Composition";
        case Regime::ThueScaling: return "ThueScaling";
        case Regime::LogFamily: return "LogFamily";
        case Regime::ExplicitVar: return "ExplicitVar";
        case Regime::Sphere: return "Sphere";
        case Regime::ThreeCubes: return "ThreeCubes";
    }
    return "?";
}

struct Precondition {
    std::string condition;
    bool satisfied = false;
};

struct BoundReport {
    Rational exponent = 0;
    bool has_epsilon = false;
    bool log_factor = false;  // extra ln N factor on top of N^exponent
    Direction direction = Direction::Upper;
    Regime regime = Regime::Trivial;
    std::vector<Precondition> preconditions;
    std::vector<std::string> notes;
    // Concrete lower-bound values at specific N, checked by the audit.
    std::vector<std::pair<std::uint64_t, BigInt>> values;

    // Advisory when any precondition failed.
    bool authoritative() const {
        return std::all_of(preconditions.begin(), preconditions.end(),
                           [](const Precondition& p) { return p.satisfied; });
    }
    bool advisory() const { return !authoritative(); }

    std::optional<BigInt> value_at(std::uint64_t n) const {
        for (const auto& [vn, v] : values)
            if (vn == n) return v;
        return std::nullopt;
    }

    // "N^{33/4+eps}" style.
    std::string describe() const {
        std::string s = "N^" + to_string(exponent);
        if (has_epsilon) s += "+eps";
        if (log_factor) s += " ln N";
        return s;
    }
};

namespace detail {

inline BoundReport make_report(Direction d, Regime r, Rational exponent, bool eps) {
    BoundReport b;
    b.direction = d;
    b.regime = r;
    b.exponent = std::move(exponent);
    b.has_epsilon = eps;
    return b;
}

inline std::string fmt_cond(const std::string& what, bool ok) { return what + (ok ? ": holds" : ": fails"); }

// Exponents of the binary expansion, highest first.
inline std::vector<unsigned> binary_digits(std::uint64_t v) {
    std::vector<unsigned> out;
    for (int b = 63; b >= 0; --b)
        if ((v >> b) & 1u) out.push_back(static_cast<unsigned>(b));
    return out;
}

}  // namespace detail

// Moment of order 2^j of the degree-k Weyl sum (2^(j-1) pairs): N^(2^j - j + eps),
// licensed for 1 <= j <= k.
inline BoundReport hua_exponent(unsigned j, unsigned k) {
    if (j < 1 || j > 62) throw std::domain_error("hua_exponent: j must be in [1, 62]");
    auto r = detail::make_report(Direction::Upper, Regime::Hua, Rational((BigInt(1) << j) - j), true);
    r.preconditions.push_back(
        {"1 <= j <= k (j=" + std::to_string(j) + ", k=" + std::to_string(k) + ")", j <= k});
    return r;
}

// twoM = 2^j1 + ... + 2^jt (j1 > ... > jt):
//   twoM - Σ_{i<t} (j_i + i)/2^i - (j_t + t)/2^(t-1), licensed when j1 <= k.
inline BoundReport binary_split_exponent(std::uint64_t two_m, unsigned k) {
    if (two_m < 2 || two_m % 2 != 0) throw std::invalid_argument("binary_split_exponent: moment must be even and >= 2");
    auto digits = detail::binary_digits(two_m);
    std::uint64_t s = two_m / 2;
    bool header = k >= 1 && (s <= (std::uint64_t{1} << std::min(k - 1, 62u)));
    std::string header_note = detail::fmt_cond("k >= 1 + log2(s) with s=" + std::to_string(s), header);
    if (digits.size() == 1) {
        auto r = hua_exponent(digits[0], k);
        r.notes.push_back("single binary digit: Hua bound");
        r.notes.push_back(header_note);
        return r;
    }
    Rational e = two_m;
    std::size_t t = digits.size();
    for (std::size_t i = 1; i < t; ++i) e -= Rational(digits[i - 1] + i, BigInt(1) << i);
    e -= Rational(digits[t - 1] + t, BigInt(1) << (t - 1));
    auto r = detail::make_report(Direction::Upper, Regime::BinarySplit, e, true);
    r.preconditions.push_back(
        {"j1 <= k (j1=" + std::to_string(digits[0]) + ", k=" + std::to_string(k) + ")", digits[0] <= k});
    r.notes.push_back(header_note);
    return r;
}

// Least licensed exponent for the moment of order twoM (twoM/2 pairs of
// degree k): Hua, BinarySplit, LargeS and the always-valid trivial bound.
// Ties resolve in that order.
inline BoundReport even_moment_exponent(std::uint64_t two_m, unsigned k) {
    if (two_m < 2 || two_m % 2 != 0) throw std::invalid_argument("even_moment_exponent: moment must be even and >= 2");
    if (k < 1) throw std::invalid_argument("even_moment_exponent: degree must be >= 1");
    std::vector<BoundReport> candidates;
    auto digits = detail::binary_digits(two_m);
    if (digits.size() == 1) {
        auto h = hua_exponent(digits[0], k);
        if (h.authoritative()) candidates.push_back(std::move(h));
    } else {
        auto b = binary_split_exponent(two_m, k);
        if (b.authoritative()) candidates.push_back(std::move(b));
    }
    std::uint64_t s = two_m / 2;
    if (k - 1 < 63 && s > (std::uint64_t{1} << (k - 1))) {
        auto l = detail::make_report(Direction::Upper, Regime::LargeS, Rational(two_m) - k, true);
        l.preconditions.push_back({"s > 2^(k-1) (s=" + std::to_string(s) + ", k=" + std::to_string(k) + ")", true});
        candidates.push_back(std::move(l));
    }
    candidates.push_back(detail::make_report(Direction::Upper, Regime::Trivial, Rational(two_m), false));

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].exponent < candidates[best].exponent) best = i;
    BoundReport r = candidates[best];
    for (const auto& c : candidates)
        r.notes.push_back(std::string(to_string(c.regime)) + " gives " + to_string(c.exponent));
    return r;
}

struct DegreePairs {
    unsigned degree = 1;
    std::size_t pairs = 1;
    bool operator==(const DegreePairs&) const = default;
};

struct MixedDegreeResult {
    BoundReport bound;
    std::vector<DegreePairs> best_ordering;
    Rational recommended_exponent;          // pairs-descending ordering
    bool recommended_attains_minimum = false;
};

namespace detail {

// Hölder/Cauchy-Schwarz splitting for one ordering: position l (1-based)
// carries weight 2^-min(l, L-1) and moment 2 * s_l * 2^min(l, L-1).
inline Rational mixed_ordering_exponent(const std::vector<DegreePairs>& order, bool& eps,
                                        std::vector<std::string>* notes) {
    std::size_t n = order.size();
    Rational total = 0;
    for (std::size_t l = 1; l <= n; ++l) {
        std::size_t level = std::min(l, n - 1);
        std::uint64_t scale = std::uint64_t{1} << level;
        const auto& b = order[l - 1];
        auto inner = even_moment_exponent(2 * b.pairs * scale, b.degree);
        eps = eps || inner.has_epsilon;
        Rational part = inner.exponent / scale;
        total += part;
        if (notes)
            notes->push_back("k=" + std::to_string(b.degree) + " pairs=" + std::to_string(b.pairs) + ": weight 1/" +
                             std::to_string(scale) + ", moment " + std::to_string(2 * b.pairs * scale) + " -> " +
                             to_string(inner.exponent) + " (" + std::string(to_string(inner.regime)) +
                             "), contributes " + to_string(part));
    }
    return total;
}

}  // namespace detail

inline MixedDegreeResult mixed_degree_upper(const std::vector<DegreePairs>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("mixed_degree_upper: no blocks");
    if (blocks.size() > 8) throw Refusal("mixed_degree_upper: more than 8 blocks (ordering sweep refused)");
    for (const auto& b : blocks)
        if (b.pairs < 1 || b.degree < 1) throw std::invalid_argument("mixed_degree_upper: blocks need k >= 1, s >= 1");

    std::vector<std::size_t> idx(blocks.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::optional<Rational> best;
    std::vector<DegreePairs> best_order;
    bool eps = false;
    do {
        std::vector<DegreePairs> order;
        for (auto i : idx) order.push_back(blocks[i]);
        bool e = false;
        Rational v = detail::mixed_ordering_exponent(order, e, nullptr);
        if (!best || v < *best) {
            best = v;
            best_order = order;
            eps = e;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));

    std::vector<DegreePairs> recommended = blocks;
    std::stable_sort(recommended.begin(), recommended.end(),
                     [](const DegreePairs& a, const DegreePairs& b) { return a.pairs > b.pairs; });
    bool rec_eps = false;
    Rational rec = detail::mixed_ordering_exponent(recommended, rec_eps, nullptr);

    MixedDegreeResult out;
    out.bound = detail::make_report(Direction::Upper, blocks.size() == 1 ? Regime::Trivial : Regime::MixedDegree,
                                    *best, eps);
    if (blocks.size() == 1) out.bound = even_moment_exponent(2 * blocks[0].pairs, blocks[0].degree);
    bool unused = false;
    detail::mixed_ordering_exponent(best_order, unused, &out.bound.notes);
    out.best_ordering = best_order;
    out.recommended_exponent = rec;
    out.recommended_attains_minimum = rec == *best;
    out.bound.notes.push_back(std::string("pairs-descending ordering gives ") + to_string(rec) +
                              (out.recommended_attains_minimum ? " (attains the minimum)" : " (not minimal)"));
    return out;
}

// Product of per-factor lower bounds for a variable-disjoint split.
inline BigInt compose_lower(std::span<const BigInt> factors) {
    if (factors.empty()) throw std::domain_error("compose_lower: no factors");
    BigInt p = 1;
    for (const auto& f : factors) p *= f;
    return p;
}

struct CompositionFactor {
    std::string description;
    std::vector<std::string> variables;
    BigInt lower;
};

struct CompositionPlan {
    std::vector<CompositionFactor> factors;

    BigInt combined() const {
        std::vector<BigInt> v;
        for (const auto& f : factors) v.push_back(f.lower);
        return compose_lower(v);
    }

    // Factors cover every variable of eq exactly once.
    bool partitions(const DiagonalEquation& eq) const {
        std::vector<std::string> all;
        for (const auto& f : factors) all.insert(all.end(), f.variables.begin(), f.variables.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
        auto vars = eq.variables();
        std::sort(vars.begin(), vars.end());
        return all == vars;
    }
};

// floor((2N+1)/M): scaled copies m * x0 of a nontrivial homogeneous solution
// with max |coordinate| M that fit in [-N, N].
inline BigInt thue_scaling_lower(const BigInt& max_coord, std::uint64_t n) {
    if (max_coord <= 0) throw std::domain_error("thue_scaling_lower: max coordinate must be positive");
    return (BigInt(2) * n + 1) / max_coord;
}

// max(0, floor((ln N - d ln a1) / ln t)), evaluated exactly as the largest m
// with a1^d * t^m <= N.
inline BigInt log_family_lower(const BigInt& a1, const BigInt& t, unsigned degree_product_minus_one,
                               const BigInt& n) {
    if (a1 < 1) throw std::domain_error("log_family_lower: a1 must be >= 1");
    if (t <= 1) throw std::domain_error("log_family_lower: t must be >= 2");
    BigInt p = ipow(a1, degree_product_minus_one);
    if (p > n) return 0;
    BigInt m = 0;
    while (p * t <= n) {
        p *= t;
        ++m;
    }
    return m;
}

// x1 = Σ a x_i^n + ... with positive coefficients: count << N^((k-1)/n).
inline BoundReport explicit_var_upper(unsigned k, unsigned n) {
    if (k < 2 || n < 1) throw std::invalid_argument("explicit_var_upper needs k >= 2, n >= 1");
    auto r = detail::make_report(Direction::Upper, Regime::ExplicitVar, Rational(k - 1, n), false);
    r.preconditions.push_back({"positive coefficients on the explicit side", true});
    return r;
}

// Main term pi N^(3/2) / 6 for natural triples with x^2 + y^2 + z^2 <= N.
inline double sphere_estimate(std::uint64_t n) {
    if (n < 1) throw std::domain_error("sphere_estimate: N must be >= 1");
    return std::numbers::pi * std::pow(static_cast<double>(n), 1.5) / 6.0;
}

struct AdvisoryCount {
    BigInt value;
    std::string rule;
    std::string caveat;
    bool advisory = true;
};

// Integer count from a natural count by sign symmetry. Always advisory:
// solutions with zero coordinates and independent sign flips are not
// accounted for, so an exact integer count is authoritative.
inline AdvisoryCount natural_to_integer(const StructureDescriptor& s, const BigInt& natural_count) {
    const std::string caveat =
        "ignores zero coordinates and per-variable sign flips; exact integer counting is authoritative";
    if (s.all_exponents_even) return {2 * natural_count, "doubling (all exponents even)", caveat};
    bool paired = std::all_of(s.blocks.begin(), s.blocks.end(), [](const DegreeBlock& b) { return b.terms % 2 == 0; });
    if (s.homogeneous && s.all_exponents_odd && s.all_unit_coefficients() && paired)
        return {natural_count, "equality (odd degrees, unit coefficients)", caveat};
    throw Refusal("natural_to_integer: needs all exponents even, or odd degrees with unit coefficients in pairs");
}

struct SolvabilityReport {
    bool guaranteed = false;
    std::string binding_condition;
    BigInt required_s = 0;                      // max(2^k + 1, 4k^2 - 4k + 1)
    std::optional<unsigned> published_threshold;  // literal values quoted for k = 2, 3
    std::vector<std::string> annotations;
};

// Hypotheses for nontrivial integer solutions of a_1 x_1^k + ... + a_s x_s^k = 0.
// Vinogradov's s0 has no computable value here; s >= 2^k + 1 stands in for
// s >= min(s0, 2^k + 1), which it implies.
inline SolvabilityReport solvability_check(unsigned k, std::uint64_t s, bool signs_mixed) {
    SolvabilityReport r;
    r.annotations.push_back("s0 from Vinogradov's theorem is not evaluated; s >= 2^k + 1 used in its place");
    if (k < 2) {
        r.binding_condition = "k >= 2";
        return r;
    }
    BigInt power = (BigInt(1) << k) + 1;
    BigInt quad = BigInt(4) * k * k - BigInt(4) * k + 1;
    r.required_s = std::max(power, quad);
    if (k == 2) {
        r.published_threshold = 15;
        r.annotations.push_back("published threshold for k=2 is s >= 15; the inequalities give 9");
    } else if (k == 3) {
        r.published_threshold = 34;
        r.annotations.push_back("published threshold for k=3 is s >= 34; the inequalities give 25");
    }
    if (k >= 8) r.annotations.push_back("k >= 8: 2^k + 1 exceeds 4k^2 - 4k + 1, so s >= 2^k + 1 suffices");
    if (k % 2 == 0 && !signs_mixed) {
        r.binding_condition = "coefficients of mixed sign (k even)";
        return r;
    }
    std::string power_cond = "s >= 2^k + 1 = " + power.str();
    std::string quad_cond = "s >= 4k^2 - 4k + 1 = " + quad.str();
    if (s < power && s < quad) {
        r.binding_condition = power_cond + " and " + quad_cond;
    } else if (s < power) {
        r.binding_condition = power_cond;
    } else if (s < quad) {
        r.binding_condition = quad_cond;
    } else {
        r.guaranteed = true;
        r.binding_condition = power >= quad ? power_cond : quad_cond;
    }
    return r;
}

enum class AuditSeverity { HardFailure, Warning, Note };

inline std::string_view to_string(AuditSeverity s) {
    switch (s) {
        case AuditSeverity::HardFailure: return "hard-failure";
        case AuditSeverity::Warning: return "warning";
        case AuditSeverity::Note: return "note";
    }
    return "?";
}

struct AuditFlag {
    AuditSeverity severity = AuditSeverity::Note;
    std::string message;
    std::optional<std::uint64_t> n;
};

struct AuditReport {
    std::vector<SweepRow> rows;
    std::optional<FitResult> fit;
    std::vector<AuditFlag> flags;

    bool hard_failure() const {
        return std::any_of(flags.begin(), flags.end(),
                           [](const AuditFlag& f) { return f.severity == AuditSeverity::HardFailure; });
    }
    bool has_warning() const {
        return std::any_of(flags.begin(), flags.end(),
                           [](const AuditFlag& f) { return f.severity == AuditSeverity::Warning; });
    }
};

// Fitted slope may exceed an upper exponent by this much before a warning.
inline constexpr double slope_tolerance = 0.3;

// Checks claimed bounds against given counts:
//   count below an authoritative lower value  -> hard failure
//   count below an advisory lower value       -> warning
//   fitted slope > upper exponent + tolerance -> warning
inline AuditReport audit_counts(std::vector<SweepRow> rows, std::span<const BoundReport> claimed) {
    AuditReport a;
    std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) { return x.n < y.n; });
    a.rows = std::move(rows);
    try {
        a.fit = fit_exponent(a.rows);
    } catch (const std::invalid_argument& e) {
        a.flags.push_back({AuditSeverity::Note, std::string("no slope fit: ") + e.what(), std::nullopt});
    }
    for (const auto& c : claimed) {
        std::string label = std::string(to_string(c.regime)) + " " + std::string(to_string(c.direction)) + " " +
                            c.describe();
        if (c.direction == Direction::Upper) {
            if (!a.fit) continue;
            double limit = to_double(c.exponent) + slope_tolerance;
            if (a.fit->slope > limit)
                a.flags.push_back({AuditSeverity::Warning,
                                   "empirically questionable: fitted slope " + std::to_string(a.fit->slope) +
                                       " exceeds claimed " + label + " by more than " +
                                       std::to_string(slope_tolerance),
                                   std::nullopt});
        } else {
            for (const auto& row : a.rows) {
                if (!row.count) continue;
                auto v = c.value_at(row.n);
                if (!v || *row.count >= *v) continue;
                a.flags.push_back({c.authoritative() ? AuditSeverity::HardFailure : AuditSeverity::Warning,
                                   "exact count " + row.count->str() + " is below claimed " + label + " value " +
                                       v->str() + (c.authoritative() ? "" : " (advisory bound)"),
                                   row.n});
            }
        }
    }
    return a;
}

// For integer rows whose structure admits a natural->integer rule, notes
// where the advisory transform differs from the exact integer count.
inline void note_sign_rule_discrepancies(const DiagonalEquation& eq, AuditReport& report,
                                         const Budget& budget = {}) {
    auto structure = classify(eq);
    for (const auto& row : report.rows) {
        if (!row.count) continue;
        AdvisoryCount advised;
        try {
            auto natural = count_auto(eq, Domain::natural(row.n), budget).count;
            advised = natural_to_integer(structure, natural);
        } catch (const Refusal&) {
            return;
        } catch (const BudgetExceeded&) {
            continue;
        }
        if (advised.value != *row.count)
            report.flags.push_back({AuditSeverity::Note,
                                    "natural->integer " + advised.rule + " gives " + advised.value.str() +
                                        " but the exact integer count is " + row.count->str(),
                                    row.n});
    }
}

// Exact counts for each domain (refusals propagate), then audit_counts and,
// for integer domains, the natural->integer comparison.
inline AuditReport audit(const DiagonalEquation& eq, std::vector<Domain> domains,
                         std::span<const BoundReport> claimed, const Budget& budget = {}) {
    if (domains.empty()) throw std::invalid_argument("audit: no domains");
    for (const auto& d : domains)
        if (d.kind != domains.front().kind) throw std::invalid_argument("audit: domains must share one kind");
    std::sort(domains.begin(), domains.end(), [](const Domain& a, const Domain& b) { return a.bound < b.bound; });
    std::vector<SweepRow> rows;
    for (const auto& d : domains) {
        auto c = count_auto(eq, d, budget);
        rows.push_back({d.bound, c.count, std::string(to_string(c.method)), c.elapsed.count(), {}});
    }
    auto report = audit_counts(std::move(rows), claimed);
    if (domains.front().kind == DomainKind::SymmetricInteger) note_sign_rule_discrepancies(eq, report, budget);
    return report;
}

}  // namespace diophantine
