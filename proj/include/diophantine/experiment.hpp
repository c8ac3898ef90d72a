#pragma once

// Experiment harness: N sweeps, CSV/JSON tables, the bounds that apply to an
// equation, and the combined report (classification, bounds, sweep, fit,
// audit flags).

#include "bounds.hpp"
#include "count.hpp"
#include "equation.hpp"
#include "families.hpp"
#include "growth.hpp"
#include "parser.hpp"

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace diophantine {

// One row per N with the cheapest licensed method; refusals are recorded in
// the row and the sweep continues.
inline std::vector<SweepRow> sweep(const DiagonalEquation& eq, DomainKind kind, std::span<const std::uint64_t> ns,
                                   const Budget& budget = {}) {
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("sweep: N values must be strictly increasing");
    std::vector<SweepRow> rows;
    for (auto n : ns) {
        SweepRow row;
        row.n = n;
        try {
            auto c = count_auto(eq, Domain(kind, n), budget);
            row.count = c.count;
            row.method = to_string(c.method);
            row.elapsed_ms = c.elapsed.count();
        } catch (const BudgetExceeded& e) {
            row.method = "refused";
            row.refusal = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

// Header N,count,method,elapsed_ms; counts as decimal strings; LF endings.
inline std::string to_csv(std::span<const SweepRow> rows) {
    std::string out = "N,count,method,elapsed_ms\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + (r.count ? r.count->str() : "") + "," + r.method + "," +
               format_ms(r.elapsed_ms) + "\n";
    return out;
}

inline nlohmann::json rows_to_json(std::span<const SweepRow> rows) {
    auto out = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j{{"N", r.n}, {"method", r.method}, {"elapsed_ms", r.elapsed_ms}};
        j["count"] = r.count ? nlohmann::json(r.count->str()) : nlohmann::json(nullptr);
        if (!r.refusal.empty()) j["refusal"] = r.refusal;
        out.push_back(std::move(j));
    }
    return out;
}

inline nlohmann::json to_json_value(const BoundReport& b) {
    nlohmann::json pre = nlohmann::json::array();
    for (const auto& p : b.preconditions) pre.push_back({{"condition", p.condition}, {"satisfied", p.satisfied}});
    nlohmann::json values = nlohmann::json::array();
    for (const auto& [n, v] : b.values) values.push_back({{"N", n}, {"value", v.str()}});
    return {{"direction", to_string(b.direction)},
            {"regime", to_string(b.regime)},
            {"exponent", to_string(b.exponent)},
            {"exponent_value", to_double(b.exponent)},
            {"epsilon", b.has_epsilon},
            {"log_factor", b.log_factor},
            {"authoritative", b.authoritative()},
            {"describe", b.describe()},
            {"preconditions", pre},
            {"notes", b.notes},
            {"values", values}};
}

inline nlohmann::json to_json_value(const StructureDescriptor& s) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : s.blocks)
        blocks.push_back({{"degree", b.degree},
                          {"terms", b.terms},
                          {"positive", b.positive},
                          {"negative", b.negative},
                          {"unit_coefficients", b.unit_coefficients}});
    return {{"blocks", blocks},
            {"homogeneous", s.homogeneous},
            {"all_exponents_even", s.all_exponents_even},
            {"all_exponents_odd", s.all_exponents_odd},
            {"repeated_variables", s.repeated_variables}};
}

// f = f1 + f2 over disjoint variables: f1 a form with a nontrivial integer
// solution x0 (scaled copies give floor((2N+1)/max|x0|) solutions), f2 the
// rest with the constant, counted exactly.
struct ThueSplit {
    DiagonalEquation homogeneous_part;
    DiagonalEquation remainder;
    std::vector<BigInt> base;  // nontrivial solution of homogeneous_part
    BigInt max_coord;
    std::string remainder_growth;  // "1", "ln N" or "?"
};

namespace detail {

inline std::optional<DiagonalEquation> sub_equation(const DiagonalEquation& eq, const std::vector<std::string>& vars,
                                                    bool with_constant) {
    std::vector<Term> terms;
    for (const auto& t : eq.terms())
        if (std::find(vars.begin(), vars.end(), t.var) != vars.end()) terms.push_back(t);
    if (terms.empty()) return std::nullopt;
    return DiagonalEquation(std::move(terms), with_constant ? eq.constant() : BigInt(0));
}

// Smallest-box nontrivial solution of a form, searched in [-B, B]^v.
inline std::optional<std::vector<BigInt>> small_nontrivial_solution(const DiagonalEquation& form) {
    auto v = form.variable_count();
    for (int bound = 1; bound <= 4; ++bound) {
        double cells = std::pow(2.0 * bound + 1, static_cast<double>(v));
        if (cells > 2e5) break;
        std::vector<BigInt> x(v, -bound);
        while (true) {
            bool nonzero = std::any_of(x.begin(), x.end(), [](const BigInt& c) { return c != 0; });
            BigInt top = 0;
            for (const auto& c : x) top = std::max(top, BigInt(abs(c)));
            if (nonzero && top == bound && evaluate(form, make_assignment(form, x)) == 0) return x;
            std::size_t i = 0;
            while (i < v && x[i] == bound) x[i++] = -bound;
            if (i == v) break;
            ++x[i];
        }
    }
    return std::nullopt;
}

inline std::string remainder_growth(const DiagonalEquation& f2) {
    if (f2.variable_count() == 1) return "1";
    if (f2.variable_count() == 2 && f2.terms().size() == 2 && f2.constant() == -1 && f2.terms()[0].exp == 2 &&
        f2.terms()[1].exp == 2) {
        const auto& a = f2.terms()[0];
        const auto& b = f2.terms()[1];
        const Term& pos = a.coeff > 0 ? a : b;
        const Term& neg = a.coeff > 0 ? b : a;
        if (pos.coeff == 1 && neg.coeff < -1 && !is_perfect_square(-neg.coeff)) return "ln N";
    }
    return "?";
}

}  // namespace detail

inline std::optional<ThueSplit> thue_split(const DiagonalEquation& eq) {
    if (eq.constant() == 0 || eq.variable_count() < 2 || eq.variable_count() != eq.terms().size())
        return std::nullopt;
    std::vector<std::vector<std::string>> candidates;  // remainder variable sets
    auto structure = classify(eq);
    if (structure.blocks.size() >= 2) {
        std::vector<std::string> last;
        for (const auto& t : eq.terms())
            if (t.exp == structure.blocks.back().degree) last.push_back(t.var);
        candidates.push_back(last);
    }
    for (auto it = eq.variables().rbegin(); it != eq.variables().rend(); ++it) candidates.push_back({*it});

    for (const auto& rest : candidates) {
        std::vector<std::string> head;
        for (const auto& v : eq.variables())
            if (std::find(rest.begin(), rest.end(), v) == rest.end()) head.push_back(v);
        auto f1 = detail::sub_equation(eq, head, false);
        auto f2 = detail::sub_equation(eq, rest, true);
        if (!f1 || !f2) continue;
        try {
            require_form(*f1);
        } catch (const Refusal&) {
            continue;
        }
        auto base = detail::small_nontrivial_solution(*f1);
        if (!base) continue;
        return ThueSplit{*f1, *f2, *base, SolutionFamily::max_abs(*base), detail::remainder_growth(*f2)};
    }
    return std::nullopt;
}

struct ApplicableBounds {
    std::vector<BoundReport> bounds;
    std::vector<std::string> notes;
    std::optional<std::string> lower_growth;
};

// Every bound in the catalogue whose shape matches eq, with lower-bound
// values evaluated at each N.
inline ApplicableBounds applicable_bounds(const DiagonalEquation& eq, DomainKind kind,
                                          std::span<const std::uint64_t> ns, const Budget& budget = {}) {
    ApplicableBounds out;
    auto structure = classify(eq);
    auto v = eq.variable_count();

    {
        bool single = false;
        for (const auto& var : eq.variables()) single = single || eq.terms_of(var).size() == 1;
        auto trivial = detail::make_report(Direction::Upper, Regime::Trivial, Rational(single ? v - 1 : v), false);
        trivial.notes.push_back(single ? "one variable is determined up to finitely many roots by the others"
                                       : "box volume");
        out.bounds.push_back(std::move(trivial));
    }

    if (kind == DomainKind::Natural && is_symmetric_pair_form(eq)) {
        std::vector<DegreePairs> blocks;
        for (const auto& b : structure.blocks) blocks.push_back({b.degree, b.pairs()});
        if (blocks.size() <= 8) {
            auto mixed = mixed_degree_upper(blocks);
            out.bounds.push_back(mixed.bound);
        }
        auto lower = detail::make_report(Direction::Lower, Regime::Composition, 0, false);
        std::size_t total_pairs = 0;
        for (const auto& b : blocks) total_pairs += b.pairs;
        lower.exponent = Rational(total_pairs);
        lower.notes.push_back("product over degree blocks of permutation-matching counts");
        for (auto n : ns) {
            CompositionPlan plan;
            for (const auto& b : blocks)
                plan.factors.push_back({"degree " + std::to_string(b.degree) + ", " + std::to_string(b.pairs) +
                                            " pairs",
                                        {},
                                        perm_matching_count(b.pairs, n)});
            lower.values.emplace_back(n, plan.combined());
        }
        out.bounds.push_back(std::move(lower));
        out.lower_growth = "N^" + std::to_string(total_pairs);
    }

    // x1 = Σ a x_i^n (+ lower powers), positive coefficients.
    if (kind == DomainKind::Natural && structure.homogeneous && v >= 2) {
        for (const auto& var : eq.variables()) {
            auto own = eq.terms_of(var);
            if (own.size() != 1 || own[0].exp != 1 || abs(own[0].coeff) != 1) continue;
            bool lead_positive = own[0].coeff > 0;
            bool ok = true;
            std::optional<unsigned> common;
            for (const auto& other : eq.variables()) {
                if (other == var) continue;
                unsigned deg = 0;
                for (const auto& t : eq.terms_of(other)) {
                    if ((t.coeff > 0) == lead_positive) ok = false;
                    deg = std::max(deg, t.exp);
                }
                if (common && *common != deg) ok = false;
                common = deg;
            }
            if (!ok || !common) continue;
            out.bounds.push_back(explicit_var_upper(static_cast<unsigned>(v), *common));
            if (v == 4 && *common == 2 && !structure.repeated_variables) {
                auto sphere = detail::make_report(Direction::Upper, Regime::Sphere, Rational(3, 2), false);
                for (auto n : ns) sphere.notes.push_back("N=" + std::to_string(n) + ": main term " +
                                                         std::to_string(sphere_estimate(n)));
                out.bounds.push_back(std::move(sphere));
            }
            break;
        }
    }

    if (kind == DomainKind::Natural) {
        try {
            auto c = parametric_construction(eq);
            unsigned d = c.q.convert_to<unsigned>() - 1;
            auto formula = detail::make_report(Direction::Lower, Regime::LogFamily, 0, false);
            formula.log_factor = true;
            formula.preconditions.push_back({"a1 > 1 (a1=" + c.a1.str() + ")", c.a1 > 1});
            BigInt others = 0;
            for (const auto& a : c.other_coeffs) others += a;
            formula.preconditions.push_back({"a2 + ... + ak < -1", others < -1});
            formula.notes.push_back("(ln N - " + std::to_string(d) + " ln " + c.a1.str() + ") / ln " + c.t.str());
            for (auto n : ns) formula.values.emplace_back(n, log_family_lower(c.a1, c.t, d, n));
            out.bounds.push_back(std::move(formula));

            auto members = detail::make_report(Direction::Lower, Regime::LogFamily, 0, false);
            members.log_factor = true;
            members.notes.push_back("verified family members inside the box (" +
                                    std::string(to_string(c.reading)) + " construction)");
            for (auto n : ns)
                members.values.emplace_back(n, BigInt(parametric_family(eq).members_within(n).size()));
            out.bounds.push_back(std::move(members));
            if (!out.lower_growth) out.lower_growth = "ln N";
        } catch (const Refusal&) {
        } catch (const ConstructionError& e) {
            out.notes.push_back(e.what());
        }
    }

    if (kind == DomainKind::SymmetricInteger && !structure.homogeneous && eq.terms().size() == 3 &&
        !structure.repeated_variables && structure.blocks.size() == 1 && structure.blocks[0].degree == 3 &&
        structure.blocks[0].unit_coefficients &&
        (structure.blocks[0].positive == 3 || structure.blocks[0].negative == 3)) {
        auto cubes = detail::make_report(Direction::Upper, Regime::ThreeCubes, 1, true);
        cubes.notes.push_back("sums of three cubes equal to a fixed nonzero value");
        out.bounds.push_back(std::move(cubes));
    }

    if (kind == DomainKind::SymmetricInteger) {
        if (auto split = thue_split(eq)) {
            bool composed = split->remainder_growth != "1";
            auto lower = detail::make_report(Direction::Lower, composed ? Regime::Composition : Regime::ThueScaling,
                                             1, false);
            lower.log_factor = split->remainder_growth == "ln N";
            std::string base;
            for (const auto& x : split->base) base += (base.empty() ? "" : ",") + x.str();
            lower.preconditions.push_back({"nontrivial solution (" + base + ") of " + render(split->homogeneous_part),
                                           true});
            lower.notes.push_back("floor((2N+1)/" + split->max_coord.str() + ") scaled solutions times exact count of " +
                                  render(split->remainder));
            for (auto n : ns) {
                BigInt rest;
                try {
                    rest = count_auto(split->remainder, Domain::symmetric(n), budget).count;
                } catch (const BudgetExceeded&) {
                    continue;
                }
                CompositionPlan plan;
                plan.factors.push_back({render(split->homogeneous_part), split->homogeneous_part.variables(),
                                        thue_scaling_lower(split->max_coord, n)});
                plan.factors.push_back({render(split->remainder), split->remainder.variables(), rest});
                lower.values.emplace_back(n, plan.combined());
            }
            out.bounds.push_back(std::move(lower));
            if (split->remainder_growth == "1") out.lower_growth = "N";
            else if (split->remainder_growth == "ln N") out.lower_growth = "N ln N";
        }
    }
    return out;
}

struct ReportOptions {
    DomainKind domain = DomainKind::Natural;
    std::vector<std::uint64_t> ns;
    Budget budget{};
    std::vector<BoundReport> extra_claims;
};

struct Report {
    DiagonalEquation equation;
    StructureDescriptor structure;
    DomainKind domain;
    std::vector<BoundReport> bounds;
    std::vector<std::string> notes;
    std::optional<std::string> lower_growth;
    AuditReport audit;
};

inline Report report(const DiagonalEquation& eq, const ReportOptions& options) {
    auto applicable = applicable_bounds(eq, options.domain, options.ns, options.budget);
    auto bounds = applicable.bounds;
    bounds.insert(bounds.end(), options.extra_claims.begin(), options.extra_claims.end());
    auto rows = sweep(eq, options.domain, options.ns, options.budget);
    auto audit = audit_counts(rows, bounds);
    if (options.domain == DomainKind::SymmetricInteger) note_sign_rule_discrepancies(eq, audit, options.budget);
    for (const auto& r : rows)
        if (!r.refusal.empty())
            audit.flags.push_back({AuditSeverity::Note, "count refused: " + r.refusal, r.n});
    return Report{eq,     classify(eq),        options.domain, std::move(bounds), std::move(applicable.notes),
                  applicable.lower_growth, std::move(audit)};
}

inline nlohmann::json to_json_value(const Report& r) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : r.bounds) bounds.push_back(to_json_value(b));
    nlohmann::json flags = nlohmann::json::array();
    for (const auto& f : r.audit.flags) {
        nlohmann::json j{{"severity", to_string(f.severity)}, {"message", f.message}};
        if (f.n) j["N"] = *f.n;
        flags.push_back(std::move(j));
    }
    nlohmann::json fit = nullptr;
    if (r.audit.fit)
        fit = {{"slope", r.audit.fit->slope},
               {"intercept", r.audit.fit->intercept},
               {"residual", r.audit.fit->residual},
               {"points", r.audit.fit->points}};
    nlohmann::json j{{"equation", to_json_value(r.equation)},
                     {"text", render(r.equation)},
                     {"structure", to_json_value(r.structure)},
                     {"domain", to_string(r.domain)},
                     {"bounds", bounds},
                     {"sweep", rows_to_json(r.audit.rows)},
                     {"fit", fit},
                     {"slope_tolerance", slope_tolerance},
                     {"audit", {{"flags", flags}, {"hard_failure", r.audit.hard_failure()}}},
                     {"notes", r.notes}};
    j["lower_growth"] = r.lower_growth ? nlohmann::json(*r.lower_growth) : nlohmann::json(nullptr);
    return j;
}

inline std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "equation: " << render(r.equation) << "\n";
    os << "domain:   " << to_string(r.domain) << "\n";
    os << "blocks:  ";
    for (const auto& b : r.structure.blocks) os << " (k=" << b.degree << ", terms=" << b.terms << ")";
    os << (r.structure.homogeneous ? "  homogeneous" : "  constant " + r.equation.constant().str()) << "\n";
    os << "slope tolerance: " << slope_tolerance << " (absorbs eps and log factors)\n\n";
    os << "bounds:\n";
    for (const auto& b : r.bounds) {
        os << "  " << to_string(b.direction) << " " << b.describe() << "  [" << to_string(b.regime) << "]"
           << (b.authoritative() ? "" : " advisory") << "\n";
        for (const auto& p : b.preconditions)
            os << "    " << (p.satisfied ? "ok   " : "FAIL ") << p.condition << "\n";
        for (const auto& n : b.notes) os << "    " << n << "\n";
    }
    if (r.lower_growth) os << "lower growth: " << *r.lower_growth << "\n";
    os << "\nsweep:\n" << to_csv(r.audit.rows);
    if (r.audit.fit) os << "fit: slope " << r.audit.fit->slope << ", residual " << r.audit.fit->residual << "\n";
    os << "\naudit:" << (r.audit.hard_failure() ? " HARD FAILURE" : "") << "\n";
    for (const auto& f : r.audit.flags) os << "  [" << to_string(f.severity) << "] " << f.message << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace diophantine
