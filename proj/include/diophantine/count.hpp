#pragma once

// Exact solution counts of a diagonal equation inside a box, by three
// independent routes:
//
//   brute        full enumeration of the box
//   mitm         meet in the middle: a sorted multiplicity table of partial
//                sums for half of the variables, streamed against the rest
//   convolution  iterated convolution of per-variable value distributions
//                (representation functions), then pairing the positive side
//                against the negated negative side
//
// All three agree wherever they all run. When every partial sum fits in 62
// bits the engines work on int64 tables; brute and mitm fall back to
// arbitrary precision otherwise.

#include "equation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace diophantine {

enum class CountMethod { Brute, Mitm, Convolution };

inline std::string_view to_string(CountMethod m) {
    switch (m) {
        case CountMethod::Brute: return "brute";
        case CountMethod::Mitm: return "mitm";
        case CountMethod::Convolution: return "conv";
    }
    return "?";
}

struct Budget {
    std::uint64_t evaluations = 1'000'000'000;  // enumerated tuples
    std::uint64_t map_entries = 50'000'000;     // table / dense range cardinality
    unsigned threads = 0;                       // 0: hardware concurrency

    // DIOPHANTINE_EVAL_BUDGET and DIOPHANTINE_MAP_BUDGET override the defaults.
    static Budget from_environment() {
        Budget b;
        auto read = [](const char* name, std::uint64_t& out) {
            if (const char* v = std::getenv(name)) {
                auto parsed = parse_bigint(v);
                if (!parsed || *parsed < 1 || *parsed > std::numeric_limits<std::int64_t>::max())
                    throw std::invalid_argument(std::string(name) + " must be a positive integer");
                out = parsed->convert_to<std::uint64_t>();
            }
        };
        read("DIOPHANTINE_EVAL_BUDGET", b.evaluations);
        read("DIOPHANTINE_MAP_BUDGET", b.map_entries);
        return b;
    }

    unsigned thread_count() const {
        if (threads > 0) return threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

struct SolutionCount {
    BigInt count;
    CountMethod method;
    Domain domain;
    std::chrono::duration<double, std::milli> elapsed{};
};

// Sparse value -> multiplicity map over the reachable sums of a group of
// variables. Entries are sorted by value; every multiplicity is positive.
class RepresentationFunction {
public:
    using Entry = std::pair<std::int64_t, std::uint64_t>;

    RepresentationFunction() : entries_{{0, 1}} {}  // empty sum
    explicit RepresentationFunction(std::vector<Entry> sorted) : entries_(std::move(sorted)) {}

    // Distribution of a list of values (duplicates accumulate).
    static RepresentationFunction of_values(std::span<const std::int64_t> values) {
        std::vector<std::int64_t> v(values.begin(), values.end());
        std::sort(v.begin(), v.end());
        std::vector<Entry> out;
        for (auto x : v) {
            if (!out.empty() && out.back().first == x) ++out.back().second;
            else out.emplace_back(x, 1);
        }
        return RepresentationFunction(std::move(out));
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t support() const noexcept { return entries_.size(); }
    std::int64_t min_value() const { return entries_.front().first; }
    std::int64_t max_value() const { return entries_.back().first; }

    std::uint64_t operator()(std::int64_t value) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                                   [](const Entry& e, std::int64_t v) { return e.first < v; });
        return it != entries_.end() && it->first == value ? it->second : 0;
    }

    BigInt total() const {
        BigInt t = 0;
        for (const auto& e : entries_) t += e.second;
        return t;
    }

    // Σ_t r(t)^2.
    BigInt sum_of_squares() const {
        BigInt t = 0;
        for (const auto& e : entries_) t += BigInt(e.second) * e.second;
        return t;
    }

private:
    std::vector<Entry> entries_;
};

namespace detail {

// Sum of all multiplicities in products; guards 64-bit multiplicities.
inline void check_product_total(const RepresentationFunction& a, const RepresentationFunction& b) {
    BigInt total = a.total() * b.total();
    if (total > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw BudgetExceeded("multiplicity width", total, BigInt(std::numeric_limits<std::uint64_t>::max()));
}

}  // namespace detail

// Distribution of a + b. Dense accumulation when the value range is compact,
// sort-and-merge otherwise.
inline RepresentationFunction convolve(const RepresentationFunction& a, const RepresentationFunction& b,
                                       const Budget& budget = {}) {
    detail::check_product_total(a, b);
    std::int64_t lo = a.min_value() + b.min_value();
    std::int64_t hi = a.max_value() + b.max_value();
    auto width = static_cast<std::uint64_t>(hi - lo) + 1;
    BigInt pairs = BigInt(a.support()) * b.support();
    using Entry = RepresentationFunction::Entry;
    std::vector<Entry> out;
    if (width <= budget.map_entries && BigInt(width) <= pairs * 8) {
        std::vector<std::uint64_t> dense(width, 0);
        for (const auto& [va, ma] : a.entries())
            for (const auto& [vb, mb] : b.entries())
                dense[static_cast<std::size_t>(va + vb - lo)] += ma * mb;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0) out.emplace_back(lo + static_cast<std::int64_t>(i), dense[i]);
    } else if (pairs <= budget.map_entries) {
        std::vector<Entry> all;
        all.reserve(pairs.convert_to<std::size_t>());
        for (const auto& [va, ma] : a.entries())
            for (const auto& [vb, mb] : b.entries()) all.emplace_back(va + vb, ma * mb);
        std::sort(all.begin(), all.end());
        for (const auto& e : all) {
            if (!out.empty() && out.back().first == e.first) out.back().second += e.second;
            else out.push_back(e);
        }
    } else {
        throw BudgetExceeded("convolution range", std::min(BigInt(width), pairs), budget.map_entries);
    }
    return RepresentationFunction(std::move(out));
}

// Σ_v p(v) * q(v + shift).
inline BigInt pair_count(const RepresentationFunction& p, const RepresentationFunction& q, std::int64_t shift) {
    BigInt total = 0;
    unsigned __int128 acc = 0;
    constexpr unsigned __int128 flush_at = static_cast<unsigned __int128>(1) << 126;
    auto qi = q.entries().begin();
    for (const auto& [v, m] : p.entries()) {
        std::int64_t target = v + shift;
        while (qi != q.entries().end() && qi->first < target) ++qi;
        if (qi == q.entries().end()) break;
        if (qi->first == target) {
            auto product = static_cast<unsigned __int128>(m) * qi->second;
            if (product >= flush_at) {
                total += from_u128(product);
                continue;
            }
            acc += product;
            if (acc >= flush_at) {
                total += from_u128(acc);
                acc = 0;
            }
        }
    }
    return total + from_u128(acc);
}

namespace detail {

constexpr std::int64_t small_limit = std::int64_t{1} << 62;

struct VariableTables {
    std::vector<std::string> vars;           // eq.variables() order
    std::vector<unsigned> max_degree;
    bool small = false;                      // int64 tables valid
    std::vector<std::vector<std::int64_t>> small_values;
    std::vector<std::vector<BigInt>> big_values;
    std::int64_t constant = 0;               // valid when small
};

// Per-variable contribution Σ coeff * x^exp for each x in the domain.
inline VariableTables build_tables(const DiagonalEquation& eq, const Domain& domain, const Budget& budget) {
    if (domain.size() > budget.map_entries)
        throw BudgetExceeded("value table", domain.size(), budget.map_entries);
    VariableTables t;
    t.vars = eq.variables();
    BigInt bound = abs(eq.constant());
    std::vector<std::vector<Term>> per_var;
    for (const auto& v : t.vars) {
        per_var.push_back(eq.terms_of(v));
        unsigned deg = 0;
        for (const auto& term : per_var.back()) {
            deg = std::max(deg, term.exp);
            bound += abs(term.coeff) * ipow(BigInt(domain.bound), term.exp);
        }
        t.max_degree.push_back(deg);
    }
    t.small = bound < small_limit;
    if (t.small) {
        t.constant = eq.constant().convert_to<std::int64_t>();
        for (const auto& terms : per_var) {
            std::vector<std::int64_t> values;
            values.reserve(domain.size());
            for (std::int64_t x = domain.lo(); x <= domain.hi(); ++x) {
                std::int64_t sum = 0;
                for (const auto& term : terms) {
                    std::int64_t p = 1;
                    for (unsigned e = 0; e < term.exp; ++e) p *= x;
                    sum += term.coeff.convert_to<std::int64_t>() * p;
                }
                values.push_back(sum);
            }
            t.small_values.push_back(std::move(values));
        }
    } else {
        for (const auto& terms : per_var) {
            std::vector<BigInt> values;
            values.reserve(domain.size());
            for (std::int64_t x = domain.lo(); x <= domain.hi(); ++x) {
                BigInt sum = 0;
                for (const auto& term : terms) sum += term.coeff * ipow(BigInt(x), term.exp);
                values.push_back(std::move(sum));
            }
            t.big_values.push_back(std::move(values));
        }
    }
    return t;
}

inline BigInt box_power(const Domain& domain, std::size_t vars) { return ipow(BigInt(domain.size()), vars); }

// Calls sink(sum) for every tuple of the listed tables.
template <class Value, class Sink>
void enumerate_sums(const std::vector<const std::vector<Value>*>& tables, std::size_t level, const Value& partial,
                    Sink&& sink) {
    if (level == tables.size()) {
        sink(partial);
        return;
    }
    for (const auto& v : *tables[level]) enumerate_sums(tables, level + 1, Value(partial + v), sink);
}

inline std::uint64_t brute_small(const VariableTables& t, std::size_t level, std::int64_t partial) {
    const auto& values = t.small_values[level];
    if (level + 1 == t.small_values.size()) {
        std::int64_t target = -partial - t.constant;
        std::uint64_t hits = 0;
        for (auto v : values) hits += v == target;
        return hits;
    }
    std::uint64_t hits = 0;
    for (auto v : values) hits += brute_small(t, level + 1, partial + v);
    return hits;
}

// Map side gets the floor(v/2) variables of lowest degree; the streamed side
// gets the rest (larger-degree blocks stream).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> mitm_split(const VariableTables& t) {
    std::vector<std::size_t> order(t.vars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t.max_degree[a] < t.max_degree[b]; });
    std::size_t half = order.size() / 2;
    return {std::vector<std::size_t>(order.begin(), order.begin() + half),
            std::vector<std::size_t>(order.begin() + half, order.end())};
}

inline void stream_small(const std::vector<const std::vector<std::int64_t>*>& tables, std::size_t level,
                                  std::int64_t partial, std::int64_t constant,
                                  const std::vector<std::int64_t>& keys, const std::vector<std::uint64_t>& mults,
                                  unsigned __int128& acc) {
    if (level == tables.size()) {
        std::int64_t target = -partial - constant;
        auto it = std::lower_bound(keys.begin(), keys.end(), target);
        if (it != keys.end() && *it == target) acc += mults[static_cast<std::size_t>(it - keys.begin())];
        return;
    }
    for (auto v : *tables[level]) stream_small(tables, level + 1, partial + v, constant, keys, mults, acc);
}

// Partition the variables by sign of their leading coefficient.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> sign_sides(const DiagonalEquation& eq,
                                                                                const VariableTables& t) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < t.vars.size(); ++i) {
        auto terms = eq.terms_of(t.vars[i]);
        (terms.front().coeff > 0 ? pos : neg).push_back(i);
    }
    return {pos, neg};
}

inline RepresentationFunction side_representation(const VariableTables& t, const std::vector<std::size_t>& side,
                                                  bool negate, const Budget& budget) {
    RepresentationFunction acc;
    for (auto i : side) {
        std::vector<std::int64_t> values = t.small_values[i];
        if (negate)
            for (auto& v : values) v = -v;
        acc = convolve(acc, RepresentationFunction::of_values(values), budget);
    }
    return acc;
}

}  // namespace detail

inline SolutionCount count_bruteforce(const DiagonalEquation& eq, const Domain& domain, const Budget& budget = {}) {
    auto start = std::chrono::steady_clock::now();
    BigInt required = detail::box_power(domain, eq.variable_count());
    if (required > budget.evaluations) throw BudgetExceeded("evaluations", required, budget.evaluations);
    auto t = detail::build_tables(eq, domain, budget);
    BigInt count;
    if (t.small) {
        count = detail::brute_small(t, 0, 0);
    } else {
        std::vector<const std::vector<BigInt>*> head;
        for (std::size_t i = 0; i + 1 < t.big_values.size(); ++i) head.push_back(&t.big_values[i]);
        const auto& last = t.big_values.back();
        std::uint64_t hits = 0;
        detail::enumerate_sums(head, 0, BigInt(0), [&](const BigInt& partial) {
            BigInt target = -partial - eq.constant();
            for (const auto& v : last) hits += v == target;
        });
        count = hits;
    }
    return {count, CountMethod::Brute, domain, std::chrono::steady_clock::now() - start};
}

inline SolutionCount count_mitm(const DiagonalEquation& eq, const Domain& domain, const Budget& budget = {}) {
    auto start = std::chrono::steady_clock::now();
    if (eq.variable_count() < 2) throw std::invalid_argument("meet in the middle needs at least two variables");
    auto t = detail::build_tables(eq, domain, budget);
    auto [map_side, stream_side] = detail::mitm_split(t);
    BigInt map_size = detail::box_power(domain, map_side.size());
    BigInt stream_size = detail::box_power(domain, stream_side.size());
    if (map_size > budget.map_entries) throw BudgetExceeded("map entries", map_size, budget.map_entries);
    if (stream_size > budget.evaluations) throw BudgetExceeded("evaluations", stream_size, budget.evaluations);

    BigInt count;
    if (t.small) {
        std::vector<const std::vector<std::int64_t>*> map_tables, stream_tables;
        for (auto i : map_side) map_tables.push_back(&t.small_values[i]);
        for (auto i : stream_side) stream_tables.push_back(&t.small_values[i]);

        std::vector<std::int64_t> sums;
        sums.reserve(map_size.convert_to<std::size_t>());
        detail::enumerate_sums(map_tables, 0, std::int64_t{0}, [&](std::int64_t s) { sums.push_back(s); });
        std::sort(sums.begin(), sums.end());
        std::vector<std::int64_t> keys;
        std::vector<std::uint64_t> mults;
        for (auto s : sums) {
            if (!keys.empty() && keys.back() == s) ++mults.back();
            else {
                keys.push_back(s);
                mults.push_back(1);
            }
        }
        sums = {};

        // Partition the first streamed variable's values across workers.
        const auto& first = *stream_tables.front();
        std::vector<const std::vector<std::int64_t>*> rest(stream_tables.begin() + 1, stream_tables.end());
        unsigned workers = std::min<unsigned>(budget.thread_count(), static_cast<unsigned>(first.size()));
        std::vector<unsigned __int128> partial(workers, 0);
        auto run = [&](unsigned w) {
            std::size_t lo = first.size() * w / workers, hi = first.size() * (w + 1) / workers;
            for (std::size_t i = lo; i < hi; ++i)
                detail::stream_small(rest, 0, first[i], t.constant, keys, mults, partial[w]);
        };
        if (workers == 1) {
            run(0);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        }
        count = 0;
        for (auto p : partial) count += from_u128(p);
    } else {
        std::vector<const std::vector<BigInt>*> map_tables, stream_tables;
        for (auto i : map_side) map_tables.push_back(&t.big_values[i]);
        for (auto i : stream_side) stream_tables.push_back(&t.big_values[i]);
        std::map<BigInt, std::uint64_t> table;
        detail::enumerate_sums(map_tables, 0, BigInt(0), [&](const BigInt& s) { ++table[s]; });
        BigInt total = 0;
        detail::enumerate_sums(stream_tables, 0, BigInt(0), [&](const BigInt& s) {
            auto it = table.find(-s - eq.constant());
            if (it != table.end()) total += it->second;
        });
        count = std::move(total);
    }
    return {count, CountMethod::Mitm, domain, std::chrono::steady_clock::now() - start};
}

inline SolutionCount count_convolution(const DiagonalEquation& eq, const Domain& domain, const Budget& budget = {}) {
    auto start = std::chrono::steady_clock::now();
    auto t = detail::build_tables(eq, domain, budget);
    if (!t.small) throw BudgetExceeded("value range (bits)", BigInt(1) << 62, BigInt(1) << 62);
    auto [pos, neg] = detail::sign_sides(eq, t);
    auto p = detail::side_representation(t, pos, false, budget);
    auto q = detail::side_representation(t, neg, true, budget);
    // p - q + c = 0  <=>  q = p + c
    BigInt count = pair_count(p, q, t.constant);
    return {count, CountMethod::Convolution, domain, std::chrono::steady_clock::now() - start};
}

// r_{s,k}: distribution of x_1^k + ... + x_s^k over the domain.
inline RepresentationFunction power_sum_representation(unsigned k, std::size_t s, const Domain& domain,
                                                       const Budget& budget = {}) {
    if (domain.size() > budget.map_entries) throw BudgetExceeded("value table", domain.size(), budget.map_entries);
    BigInt top = ipow(BigInt(domain.bound), k) * s;
    if (top >= detail::small_limit) throw BudgetExceeded("value range (bits)", top, BigInt(detail::small_limit));
    std::vector<std::int64_t> values;
    for (std::int64_t x = domain.lo(); x <= domain.hi(); ++x) {
        std::int64_t p = 1;
        for (unsigned e = 0; e < k; ++e) p *= x;
        values.push_back(p);
    }
    auto single = RepresentationFunction::of_values(values);
    RepresentationFunction acc;
    for (std::size_t i = 0; i < s; ++i) acc = convolve(acc, single, budget);
    return acc;
}

// Rough operation counts, used to choose a method; nullopt if refused.
struct CostEstimate {
    std::optional<double> brute, mitm, convolution;
};

inline CostEstimate estimate_costs(const DiagonalEquation& eq, const Domain& domain, const Budget& budget) {
    CostEstimate c;
    double box = static_cast<double>(domain.size());
    auto v = eq.variable_count();
    if (domain.size() > budget.map_entries) return c;
    double brute = std::pow(box, static_cast<double>(v));
    if (brute <= static_cast<double>(budget.evaluations)) c.brute = brute;

    if (v >= 2) {
        double map_side = std::pow(box, static_cast<double>(v / 2));
        double stream_side = std::pow(box, static_cast<double>(v - v / 2));
        if (map_side <= static_cast<double>(budget.map_entries) &&
            stream_side <= static_cast<double>(budget.evaluations))
            c.mitm = map_side * std::log2(map_side + 2) + stream_side * std::log2(map_side + 2);
    }

    // Convolution: track each side's value range and tuple count.
    BigInt bound = abs(eq.constant());
    for (const auto& t : eq.terms()) bound += abs(t.coeff) * ipow(BigInt(domain.bound), t.exp);
    if (bound < detail::small_limit) {
        double cost = 0;
        bool ok = true;
        for (int side = 0; side < 2 && ok; ++side) {
            double width = 1, tuples = 1;
            for (const auto& var : eq.variables()) {
                auto terms = eq.terms_of(var);
                if ((terms.front().coeff > 0) != (side == 0)) continue;
                double span = 0;
                for (const auto& t : terms)
                    span += 2.0 * std::abs(t.coeff.convert_to<double>()) * std::pow(static_cast<double>(domain.bound), t.exp);
                double support = std::min(width, tuples);
                cost += support * box;
                width += span;
                tuples *= box;
                if (std::min(width, tuples) > static_cast<double>(budget.map_entries) ||
                    tuples > 1.8e19)
                    ok = false;
            }
        }
        if (ok) c.convolution = cost;
    }
    return c;
}

// Cheapest applicable method; ties go convolution, mitm, brute.
inline std::optional<CountMethod> choose_method(const DiagonalEquation& eq, const Domain& domain,
                                                const Budget& budget) {
    auto c = estimate_costs(eq, domain, budget);
    std::optional<CountMethod> best;
    double best_cost = 0;
    auto consider = [&](const std::optional<double>& cost, CountMethod m) {
        if (cost && (!best || *cost < best_cost)) {
            best = m;
            best_cost = *cost;
        }
    };
    consider(c.convolution, CountMethod::Convolution);
    consider(c.mitm, CountMethod::Mitm);
    consider(c.brute, CountMethod::Brute);
    return best;
}

inline SolutionCount count_with(CountMethod m, const DiagonalEquation& eq, const Domain& domain,
                                const Budget& budget = {}) {
    switch (m) {
        case CountMethod::Brute: return count_bruteforce(eq, domain, budget);
        case CountMethod::Mitm: return count_mitm(eq, domain, budget);
        case CountMethod::Convolution: return count_convolution(eq, domain, budget);
    }
    throw std::logic_error("unknown count method");
}

// Picks by estimated cost; falls through to the next method if one refuses.
inline SolutionCount count_auto(const DiagonalEquation& eq, const Domain& domain, const Budget& budget = {}) {
    auto c = estimate_costs(eq, domain, budget);
    std::vector<std::pair<double, CountMethod>> ranked;
    if (c.convolution) ranked.emplace_back(*c.convolution, CountMethod::Convolution);
    if (c.mitm) ranked.emplace_back(*c.mitm, CountMethod::Mitm);
    if (c.brute) ranked.emplace_back(*c.brute, CountMethod::Brute);
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::optional<BudgetExceeded> last;
    for (auto [cost, m] : ranked) {
        try {
            return count_with(m, eq, domain, budget);
        } catch (const BudgetExceeded& e) {
            last = e;
        }
    }
    if (last) throw *last;
    // Nothing fits; report the cheapest requirement.
    BigInt brute = detail::box_power(domain, eq.variable_count());
    BigInt half = detail::box_power(domain, eq.variable_count() - eq.variable_count() / 2);
    throw BudgetExceeded("evaluations", std::min(brute, half), budget.evaluations);
}

// Number of 2s-tuples (x, y) in [1, N]^2s with y a rearrangement of x:
// Σ over multisets of size s drawn from N values of (number of orderings)^2.
// Computed by grouping multisets by their shape.
inline BigInt perm_matching_count(std::size_t s, std::uint64_t n) {
    if (s < 1 || n < 1) throw std::domain_error("perm_matching_count needs s >= 1 and N >= 1");
    // shapes[d][j]: Σ over compositions of j into d positive parts of (j! / Π m_i!)^2
    std::vector<std::vector<BigInt>> shapes(s + 1, std::vector<BigInt>(s + 1, 0));
    shapes[0][0] = 1;
    for (std::size_t d = 1; d <= s; ++d)
        for (std::size_t j = d; j <= s; ++j)
            for (std::size_t m = 1; m <= j - (d - 1); ++m) {
                if (shapes[d - 1][j - m] == 0) continue;
                BigInt c = binomial(j, m);
                shapes[d][j] += shapes[d - 1][j - m] * c * c;
            }
    BigInt total = 0;
    for (std::size_t d = 1; d <= std::min<std::uint64_t>(s, n); ++d) total += binomial(n, d) * shapes[d][s];
    return total;
}

}  // namespace diophantine
