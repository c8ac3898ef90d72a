#include <diophantine.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace diophantine;

TEST(Hua, Examples) {
    EXPECT_EQ(hua_exponent(3, 5).exponent, 5);
    EXPECT_EQ(hua_exponent(4, 4).exponent, 12);
    EXPECT_EQ(hua_exponent(1, 1).exponent, 1);
    EXPECT_TRUE(hua_exponent(3, 5).has_epsilon);
    EXPECT_TRUE(hua_exponent(3, 5).authoritative());
    EXPECT_TRUE(hua_exponent(5, 4).advisory());
}

TEST(Hua, NeverWorseThanTrivial) {
    for (unsigned k = 1; k <= 12; ++k)
        for (unsigned j = 1; j <= k; ++j) EXPECT_LE(hua_exponent(j, k).exponent, Rational(BigInt(1) << j));
}

TEST(EvenMoment, Examples) {
    auto a = even_moment_exponent(16, 4);
    EXPECT_EQ(a.exponent, 12);
    EXPECT_EQ(a.regime, Regime::Hua);
    auto b = even_moment_exponent(12, 3);
    EXPECT_EQ(b.exponent, 8);
    EXPECT_EQ(b.regime, Regime::BinarySplit);
    for (unsigned k = 1; k <= 8; ++k) {
        auto c = even_moment_exponent(2, k);
        EXPECT_EQ(c.exponent, 1);
        EXPECT_EQ(c.regime, Regime::Hua);
    }
}

TEST(EvenMoment, MonotoneInMoment) {
    for (unsigned k = 1; k <= 8; ++k) {
        Rational prev = 0;
        for (std::uint64_t m = 2; m <= 600; m += 2) {
            auto e = even_moment_exponent(m, k).exponent;
            EXPECT_GE(e, prev) << "k=" << k << " 2M=" << m;
            EXPECT_LE(e, Rational(m));
            prev = e;
        }
    }
}

// Independent evaluation of the binary-split formula.
TEST(BinarySplit, MatchesFormula) {
    EXPECT_EQ(binary_split_exponent(12, 3).exponent, Rational(12) - Rational(4, 2) - Rational(4, 2));
    EXPECT_EQ(binary_split_exponent(12, 3).exponent, 8);
    EXPECT_EQ(binary_split_exponent(8, 3).exponent, 5);
    EXPECT_EQ(binary_split_exponent(8, 3).regime, Regime::Hua);
    EXPECT_EQ(binary_split_exponent(6, 3).exponent, 3);
    EXPECT_TRUE(binary_split_exponent(40, 4).advisory());
    for (std::uint64_t m = 2; m <= 200; m += 2) {
        std::vector<unsigned> j;
        for (int b = 10; b >= 0; --b)
            if ((m >> b) & 1) j.push_back(b);
        Rational e = m;
        for (std::size_t i = 1; i < j.size(); ++i) e -= Rational(j[i - 1] + i, 1u << i);
        if (j.size() > 1) e -= Rational(j.back() + j.size(), 1u << (j.size() - 1));
        else e = Rational((1u << j[0]) - j[0]);
        EXPECT_EQ(binary_split_exponent(m, 8).exponent, e) << m;
    }
}

TEST(BinarySplit, SlopeStaysBelowBoundAtDeskScale) {
    auto eq = parse_text("x1^3 + x2^3 + x3^3 - y1^3 - y2^3 - y3^3 = 0");
    std::vector<std::uint64_t> ns{10, 20, 40, 80};
    auto rows = sweep(eq, DomainKind::Natural, ns);
    EXPECT_LE(fit_exponent(rows).slope, to_double(binary_split_exponent(6, 3).exponent) + slope_tolerance);
}

TEST(MixedDegree, WorkedExamples) {
    auto a = mixed_degree_upper({{3, 3}, {4, 2}, {5, 1}});
    EXPECT_EQ(a.bound.exponent, Rational(33, 4));
    EXPECT_TRUE(a.bound.has_epsilon);
    EXPECT_EQ(a.recommended_exponent, Rational(33, 4));
    EXPECT_TRUE(a.recommended_attains_minimum);
    EXPECT_EQ(a.best_ordering.front().pairs, 3u);
    EXPECT_EQ(to_string(a.bound.exponent), "33/4");

    auto b = mixed_degree_upper({{2, 1}, {4, 2}});
    EXPECT_EQ(b.bound.exponent, Rational(7, 2));
    EXPECT_TRUE(b.recommended_attains_minimum);
}

TEST(MixedDegree, SingleBlockIsEvenMoment) {
    for (unsigned k = 1; k <= 5; ++k)
        for (std::size_t s = 1; s <= 6; ++s)
            EXPECT_EQ(mixed_degree_upper({{k, s}}).bound.exponent, even_moment_exponent(2 * s, k).exponent);
}

TEST(MixedDegree, MinimumNeverAboveRecommended) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        std::vector<DegreePairs> blocks;
        std::size_t l = 1 + rng() % 4;
        for (std::size_t b = 0; b < l; ++b)
            blocks.push_back({static_cast<unsigned>(2 + b + rng() % 3), 1 + rng() % 4});
        auto r = mixed_degree_upper(blocks);
        EXPECT_LE(r.bound.exponent, r.recommended_exponent);
        EXPECT_EQ(r.recommended_attains_minimum, r.bound.exponent == r.recommended_exponent);
    }
}

TEST(MixedDegree, TooManyBlocksRefused) {
    std::vector<DegreePairs> blocks;
    for (unsigned k = 1; k <= 9; ++k) blocks.push_back({k, 1});
    EXPECT_THROW(mixed_degree_upper(blocks), Refusal);
}

TEST(ComposeLower, Examples) {
    for (std::uint64_t n : {1, 5, 8, 100}) {
        std::vector<BigInt> f{n, perm_matching_count(2, n)};
        EXPECT_EQ(compose_lower(f), BigInt(n) * (2 * n * n - n));
    }
    std::vector<BigInt> zero{17, 0};
    EXPECT_EQ(compose_lower(zero), 0);
    EXPECT_THROW(compose_lower(std::vector<BigInt>{}), std::domain_error);
}

TEST(ComposeLower, MultiplicativeAndOrderFree) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        std::vector<BigInt> f;
        for (std::size_t k = 0; k < 1 + rng() % 5; ++k) f.push_back(BigInt(rng() % 1000));
        auto g = f;
        std::shuffle(g.begin(), g.end(), rng);
        EXPECT_EQ(compose_lower(f), compose_lower(g));
        std::vector<BigInt> left(f.begin(), f.begin() + f.size() / 2), right(f.begin() + f.size() / 2, f.end());
        BigInt l = left.empty() ? BigInt(1) : compose_lower(left);
        EXPECT_EQ(compose_lower(f), l * compose_lower(right));
    }
}

// Product of perm-matching factors grows like N^s with s the total pair count.
TEST(ComposeLower, PermProductDegree) {
    std::vector<std::size_t> pairs{1, 2, 4};  // 2s = 2 + 4 + 8
    auto product = [&](std::uint64_t n) {
        std::vector<BigInt> f;
        for (auto p : pairs) f.push_back(perm_matching_count(p, n));
        return compose_lower(f);
    };
    double lo = log_of(product(1000)), hi = log_of(product(2000));
    EXPECT_NEAR((hi - lo) / std::log(2.0), 7.0, 0.05);
}

TEST(ThueScaling, Values) {
    for (std::uint64_t n = 1; n <= 200; ++n) EXPECT_EQ(thue_scaling_lower(1, n), 2 * n + 1);
    EXPECT_EQ(thue_scaling_lower(41, 20), 1);
    EXPECT_EQ(thue_scaling_lower(2, 5), 5);
    EXPECT_THROW(thue_scaling_lower(0, 5), std::domain_error);
}

TEST(LogFamily, Values) {
    EXPECT_EQ(log_family_lower(1, 2, 1, 1024), 10);
    EXPECT_EQ(log_family_lower(2, 12, 5, 1000000), 4);
    EXPECT_EQ(log_family_lower(2, 12, 5, 31), 0);
    EXPECT_THROW(log_family_lower(2, 1, 5, 100), std::domain_error);
    // Same value as the real formula away from rounding edges.
    for (std::uint64_t n : {10, 1000, 123456, 99999999}) {
        double f = (std::log(double(n)) - 5 * std::log(2.0)) / std::log(12.0);
        EXPECT_EQ(log_family_lower(2, 12, 5, n), BigInt(static_cast<long>(std::max(0.0, std::floor(f)))));
    }
}

TEST(ExplicitVar, Exponents) {
    EXPECT_EQ(explicit_var_upper(2, 3).exponent, Rational(1, 3));
    EXPECT_EQ(explicit_var_upper(4, 2).exponent, Rational(3, 2));
    EXPECT_EQ(explicit_var_upper(2, 1).exponent, 1);
    for (std::uint64_t n : {100, 1000, 10000})
        EXPECT_EQ(count_auto(parse_text("x1 - x2^3 = 0"), Domain::natural(n)).count, iroot(BigInt(n), 3));
}

TEST(Sphere, SmallCases) {
    EXPECT_NEAR(sphere_estimate(10000), 523598.7756, 1e-3);
    EXPECT_NEAR(sphere_estimate(1), 0.5236, 1e-4);
    auto eq = parse_text("x1 - x2^2 - x3^2 - x4^2 = 0");
    EXPECT_EQ(count_auto(eq, Domain::natural(1)).count, 0);
    EXPECT_EQ(count_auto(eq, Domain::natural(3)).count, 1);
}

TEST(NaturalToInteger, Rules) {
    auto even = classify(parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0"));
    auto r = natural_to_integer(even, 6);
    EXPECT_EQ(r.value, 12);
    EXPECT_TRUE(r.advisory);
    auto odd = classify(parse_text("x1^3 - y1^3 + x2^5 - y2^5 = 0"));
    EXPECT_EQ(natural_to_integer(odd, 6).value, 6);
    EXPECT_EQ(natural_to_integer(even, 0).value, 0);
    EXPECT_THROW(natural_to_integer(classify(parse_text("x1^3 + x2^2 - 1 = 0")), 3), Refusal);
}

TEST(Solvability, Thresholds) {
    auto k2 = solvability_check(2, 20, true);
    EXPECT_EQ(k2.published_threshold, 15u);
    EXPECT_EQ(k2.required_s, 9);
    auto k3 = solvability_check(3, 20, true);
    EXPECT_EQ(k3.published_threshold, 34u);
    EXPECT_EQ(k3.required_s, 25);
    EXPECT_FALSE(k3.guaranteed);
    auto k8 = solvability_check(8, 257, true);
    EXPECT_TRUE(k8.guaranteed);
    EXPECT_EQ(k8.required_s, 257);
    EXPECT_FALSE(solvability_check(8, 256, true).guaranteed);
    EXPECT_FALSE(solvability_check(4, 1000, false).guaranteed);
}

TEST(Solvability, MonotoneInS) {
    for (unsigned k = 2; k <= 10; ++k)
        for (bool mixed : {false, true}) {
            bool seen = false;
            for (std::uint64_t s = 1; s <= 1100; ++s) {
                bool g = solvability_check(k, s, mixed).guaranteed;
                if (seen) {
                    EXPECT_TRUE(g) << "k=" << k << " s=" << s;
                }
                seen = seen || g;
            }
        }
}

TEST(Audit, ThreeCubesPasses) {
    auto eq = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0");
    BoundReport lower;
    lower.direction = Direction::Lower;
    lower.regime = Regime::ThueScaling;
    lower.exponent = 1;
    for (std::uint64_t n : {2, 10, 50}) lower.values.emplace_back(n, thue_scaling_lower(1, n));
    std::vector<BoundReport> claims{lower};
    auto a = audit(eq, {Domain::symmetric(2), Domain::symmetric(10), Domain::symmetric(50)}, claims);
    EXPECT_FALSE(a.hard_failure());
    ASSERT_EQ(a.rows.size(), 3u);
    EXPECT_EQ(*a.rows[0].count, 12);
    EXPECT_GE(*a.rows[1].count, 21);
    EXPECT_GE(*a.rows[2].count, 101);
}

TEST(Audit, SyntheticPowerLawAgainstSmallerUpper) {
    std::vector<SweepRow> rows;
    for (std::uint64_t n : {10, 20, 40, 80}) rows.push_back({n, ipow(BigInt(n), 5), "given", 0, {}});
    BoundReport upper;
    upper.exponent = 4;
    std::vector<BoundReport> claims{upper};
    auto a = audit_counts(rows, claims);
    ASSERT_TRUE(a.fit);
    EXPECT_NEAR(a.fit->slope, 5.0, 1e-9);
    EXPECT_TRUE(a.has_warning());
    EXPECT_FALSE(a.hard_failure());
    bool named = false;
    for (const auto& f : a.flags) named = named || f.message.find("empirically questionable") != std::string::npos;
    EXPECT_TRUE(named);
    claims[0].exponent = Rational(48, 10);
    EXPECT_FALSE(audit_counts(rows, claims).has_warning());
}

TEST(Audit, LowerViolationSeverityFollowsPreconditions) {
    std::vector<SweepRow> rows{{10, BigInt(5), "given", 0, {}}};
    BoundReport lower;
    lower.direction = Direction::Lower;
    lower.values.emplace_back(10, 6);
    std::vector<BoundReport> claims{lower};
    EXPECT_TRUE(audit_counts(rows, claims).hard_failure());
    claims[0].preconditions.push_back({"unmet", false});
    auto a = audit_counts(rows, claims);
    EXPECT_FALSE(a.hard_failure());
    EXPECT_TRUE(a.has_warning());
}

TEST(Audit, SignRuleDiscrepancyNoted) {
    auto eq = parse_text("x1^2 - y1^2 = 0");
    auto a = audit(eq, {Domain::symmetric(3)}, {});
    ASSERT_EQ(a.rows.size(), 1u);
    EXPECT_EQ(*a.rows[0].count, 13);  // x = y or x = -y, the origin once
    bool noted = false;
    for (const auto& f : a.flags)
        noted = noted || (f.severity == AuditSeverity::Note && f.message.find("gives 6") != std::string::npos);
    EXPECT_TRUE(noted);
}

TEST(Audit, RefusalsPropagate) {
    Budget tiny;
    tiny.evaluations = 10;
    tiny.map_entries = 10;
    auto eq = parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0");
    EXPECT_THROW(audit(eq, {Domain::natural(50)}, {}, tiny), BudgetExceeded);
}
