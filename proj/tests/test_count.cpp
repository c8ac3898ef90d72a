#include <diophantine.hpp>

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace diophantine;

namespace {

// Independent oracle: odometer over the box, exact evaluation per tuple.
BigInt naive_count(const DiagonalEquation& eq, const Domain& d) {
    std::vector<BigInt> x(eq.variable_count(), BigInt(d.lo()));
    BigInt count = 0;
    while (true) {
        if (evaluate(eq, make_assignment(eq, x)) == 0) ++count;
        std::size_t i = 0;
        while (i < x.size() && x[i] == d.hi()) x[i++] = d.lo();
        if (i == x.size()) break;
        ++x[i];
    }
    return count;
}

std::string power_sum_text(unsigned k, std::size_t s) {
    std::string text;
    for (std::size_t i = 1; i <= s; ++i) text += "+ x" + std::to_string(i) + "^" + std::to_string(k) + " ";
    for (std::size_t i = 1; i <= s; ++i) text += "- y" + std::to_string(i) + "^" + std::to_string(k) + " ";
    return text + "= 0";
}

DiagonalEquation random_equation(std::mt19937_64& rng, bool symmetric_blocks) {
    std::uniform_int_distribution<int> exp(1, 5), coeff(-3, 3), cst(-6, 6);
    std::vector<Term> terms;
    if (symmetric_blocks) {
        // x^k - y^k pairs with matching coefficients, plus a constant sometimes.
        std::size_t pairs = 1 + rng() % 3;
        for (std::size_t i = 0; i < pairs; ++i) {
            int c = 0;
            while (c == 0) c = coeff(rng);
            unsigned e = exp(rng);
            terms.emplace_back(c, "x" + std::to_string(i + 1), e);
            terms.emplace_back(-c, "y" + std::to_string(i + 1), e);
        }
        return DiagonalEquation(std::move(terms), rng() % 2 ? 0 : cst(rng));
    }
    std::size_t v = 1 + rng() % 6;
    for (std::size_t i = 0; i < v; ++i) {
        int c = 0;
        while (c == 0) c = coeff(rng);
        unsigned e = exp(rng);
        terms.emplace_back(c, "v" + std::to_string(i + 1), e);
        if (rng() % 5 == 0) terms.emplace_back(-c, "v" + std::to_string(i + 1), e == 1 ? 2 : e - 1);
    }
    return DiagonalEquation(std::move(terms), rng() % 2 ? 0 : cst(rng));
}

}  // namespace

TEST(CountBrute, Examples) {
    auto pairs = parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0");
    EXPECT_EQ(count_bruteforce(pairs, Domain::natural(2)).count, 6);
    auto cubes = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0");
    EXPECT_EQ(count_bruteforce(cubes, Domain::symmetric(2)).count, 12);
    EXPECT_EQ(naive_count(cubes, Domain::symmetric(2)), 12);
    for (unsigned k = 1; k <= 5; ++k)
        EXPECT_EQ(count_bruteforce(parse_text("x^" + std::to_string(k) + " - y^" + std::to_string(k) + " = 0"),
                                   Domain::natural(9))
                      .count,
                  9);
}

TEST(CountMitm, MatchesExamples) {
    auto pairs = parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0");
    EXPECT_EQ(count_mitm(pairs, Domain::natural(2)).count, 6);
    auto cubes = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0");
    EXPECT_EQ(count_mitm(cubes, Domain::symmetric(2)).count, 12);
    EXPECT_GE(count_mitm(cubes, Domain::symmetric(50)).count, 101);
    EXPECT_EQ(count_mitm(parse_text("x^3 - y^3 = 0"), Domain::natural(17)).count, 17);
}

TEST(CountMitm, EqualsSumOfSquaredRepresentations) {
    auto pairs = parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0");
    auto r = power_sum_representation(2, 2, Domain::natural(100));
    EXPECT_EQ(count_mitm(pairs, Domain::natural(100)).count, r.sum_of_squares());
    EXPECT_EQ(count_convolution(pairs, Domain::natural(100)).count, r.sum_of_squares());
}

TEST(CountConvolution, Examples) {
    auto r = power_sum_representation(2, 2, Domain::natural(2));
    EXPECT_EQ(r(2), 1u);
    EXPECT_EQ(r(5), 2u);
    EXPECT_EQ(r(8), 1u);
    EXPECT_EQ(r.support(), 3u);
    EXPECT_EQ(count_convolution(parse_text("x1^2 + x2^2 - y1^2 - y2^2 = 0"), Domain::natural(2)).count, 6);
    EXPECT_EQ(count_convolution(parse_text("x - y = 0"), Domain::natural(37)).count, 37);
    auto six = parse_text(power_sum_text(3, 6));
    EXPECT_EQ(count_convolution(six, Domain::natural(12)).count, count_mitm(six, Domain::natural(12)).count);
}

// At N=40 each half has 40^6 tuples, beyond the MITM budget; compare with a
// map-based dynamic program over sums of cubes instead.
TEST(CountConvolution, SixCubePairsAtForty) {
    std::map<std::int64_t, BigInt> r{{0, 1}};
    for (int i = 0; i < 6; ++i) {
        std::map<std::int64_t, BigInt> next;
        for (const auto& [v, m] : r)
            for (std::int64_t x = 1; x <= 40; ++x) next[v + x * x * x] += m;
        r = std::move(next);
    }
    BigInt expect = 0;
    for (const auto& [v, m] : r) expect += m * m;
    auto six = parse_text(power_sum_text(3, 6));
    EXPECT_EQ(count_convolution(six, Domain::natural(40)).count, expect);
    EXPECT_THROW(count_mitm(six, Domain::natural(40)), BudgetExceeded);
}

// All methods against the independent oracle on random equations.
TEST(CountOracle, RandomEquationsAgree) {
    std::mt19937_64 rng(20240601);
    std::size_t checked = 0, with_conv = 0;
    for (int i = 0; i < 400; ++i) {
        auto eq = random_equation(rng, i % 3 == 0);
        auto kind = i % 2 ? DomainKind::Natural : DomainKind::SymmetricInteger;
        std::uint64_t n = 1 + rng() % 10;
        if (kind == DomainKind::SymmetricInteger) n = 1 + rng() % 4;
        Domain d(kind, n);
        if (std::pow(static_cast<double>(d.size()), static_cast<double>(eq.variable_count())) > 2e5) continue;
        auto expect = naive_count(eq, d);
        EXPECT_EQ(count_bruteforce(eq, d).count, expect) << render(eq) << " N=" << n;
        if (eq.variable_count() >= 2) {
            EXPECT_EQ(count_mitm(eq, d).count, expect) << render(eq) << " N=" << n;
        }
        try {
            EXPECT_EQ(count_convolution(eq, d).count, expect) << render(eq) << " N=" << n;
            ++with_conv;
        } catch (const BudgetExceeded&) {
        }
        EXPECT_EQ(count_auto(eq, d).count, expect);
        ++checked;
    }
    EXPECT_GE(checked, 200u);
    EXPECT_GE(with_conv, 100u);
}

TEST(CountOracle, BigCoefficientsFallBackToExactArithmetic) {
    auto eq = parse_text("x^5 - 4611686018427387904*y + 4611686018427387904 = 0");
    Domain d = Domain::symmetric(3);
    EXPECT_EQ(count_bruteforce(eq, d).count, naive_count(eq, d));
    EXPECT_EQ(count_mitm(eq, d).count, naive_count(eq, d));
    EXPECT_THROW(count_convolution(eq, d), BudgetExceeded);
    EXPECT_EQ(count_auto(eq, d).count, naive_count(eq, d));
}

TEST(Parseval, RepresentationIdentities) {
    for (unsigned k = 1; k <= 4; ++k)
        for (std::size_t s = 1; s <= 3; ++s)
            for (std::uint64_t n : {1, 3, 7}) {
                auto d = Domain::natural(n);
                auto r = power_sum_representation(k, s, d);
                EXPECT_EQ(r.total(), ipow(BigInt(n), static_cast<unsigned>(s)));
                auto eq = parse_text(power_sum_text(k, s));
                EXPECT_EQ(count_convolution(eq, d).count, r.sum_of_squares());
                EXPECT_EQ(count_bruteforce(eq, d).count, r.sum_of_squares());
            }
}

TEST(PermMatching, SmallValues) {
    for (std::uint64_t n = 1; n <= 20; ++n) {
        EXPECT_EQ(perm_matching_count(1, n), n);
        EXPECT_EQ(perm_matching_count(2, n), 2 * n * n - n);
    }
    EXPECT_EQ(perm_matching_count(3, 2), 20);
}

// Enumerate (x, y) pairs with y a rearrangement of x directly.
TEST(PermMatching, AgreesWithEnumeration) {
    for (std::size_t s = 1; s <= 3; ++s)
        for (std::uint64_t n = 1; n <= 5; ++n) {
            std::uint64_t tuples = 1;
            for (std::size_t i = 0; i < s; ++i) tuples *= n;
            std::uint64_t count = 0;
            for (std::uint64_t a = 0; a < tuples; ++a)
                for (std::uint64_t b = 0; b < tuples; ++b) {
                    std::vector<std::uint64_t> xa, xb;
                    for (std::uint64_t u = a, w = b, i = 0; i < s; ++i, u /= n, w /= n) {
                        xa.push_back(u % n);
                        xb.push_back(w % n);
                    }
                    std::sort(xa.begin(), xa.end());
                    std::sort(xb.begin(), xb.end());
                    count += xa == xb;
                }
            EXPECT_EQ(perm_matching_count(s, n), count) << "s=" << s << " N=" << n;
        }
}

TEST(PermMatching, IsLowerBoundForPowerSums) {
    for (unsigned k = 1; k <= 3; ++k)
        for (std::size_t s = 1; s <= 3; ++s)
            for (std::uint64_t n = 1; n <= 12; ++n) {
                auto eq = parse_text(power_sum_text(k, s));
                EXPECT_GE(count_auto(eq, Domain::natural(n)).count, perm_matching_count(s, n))
                    << "k=" << k << " s=" << s << " N=" << n;
            }
}

TEST(Determinism, ThreadCountAndTermOrder) {
    auto eq = parse_text("x1^3 + 2*x2^3 - x3^3 - 2*x4^3 + x5^2 - 3 = 0");
    auto reordered = parse_text("-3 + x5^2 - 2*x4^3 - x3^3 + 2*x2^3 + x1^3 = 0");
    Domain d = Domain::symmetric(6);
    BigInt expect = count_bruteforce(eq, d).count;
    for (unsigned threads : {1u, 2u, 3u, 8u}) {
        Budget b;
        b.threads = threads;
        EXPECT_EQ(count_mitm(eq, d, b).count, expect);
        EXPECT_EQ(count_mitm(reordered, d, b).count, expect);
        EXPECT_EQ(count_convolution(reordered, d, b).count, expect);
    }
}

TEST(Budget, RefusalsNameTheResource) {
    Budget tiny;
    tiny.evaluations = 1000;
    tiny.map_entries = 100;
    auto eq = parse_text(power_sum_text(2, 3));
    try {
        count_bruteforce(eq, Domain::natural(10), tiny);
        FAIL() << "expected refusal";
    } catch (const BudgetExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("evaluations"), std::string::npos);
    }
    EXPECT_THROW(count_mitm(eq, Domain::natural(10), tiny), BudgetExceeded);
    EXPECT_THROW(count_auto(eq, Domain::natural(10), tiny), BudgetExceeded);
}

TEST(Budget, EnvironmentOverrides) {
    ::setenv("DIOPHANTINE_EVAL_BUDGET", "12345", 1);
    ::setenv("DIOPHANTINE_MAP_BUDGET", "678", 1);
    auto b = Budget::from_environment();
    EXPECT_EQ(b.evaluations, 12345u);
    EXPECT_EQ(b.map_entries, 678u);
    ::setenv("DIOPHANTINE_MAP_BUDGET", "lots", 1);
    EXPECT_THROW(Budget::from_environment(), std::invalid_argument);
    ::unsetenv("DIOPHANTINE_EVAL_BUDGET");
    ::unsetenv("DIOPHANTINE_MAP_BUDGET");
}

TEST(ChooseMethod, PrefersConvolutionForPowerSums) {
    auto eq = parse_text(power_sum_text(3, 3));
    EXPECT_EQ(choose_method(eq, Domain::natural(50), Budget{}), CountMethod::Convolution);
    EXPECT_EQ(count_auto(eq, Domain::natural(50)).method, CountMethod::Convolution);
}
