#include <diophantine.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace diophantine;

namespace {

const char* mixed_degree_text =
    "x1^5 + x2^4 + x3^4 + x4^3 + x5^3 + x6^3 - y1^5 - y2^4 - y3^4 - y4^3 - y5^3 - y6^3 = 0";

std::size_t offset_of_failure(std::string_view input) {
    try {
        parse_text(input);
    } catch (const ParseError& e) {
        return e.diagnostic().offset;
    }
    ADD_FAILURE() << "expected a parse error for '" << input << "'";
    return 0;
}

}  // namespace

TEST(ParseText, ThreeCubes) {
    auto eq = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0");
    ASSERT_EQ(eq.terms().size(), 3u);
    for (const auto& t : eq.terms()) {
        EXPECT_EQ(t.exp, 3u);
        EXPECT_EQ(t.coeff, 1);
    }
    EXPECT_EQ(eq.constant(), -1);
}

TEST(ParseText, CoefficientsAndImplicitExponent) {
    auto eq = parse_text("x1 - 2*x2^2 = 0");
    EXPECT_EQ(eq.terms_of("x1"), (std::vector<Term>{{1, "x1", 1}}));
    EXPECT_EQ(eq.terms_of("x2"), (std::vector<Term>{{-2, "x2", 2}}));
    EXPECT_EQ(eq.constant(), 0);
}

TEST(ParseText, UnicodeMinusAndSpacing) {
    EXPECT_EQ(parse_text("x^2 \xE2\x88\x92 2*y^2 \xE2\x88\x92 1 = 0"), parse_text("x^2-2*y^2-1=0"));
    EXPECT_EQ(parse_text("-3 + x^2 = 0").constant(), -3);
}

TEST(ParseText, Errors) {
    EXPECT_THROW(parse_text("= 0"), ParseError);
    EXPECT_THROW(parse_text(""), ParseError);
    EXPECT_THROW(parse_text("x^2 + x^2 = 0"), ParseError);
    EXPECT_THROW(parse_text("x^2 = 1"), ParseError);
    EXPECT_THROW(parse_text("x^0 = 0"), ParseError);
    EXPECT_THROW(parse_text("0*x = 0"), ParseError);
    EXPECT_THROW(parse_text("x + + y = 0"), ParseError);
    EXPECT_EQ(offset_of_failure("x1^^2 = 0"), 3u);
    EXPECT_EQ(offset_of_failure("x1 + y1 = 0 junk"), 12u);
}

TEST(ParseText, RepeatedVariableWithOtherExponentIsAllowed) {
    auto eq = parse_text("x1^3 - x1^2 + x2^5 - x2^3 = 0");
    EXPECT_EQ(eq.variable_count(), 2u);
    EXPECT_EQ(eq.terms().size(), 4u);
}

TEST(Render, RoundTripIsIdempotent) {
    for (const char* text : {"x1^3 + x2^3 + x3^3 - 1 = 0", "x1 - 2*x2^2 = 0", "2*x1^3 - 3*x2^2 = 0",
                             "x1^3 + x2^3 + x3^2 - 2*x4^2 - 1 = 0", mixed_degree_text, "-x = 0"}) {
        auto eq = parse_text(text);
        auto once = render(eq);
        EXPECT_EQ(parse_text(once), eq) << text;
        EXPECT_EQ(render(parse_text(once)), once) << text;
    }
    EXPECT_EQ(render(parse_text("x1 - 2*x2^2 = 0")), "-2*x2^2 + x1 = 0");
}

TEST(Json, RoundTrip) {
    auto eq = parse_text(mixed_degree_text);
    EXPECT_EQ(eq.terms().size(), 12u);
    EXPECT_EQ(from_json(to_json(eq)), eq);
    auto big = parse_text("123456789012345678901234567890*x^2 - 98765432109876543210 = 0");
    EXPECT_EQ(from_json(to_json(big)), big);
    EXPECT_EQ(parse_any(to_json(big)), big);
}

TEST(Json, SchemaViolations) {
    EXPECT_THROW(from_json(R"({"terms":[],"constant":"0"})"), ParseError);
    EXPECT_THROW(from_json(R"({"terms":[{"coeff":1,"var":"x","exp":2}],"constant":"0"})"), ParseError);
    EXPECT_THROW(from_json(R"({"terms":[{"coeff":"1","var":"x","exp":2}]})"), ParseError);
    EXPECT_THROW(from_json(R"({"terms":[{"coeff":"1","var":"x","exp":0}],"constant":"0"})"), ParseError);
    EXPECT_THROW(from_json(R"({"terms":[{"coeff":"1","var":"x","exp":2}],"constant":"0","x":1})"), ParseError);
    EXPECT_THROW(from_json(R"({"terms":[)"), ParseError);
    EXPECT_NO_THROW(from_json(R"({"terms":[{"coeff":"1","var":"x","exp":2}],"constant":"-4"})"));
}

// Random byte strings and mutations of valid inputs: either an equation
// or a diagnostic whose offset lies inside the input.
TEST(ParseText, FuzzNeverCrashes) {
    std::mt19937_64 rng(2024);
    const std::string alphabet = "xyz0123456789^*+-= _\t()/.\xE2\x88\x92";
    const std::vector<std::string> seeds = {"x1^3 + x2^3 + x3^3 - 1 = 0", "x1 - 2*x2^2 = 0", mixed_degree_text};
    std::size_t parsed = 0, rejected = 0;
    for (int i = 0; i < 20000; ++i) {
        std::string input;
        if (i % 2 == 0) {
            std::size_t len = rng() % 40;
            for (std::size_t k = 0; k < len; ++k) input += alphabet[rng() % alphabet.size()];
        } else {
            input = seeds[rng() % seeds.size()];
            std::size_t edits = 1 + rng() % 4;
            for (std::size_t k = 0; k < edits && !input.empty(); ++k) {
                std::size_t at = rng() % input.size();
                switch (rng() % 3) {
                    case 0: input.erase(at, 1); break;
                    case 1: input.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
                    default: input[at] = alphabet[rng() % alphabet.size()];
                }
            }
        }
        try {
            auto eq = parse_text(input);
            EXPECT_EQ(parse_text(render(eq)), eq) << input;
            ++parsed;
        } catch (const ParseError& e) {
            EXPECT_LE(e.diagnostic().offset, input.size()) << input;
            EXPECT_FALSE(e.diagnostic().message.empty());
            ++rejected;
        }
    }
    EXPECT_GT(parsed, 0u);
    EXPECT_GT(rejected, 0u);
}
