#pragma once

// Text and JSON forms of DiagonalEquation.
//
// Text grammar (whitespace insignificant):
//
//     equation := sum "=" "0"
//     sum      := ["+"|"-"] term (("+"|"-") term)*
//     term     := [int "*"] var ["^" posint] | int
//
// The Unicode minus sign U+2212 is accepted wherever '-' is.
//
// JSON schema:
//
//     {"terms":[{"coeff":"-2","var":"x2","exp":2}, ...], "constant":"0"}
//
// Integers are decimal strings so coefficients never pass through a double.

#include "equation.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diophantine {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    std::size_t offset = 0;
    std::string message;
    Severity severity = Severity::Error;
};

class ParseError : public std::invalid_argument {
public:
    explicit ParseError(ParseDiagnostic d)
        : std::invalid_argument("offset " + std::to_string(d.offset) + ": " + d.message),
          diagnostic_(std::move(d)) {}

    const ParseDiagnostic& diagnostic() const noexcept { return diagnostic_; }

private:
    ParseDiagnostic diagnostic_;
};

namespace detail {

class TextParser {
public:
    explicit TextParser(std::string_view input) : in_(input) {}

    DiagonalEquation parse() {
        std::vector<std::pair<Term, std::size_t>> terms;
        BigInt constant = 0;

        skip_ws();
        bool negative = false;
        if (auto s = sign()) negative = *s;
        skip_ws();
        if (at_end() || peek() == '=') fail("expected a term");
        parse_term(negative, terms, constant);

        while (true) {
            skip_ws();
            if (at_end()) fail("expected '='");
            if (peek() == '=') break;
            auto s = sign();
            if (!s) fail("expected '+', '-' or '='");
            skip_ws();
            parse_term(*s, terms, constant);
        }
        ++pos_;  // '='
        skip_ws();
        std::size_t rhs = pos_;
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("right-hand side must be 0");
        auto digits = read_digits();
        if (digits.find_first_not_of('0') != std::string_view::npos) fail_at(rhs, "right-hand side must be 0");
        skip_ws();
        if (!at_end()) fail("unexpected trailing input");

        if (terms.empty()) fail_at(0, "equation has no variable terms");

        std::map<std::pair<std::string, unsigned>, std::size_t> seen;
        std::map<std::string, int> occurrences;
        std::vector<Term> plain;
        for (auto& [term, where] : terms) {
            auto key = std::make_pair(term.var, term.exp);
            if (seen.count(key))
                fail_at(where, "variable '" + term.var + "' appears twice with exponent " +
                                   std::to_string(term.exp));
            seen.emplace(key, where);
            if (++occurrences[term.var] > 2)
                fail_at(where, "variable '" + term.var + "' appears in more than two terms");
            plain.push_back(std::move(term));
        }
        return DiagonalEquation(std::move(plain), std::move(constant));
    }

private:
    bool at_end() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(std::min(pos_, in_.size()), msg); }
    [[noreturn]] static void fail_at(std::size_t where, const std::string& msg) {
        throw ParseError({where, msg, Severity::Error});
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    // true for minus, false for plus, nullopt if neither.
    std::optional<bool> sign() {
        if (at_end()) return std::nullopt;
        if (peek() == '+') {
            ++pos_;
            return false;
        }
        if (peek() == '-') {
            ++pos_;
            return true;
        }
        if (in_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return std::nullopt;
    }

    std::string_view read_digits() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        return in_.substr(start, pos_ - start);
    }

    std::string_view read_identifier() {
        std::size_t start = pos_;
        ++pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        return in_.substr(start, pos_ - start);
    }

    void parse_term(bool negative, std::vector<std::pair<Term, std::size_t>>& terms, BigInt& constant) {
        std::size_t start = pos_;
        if (at_end()) fail("expected a term");
        BigInt coeff = 1;
        bool has_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = *parse_bigint(read_digits());
            has_coeff = true;
            skip_ws();
            if (at_end() || peek() != '*') {
                constant += negative ? BigInt(-coeff) : coeff;
                return;
            }
            ++pos_;
            skip_ws();
        }
        if (at_end() || !std::isalpha(static_cast<unsigned char>(peek())))
            fail(has_coeff ? "expected a variable after '*'" : "expected a term");
        std::string var(read_identifier());
        skip_ws();
        unsigned exp = 1;
        if (!at_end() && peek() == '^') {
            ++pos_;
            skip_ws();
            std::size_t where = pos_;
            auto digits = read_digits();
            if (digits.empty()) fail("expected exponent after '^'");
            auto value = *parse_bigint(digits);
            if (value < 1) fail_at(where, "exponent must be a positive integer");
            if (value > 4096) fail_at(where, "exponent too large");
            exp = value.convert_to<unsigned>();
        }
        if (coeff == 0) fail_at(start, "coefficient must be nonzero");
        if (negative) coeff = -coeff;
        terms.emplace_back(Term(std::move(coeff), std::move(var), exp), start);
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline DiagonalEquation parse_text(std::string_view input) {
    return detail::TextParser(input).parse();
}

// Canonical text form; parse_text(render(eq)) == eq.
inline std::string render(const DiagonalEquation& eq) {
    std::string out;
    bool first = true;
    auto emit_sign = [&](bool negative) {
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
    };
    for (const auto& t : eq.terms()) {
        emit_sign(t.coeff < 0);
        BigInt mag = abs(t.coeff);
        if (mag != 1) out += mag.str() + "*";
        out += t.var;
        if (t.exp != 1) out += "^" + std::to_string(t.exp);
    }
    if (eq.constant() != 0) {
        emit_sign(eq.constant() < 0);
        out += BigInt(abs(eq.constant())).str();
    }
    out += " = 0";
    return out;
}

inline nlohmann::json to_json_value(const DiagonalEquation& eq) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : eq.terms())
        terms.push_back({{"coeff", t.coeff.str()}, {"var", t.var}, {"exp", t.exp}});
    return {{"terms", std::move(terms)}, {"constant", eq.constant().str()}};
}

inline std::string to_json(const DiagonalEquation& eq) { return to_json_value(eq).dump(); }

inline DiagonalEquation from_json_value(const nlohmann::json& j) {
    auto bad = [](const std::string& msg) -> ParseError { return ParseError({0, msg, Severity::Error}); };
    if (!j.is_object()) throw bad("equation must be a JSON object");
    if (!j.contains("terms") || !j["terms"].is_array()) throw bad("missing array field 'terms'");
    if (!j.contains("constant") || !j["constant"].is_string())
        throw bad("missing string field 'constant'");
    for (const auto& item : j.items())
        if (item.key() != "terms" && item.key() != "constant") throw bad("unknown field '" + item.key() + "'");

    auto constant = parse_bigint(j["constant"].get<std::string>());
    if (!constant) throw bad("constant is not a decimal integer");

    std::vector<Term> terms;
    std::size_t index = 0;
    for (const auto& t : j["terms"]) {
        std::string where = "terms[" + std::to_string(index++) + "]";
        if (!t.is_object()) throw bad(where + " must be an object");
        if (!t.contains("coeff") || !t["coeff"].is_string()) throw bad(where + ".coeff must be a string");
        if (!t.contains("var") || !t["var"].is_string()) throw bad(where + ".var must be a string");
        if (!t.contains("exp") || !t["exp"].is_number_integer()) throw bad(where + ".exp must be an integer");
        auto coeff = parse_bigint(t["coeff"].get<std::string>());
        if (!coeff) throw bad(where + ".coeff is not a decimal integer");
        auto exp = t["exp"].get<std::int64_t>();
        if (exp < 1 || exp > 4096) throw bad(where + ".exp out of range");
        try {
            terms.emplace_back(std::move(*coeff), t["var"].get<std::string>(), static_cast<unsigned>(exp));
        } catch (const std::invalid_argument& e) {
            throw bad(where + ": " + e.what());
        }
    }
    try {
        return DiagonalEquation(std::move(terms), std::move(*constant));
    } catch (const std::invalid_argument& e) {
        throw bad(e.what());
    }
}

inline DiagonalEquation from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError({std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size()), e.what(),
                          Severity::Error});
    }
    return from_json_value(j);
}

// JSON when the text starts with '{', otherwise the text grammar.
inline DiagonalEquation parse_any(std::string_view input) {
    auto first = input.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && input[first] == '{') return from_json(input);
    return parse_text(input);
}

}  // namespace diophantine
