// diophantine: count, bound, generate, sweep and audit diagonal equations.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 budget refusal,
// 3 audit hard failure.

#include <diophantine.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace dio = diophantine;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_budget = 2;
constexpr int exit_audit = 3;

struct Input {
    std::string eq_file;
    std::string expr;
};

void add_input(CLI::App* cmd, Input& in, bool required = true) {
    auto* f = cmd->add_option("--eq", in.eq_file, "equation file (JSON or text)")->check(CLI::ExistingFile);
    auto* e = cmd->add_option("--expr", in.expr, "equation text, e.g. \"x1^3 + x2^3 + x3^3 - 1 = 0\"");
    f->excludes(e);
    if (required) cmd->callback([cmd, f, e] {
        if (f->count() + e->count() == 0) throw CLI::RequiredError(cmd->get_name() + ": --eq or --expr");
    });
}

dio::DiagonalEquation load(const Input& in) {
    if (!in.expr.empty()) return dio::parse_any(in.expr);
    std::ifstream f(in.eq_file, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read " + in.eq_file);
    std::stringstream ss;
    ss << f.rdbuf();
    return dio::parse_any(ss.str());
}

dio::DomainKind domain_kind(const std::string& name, const dio::DiagonalEquation& eq) {
    if (name == "natural") return dio::DomainKind::Natural;
    if (name == "integer") return dio::DomainKind::SymmetricInteger;
    return eq.constant() == 0 ? dio::DomainKind::Natural : dio::DomainKind::SymmetricInteger;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

dio::BigInt bigint_arg(const std::string& s, const std::string& what) {
    auto v = dio::parse_bigint(s);
    if (!v) throw std::invalid_argument(what + ": not an integer: '" + s + "'");
    return *v;
}

std::vector<dio::BigInt> bigint_list(const std::string& s, const std::string& what) {
    std::vector<dio::BigInt> out;
    for (const auto& item : split(s, ',')) out.push_back(bigint_arg(item, what));
    return out;
}

std::vector<std::uint64_t> n_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (s.empty()) return out;
    for (const auto& item : split(s, ',')) {
        auto v = bigint_arg(item, "--Ns");
        if (v < 1) throw std::invalid_argument("--Ns: values must be positive");
        out.push_back(v.convert_to<std::uint64_t>());
    }
    return out;
}

dio::Rational rational_arg(const std::string& s) {
    auto parts = split(s, '/');
    if (parts.size() == 1) return dio::Rational(bigint_arg(parts[0], "exponent"));
    if (parts.size() == 2) {
        auto den = bigint_arg(parts[1], "exponent");
        if (den == 0) throw std::invalid_argument("exponent: zero denominator");
        return dio::Rational(bigint_arg(parts[0], "exponent"), den);
    }
    throw std::invalid_argument("exponent: expected P or P/Q, got '" + s + "'");
}

// "c*N^p", "N^p" or "c": values floor(c N^p) at each N.
dio::BoundReport lower_claim(const std::string& text, std::span<const std::uint64_t> ns) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    dio::BigInt c = 1;
    dio::Rational p = 0;
    auto npos = s.find('N');
    if (npos == std::string::npos) {
        c = bigint_arg(s, "--claim-lower");
    } else {
        std::string head = s.substr(0, npos);
        if (!head.empty()) {
            if (head.back() != '*') throw std::invalid_argument("--claim-lower: expected c*N^p");
            c = bigint_arg(head.substr(0, head.size() - 1), "--claim-lower");
        }
        std::string tail = s.substr(npos + 1);
        if (tail.empty()) p = 1;
        else if (tail[0] == '^') p = rational_arg(tail.substr(1));
        else throw std::invalid_argument("--claim-lower: expected c*N^p");
    }
    if (c < 0 || p < 0) throw std::invalid_argument("--claim-lower: c and p must be non-negative");
    dio::BoundReport b;
    b.direction = dio::Direction::Lower;
    b.regime = dio::Regime::Composition;
    b.exponent = p;
    b.notes.push_back("user claim " + text);
    auto num = numerator(p).convert_to<unsigned>();
    auto den = denominator(p).convert_to<unsigned>();
    for (auto n : ns)
        b.values.emplace_back(n, dio::iroot(dio::ipow(c, den) * dio::ipow(dio::BigInt(n), num), den));
    return b;
}

// Rows from a sweep CSV (N,count,...); used to audit counts computed elsewhere.
std::vector<dio::SweepRow> read_rows(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read " + path);
    std::vector<dio::SweepRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("N,", 0) == 0) continue;
        }
        auto cells = split(line, ',');
        if (cells.size() < 2) throw std::invalid_argument(path + ": malformed row '" + line + "'");
        dio::SweepRow r;
        r.n = bigint_arg(cells[0], path).convert_to<std::uint64_t>();
        if (!cells[1].empty()) r.count = bigint_arg(cells[1], path);
        r.method = cells.size() > 2 ? cells[2] : "given";
        rows.push_back(std::move(r));
    }
    return rows;
}

void print_members(const std::vector<std::vector<dio::BigInt>>& members, const dio::DiagonalEquation& eq, bool json) {
    if (json) {
        auto arr = nlohmann::json::array();
        for (const auto& m : members) {
            nlohmann::json row = nlohmann::json::object();
            for (std::size_t i = 0; i < m.size(); ++i) row[eq.variables()[i]] = m[i].str();
            arr.push_back(row);
        }
        std::cout << arr.dump(2) << "\n";
        return;
    }
    std::string head;
    for (const auto& v : eq.variables()) head += (head.empty() ? "" : ",") + v;
    std::cout << head << "\n";
    for (const auto& m : members) {
        std::string line;
        for (const auto& v : m) line += (line.empty() ? "" : ",") + v.str();
        std::cout << line << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting, bounds and solution families for diagonal Diophantine equations"};
    app.require_subcommand(1);

    Input in;
    std::string domain = "auto";
    std::string method = "auto";
    std::string ns_text;
    std::string out_path;
    std::string family;
    std::string pell_d;
    std::string pell_fund;
    std::string base;
    std::string leading;
    std::string counts_path;
    std::vector<std::string> claim_lower;
    std::vector<std::string> claim_upper;
    std::uint64_t n = 0;
    std::size_t limit = 10;
    bool json = false;

    auto* parse = app.add_subcommand("parse", "parse and print the canonical form and structure");
    add_input(parse, in);
    parse->add_flag("--json", json, "emit JSON");

    auto* count = app.add_subcommand("count", "exact solution count in a box");
    add_input(count, in);
    count->add_option("--domain", domain, "natural | integer (default: natural when homogeneous)")
        ->check(CLI::IsMember({"auto", "natural", "integer"}));
    count->add_option("--N", n, "box side")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    count->add_option("--method", method, "auto | brute | mitm | conv")
        ->check(CLI::IsMember({"auto", "brute", "mitm", "conv"}));
    count->add_flag("--json", json, "emit JSON");

    auto* bound = app.add_subcommand("bound", "bounds that apply to the equation");
    add_input(bound, in);
    bound->add_option("--domain", domain)->check(CLI::IsMember({"auto", "natural", "integer"}));
    bound->add_option("--Ns", ns_text, "evaluate lower bounds at these N (comma list)");
    bound->add_flag("--json", json, "emit JSON");

    auto* generate = app.add_subcommand("generate", "emit verified members of a solution family");
    add_input(generate, in, false);
    generate->add_option("--family", family)->required()->check(CLI::IsMember({"parametric", "pell", "scaling"}));
    generate->add_option("--pell-D", pell_d, "non-square D for x^2 - D y^2 = 1");
    generate->add_option("--pell-fund", pell_fund, "fundamental solution X,Y");
    generate->add_option("--base", base, "base solution for scaling, in variable order");
    generate->add_option("--lead", leading, "leading variable for the parametric family");
    generate->add_option("--limit", limit, "number of members")->check(CLI::Range(std::size_t{0}, std::size_t{100000}));
    generate->add_flag("--json", json, "emit JSON");

    auto* sweep = app.add_subcommand("sweep", "exact counts over a list of N");
    add_input(sweep, in);
    sweep->add_option("--domain", domain)->check(CLI::IsMember({"auto", "natural", "integer"}));
    sweep->add_option("--Ns", ns_text, "strictly increasing comma list")->required();
    sweep->add_option("--out", out_path, "CSV output file (default: stdout)");
    sweep->add_flag("--json", json, "emit JSON rows on stdout");

    auto* audit = app.add_subcommand("audit", "sweep, fit and check bounds");
    add_input(audit, in);
    audit->add_option("--domain", domain)->check(CLI::IsMember({"auto", "natural", "integer"}));
    audit->add_option("--Ns", ns_text, "strictly increasing comma list");
    audit->add_option("--counts", counts_path, "audit counts from a sweep CSV instead of counting");
    audit->add_option("--claim-lower", claim_lower, "extra lower claim c*N^p");
    audit->add_option("--claim-upper", claim_upper, "extra upper exponent P or P/Q");
    audit->add_flag("--json", json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        auto budget = dio::Budget::from_environment();

        if (parse->parsed()) {
            auto eq = load(in);
            if (json) {
                nlohmann::json j{{"equation", dio::to_json_value(eq)},
                                 {"text", dio::render(eq)},
                                 {"structure", dio::to_json_value(dio::classify(eq))},
                                 {"symmetric_pair_form", dio::is_symmetric_pair_form(eq)}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << dio::render(eq) << "\n" << dio::to_json(eq) << "\n";
            }
            return 0;
        }

        if (count->parsed()) {
            auto eq = load(in);
            dio::Domain d(domain_kind(domain, eq), n);
            dio::SolutionCount c =
                method == "auto"    ? dio::count_auto(eq, d, budget)
                : method == "brute" ? dio::count_bruteforce(eq, d, budget)
                : method == "mitm"  ? dio::count_mitm(eq, d, budget)
                                    : dio::count_convolution(eq, d, budget);
            if (json) {
                nlohmann::json j{{"equation", dio::render(eq)},
                                 {"domain", dio::to_string(d.kind)},
                                 {"N", n},
                                 {"count", c.count.str()},
                                 {"method", dio::to_string(c.method)},
                                 {"elapsed_ms", c.elapsed.count()}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << c.count << "\n";
            }
            return 0;
        }

        if (bound->parsed()) {
            auto eq = load(in);
            auto kind = domain_kind(domain, eq);
            auto ns = n_list(ns_text);
            auto b = dio::applicable_bounds(eq, kind, ns, budget);
            if (json) {
                auto arr = nlohmann::json::array();
                for (const auto& r : b.bounds) arr.push_back(dio::to_json_value(r));
                nlohmann::json j{{"equation", dio::render(eq)},
                                 {"domain", dio::to_string(kind)},
                                 {"bounds", arr},
                                 {"notes", b.notes}};
                j["lower_growth"] = b.lower_growth ? nlohmann::json(*b.lower_growth) : nlohmann::json(nullptr);
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& r : b.bounds) {
                    std::cout << dio::to_string(r.direction) << " " << r.describe() << " ["
                              << dio::to_string(r.regime) << "]" << (r.authoritative() ? "" : " advisory") << "\n";
                    for (const auto& [vn, v] : r.values) std::cout << "  N=" << vn << ": " << v << "\n";
                }
                if (b.lower_growth) std::cout << "lower growth: " << *b.lower_growth << "\n";
                for (const auto& note : b.notes) std::cout << "note: " << note << "\n";
            }
            return 0;
        }

        if (generate->parsed()) {
            if (family == "pell") {
                if (pell_d.empty() || pell_fund.empty())
                    throw std::invalid_argument("generate --family pell needs --pell-D and --pell-fund");
                auto fund = bigint_list(pell_fund, "--pell-fund");
                if (fund.size() != 2) throw std::invalid_argument("--pell-fund expects X,Y");
                auto D = bigint_arg(pell_d, "--pell-D");
                auto f = dio::pell_family(D, fund[0], fund[1]);
                print_members(f.take(limit), f.equation(), json);
                return 0;
            }
            if (in.eq_file.empty() && in.expr.empty())
                throw std::invalid_argument("generate --family " + family + " needs --eq or --expr");
            auto eq = load(in);
            if (family == "parametric") {
                auto f = dio::parametric_family(eq, leading.empty() ? std::nullopt : std::optional(leading));
                print_members(f.take(limit), eq, json);
            } else {
                if (base.empty()) throw std::invalid_argument("generate --family scaling needs --base");
                auto f = dio::scaling_family(eq, bigint_list(base, "--base"));
                print_members(f.take(limit), eq, json);
            }
            return 0;
        }

        if (sweep->parsed()) {
            auto eq = load(in);
            auto ns = n_list(ns_text);
            auto rows = dio::sweep(eq, domain_kind(domain, eq), ns, budget);
            auto csv = dio::to_csv(rows);
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw std::invalid_argument("cannot write " + out_path);
                f << csv;
            } else if (!json) {
                std::cout << csv;
            }
            if (json) std::cout << dio::rows_to_json(rows).dump(2) << "\n";
            for (const auto& r : rows)
                if (!r.count) return exit_budget;
            return 0;
        }

        if (audit->parsed()) {
            auto eq = load(in);
            auto kind = domain_kind(domain, eq);
            std::vector<dio::SweepRow> given;
            std::vector<std::uint64_t> ns;
            if (!counts_path.empty()) {
                given = read_rows(counts_path);
                for (const auto& r : given) ns.push_back(r.n);
            } else {
                ns = n_list(ns_text);
                if (ns.empty()) throw std::invalid_argument("audit needs --Ns or --counts");
            }
            dio::ReportOptions options;
            options.domain = kind;
            options.ns = ns;
            options.budget = budget;
            for (const auto& c : claim_lower) options.extra_claims.push_back(lower_claim(c, ns));
            for (const auto& c : claim_upper) {
                dio::BoundReport b;
                b.direction = dio::Direction::Upper;
                b.regime = dio::Regime::Trivial;
                b.exponent = rational_arg(c);
                b.notes.push_back("user claim N^" + c);
                options.extra_claims.push_back(std::move(b));
            }
            auto r = [&] {
                if (given.empty()) return dio::report(eq, options);
                auto applicable = dio::applicable_bounds(eq, kind, ns, budget);
                auto bounds = applicable.bounds;
                bounds.insert(bounds.end(), options.extra_claims.begin(), options.extra_claims.end());
                return dio::Report{eq,
                                   dio::classify(eq),
                                   kind,
                                   bounds,
                                   applicable.notes,
                                   applicable.lower_growth,
                                   dio::audit_counts(given, bounds)};
            }();
            std::cout << (json ? dio::to_json_value(r).dump(2) + "\n" : dio::to_text(r));
            return r.audit.hard_failure() ? exit_audit : 0;
        }
    } catch (const dio::BudgetExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return exit_budget;
    } catch (const dio::ParseError& e) {
        std::cerr << "parse error at offset " << e.diagnostic().offset << ": " << e.diagnostic().message << "\n";
        return exit_usage;
    } catch (const dio::ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
