#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flagcalc/json_io.hpp"
#include "flagcalc/verify.hpp"

namespace flagcalc::cli {

/// What a CLI invocation produced.  Identical argv (including seeds) yields
/// byte-identical `out`.
struct OutputEnvelope {
    int exit_code = 0;
    std::string out;
};

namespace detail {

constexpr int kTableCapBeta = 5;
constexpr int kTableCapSchubert = 6;
constexpr int kClassEqCapN = 6;
constexpr int kReducedWordsCapN = 7;

inline std::vector<int> parse_word(const std::string& text) {
    std::vector<int> word;
    std::string token;
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) {
                word.push_back(std::stoi(token));
                token.clear();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            token.push_back(c);
        } else {
            throw ParseError("bad word entry in '" + text + "'");
        }
    }
    if (!token.empty()) word.push_back(std::stoi(token));
    return word;
}

inline std::vector<Poly> parse_poly_list(const std::string& text) {
    std::vector<Poly> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            out.push_back(Poly::parse(token));
            token.clear();
        }
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else
            token.push_back(c);
    }
    flush();
    return out;
}

inline FamilyKind parse_family(const std::string& name) {
    if (name == "schubert") return FamilyKind::Schubert;
    if (name == "grothendieck") return FamilyKind::Grothendieck;
    if (name == "beta") return FamilyKind::Beta;
    throw ParseError("unknown family '" + name + "' (schubert|grothendieck|beta)");
}

inline FormalGroupLaw load_law(const std::string& spec, int cap) {
    if (spec == "add") return make_additive(cap);
    if (spec == "mult") return make_multiplicative(cap);
    return law_from_file(spec);
}

inline std::vector<Permutation> sorted_group(int n) {
    std::vector<Permutation> perms;
    for (const auto& im : flagcalc::detail::all_permutation_images(n)) perms.emplace_back(im);
    std::stable_sort(perms.begin(), perms.end(), [](const Permutation& a, const Permutation& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.images() < b.images();
    });
    return perms;
}

inline Json verify_to_json(const VerifyResult& res) {
    Json j{{"suite", res.name}, {"cases", res.cases}, {"ok", res.ok()}};
    Json fails = Json::array();
    for (const auto& f : res.failures) fails.push_back(f);
    j["failures"] = fails;
    return j;
}

inline void print_verify(std::ostream& os, const VerifyResult& res, bool as_json) {
    if (as_json) {
        os << verify_to_json(res).dump(2) << "\n";
        return;
    }
    if (res.ok()) {
        os << "ok: " << res.name << " (" << res.cases << " cases)\n";
    } else {
        os << "FAIL: " << res.name << " (" << res.cases << " cases checked)\n";
        for (const auto& f : res.failures) os << "  " << f << "\n";
    }
}

}  // namespace detail

inline OutputEnvelope run(const std::vector<std::string>& args) {
    std::ostringstream out;
    int exit_code = 0;

    CLI::App app{"exact Schubert calculus over formal group laws"};
    app.require_subcommand(1);
    bool as_json = false;
    std::uint64_t seed = 12345;
    std::optional<int> global_cap;
    app.add_flag("--json", as_json, "emit a JSON envelope");
    app.add_option("--seed", seed, "seed for randomized verification");
    app.add_option("--cap", global_cap, "series truncation cap override");

    // poly <family> --perm P
    auto* poly_cmd = app.add_subcommand("poly", "double Schubert / Grothendieck / beta polynomials");
    poly_cmd->require_subcommand(1);
    std::string poly_perm;
    for (const char* fam : {"schubert", "grothendieck", "beta"}) {
        auto* sub = poly_cmd->add_subcommand(fam, std::string("the ") + fam + " family");
        sub->add_option("--perm", poly_perm, "permutation in one-line notation")->required();
    }

    // table --kind K --n N
    auto* table_cmd = app.add_subcommand("table", "all n! polynomials of a family");
    std::string table_kind;
    int table_n = 0;
    table_cmd->add_option("--kind", table_kind, "schubert|grothendieck|beta")->required();
    table_cmd->add_option("--n", table_n, "symmetric group size")->required();

    // fgl chi|axioms|lazard
    auto* fgl_cmd = app.add_subcommand("fgl", "formal group laws");
    fgl_cmd->require_subcommand(1);
    std::string fgl_law = "add";
    int fgl_degree = 8;
    auto* fgl_chi = fgl_cmd->add_subcommand("chi", "the inverse series");
    fgl_chi->add_option("--law", fgl_law, "add|mult|FILE");
    fgl_chi->add_option("--degree", fgl_degree, "truncation degree");
    auto* fgl_axioms = fgl_cmd->add_subcommand("axioms", "check the law axioms");
    fgl_axioms->add_option("--law", fgl_law, "add|mult|FILE");
    fgl_axioms->add_option("--degree", fgl_degree, "truncation degree");
    auto* fgl_lazard = fgl_cmd->add_subcommand("lazard", "associativity relations of the free law");
    fgl_lazard->add_option("--degree", fgl_degree, "total degree cap");

    // chern base-class
    auto* chern_cmd = app.add_subcommand("chern", "Chern-root computations");
    chern_cmd->require_subcommand(1);
    auto* chern_base = chern_cmd->add_subcommand("base-class", "the initial Bott-Samelson class");
    int chern_n = 0;
    std::string chern_law = "add";
    bool chern_expand = false;
    chern_base->add_option("--n", chern_n, "flag size")->required();
    chern_base->add_option("--law", chern_law, "add|mult|FILE");
    chern_base->add_flag("--expand", chern_expand, "expand the factor product");

    // flag class|eq
    auto* flag_cmd = app.add_subcommand("flag", "classes in the flag quotient ring");
    flag_cmd->require_subcommand(1);
    int flag_n = 0;
    std::string flag_mode = "ch", flag_word_text, flag_law, flag_pullback;
    bool flag_fingerprint = false;
    auto* flag_class = flag_cmd->add_subcommand("class", "operator chain applied to the base class");
    flag_class->add_option("--n", flag_n, "flag size")->required();
    flag_class->add_option("--mode", flag_mode, "ch|ck|fgl");
    flag_class->add_option("--word", flag_word_text, "comma-separated operator indices");
    flag_class->add_option("--law", flag_law, "law file for fgl mode");
    flag_class->add_option("--pullback", flag_pullback, "comma-separated base Chern roots");
    flag_class->add_flag("--fingerprint", flag_fingerprint, "include the n! evaluation vector");
    auto* flag_eq = flag_cmd->add_subcommand("eq", "equality modulo the flag ideal");
    std::vector<std::string> flag_exprs;
    flag_eq->add_option("--n", flag_n, "flag size")->required();
    flag_eq->add_option("--mode", flag_mode, "ch|ck|fgl");
    flag_eq->add_option("--law", flag_law, "law file for fgl mode");
    flag_eq->add_option("exprs", flag_exprs, "two polynomial expressions")->expected(2);

    // degeneracy essential|check
    auto* deg_cmd = app.add_subcommand("degeneracy", "rank conditions and essential sets");
    deg_cmd->require_subcommand(1);
    std::string deg_perm, deg_matrix;
    int deg_trials = 200;
    auto* deg_essential = deg_cmd->add_subcommand("essential", "essential set with rank bounds");
    deg_essential->add_option("--perm", deg_perm, "permutation")->required();
    auto* deg_check = deg_cmd->add_subcommand("check", "rank-condition checks");
    deg_check->add_option("--perm", deg_perm, "permutation")->required();
    deg_check->add_option("--trials", deg_trials, "number of conditioned random matrices");
    deg_check->add_option("--matrix", deg_matrix, "JSON matrix to test instead of random trials");

    // verify <suite>
    auto* verify_cmd = app.add_subcommand("verify", "verification suites (exit 1 on failure)");
    verify_cmd->require_subcommand(1);
    int verify_n = 0;
    bool verify_all = false;
    for (const char* suite : {"braid", "stability", "special", "bott-ch", "bott-ck", "essential"}) {
        auto* sub = verify_cmd->add_subcommand(suite, "");
        sub->add_option("--n", verify_n, "size parameter");
        sub->add_flag("--all", verify_all, "keep going after the first failure");
    }

    // let --json/--seed/--cap appear after subcommands too
    for (CLI::App* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough(true);
        for (CLI::App* inner : sub->get_subcommands(nullptr)) inner->fallthrough(true);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);

        Json envelope;
        envelope["command"] = args;

        if (poly_cmd->parsed()) {
            FamilyKind kind = detail::parse_family(poly_cmd->get_subcommands().front()->get_name());
            Permutation w = Permutation::parse(poly_perm);
            Poly value = double_poly(kind, w);
            if (as_json) {
                envelope["result"] = {{"family", family_name(kind)},
                                      {"perm", w.images()},
                                      {"length", w.length()},
                                      {"text", value.to_string()},
                                      {"poly", poly_to_json(value)}};
                out << envelope.dump(2) << "\n";
            } else {
                out << value.to_string() << "\n";
            }
        } else if (table_cmd->parsed()) {
            FamilyKind kind = detail::parse_family(table_kind);
            int cap = kind == FamilyKind::Schubert ? detail::kTableCapSchubert : detail::kTableCapBeta;
            if (table_n < 1 || table_n > cap)
                throw DomainError("table for this family supports 1 <= n <= " + std::to_string(cap));
            Json rows = Json::array();
            for (const Permutation& w : detail::sorted_group(table_n)) {
                Poly value = double_poly(kind, w);
                if (as_json)
                    rows.push_back({{"perm", w.images()},
                                    {"length", w.length()},
                                    {"text", value.to_string()}});
                else
                    out << w.to_string() << ": " << value.to_string() << "\n";
            }
            if (as_json) {
                envelope["result"] = {{"family", family_name(kind)}, {"n", table_n}, {"rows", rows}};
                out << envelope.dump(2) << "\n";
            }
        } else if (fgl_cmd->parsed()) {
            int degree = global_cap.value_or(fgl_degree);
            auto* sub = fgl_cmd->get_subcommands().front();
            if (sub == fgl_lazard) {
                auto rels = lazard_relations(degree);
                if (as_json) {
                    Json jr = Json::array();
                    for (const auto& r : rels) jr.push_back(r.to_string());
                    Json grading = Json::object();
                    for (int i = 1; i < degree; ++i)
                        for (int j = i; i + j <= degree; ++j)
                            grading["a" + std::to_string(i) + std::to_string(j)] = 1 - i - j;
                    envelope["result"] = {{"degree", degree},
                                          {"relations", jr},
                                          {"grading", grading},
                                          {"dual_grading_convention", "i+j-1"}};
                    out << envelope.dump(2) << "\n";
                } else {
                    for (const auto& r : rels) out << r.to_string() << "\n";
                    if (rels.empty()) out << "(no relations up to degree " << degree << ")\n";
                }
            } else {
                FormalGroupLaw law = detail::load_law(fgl_law, degree);
                if (sub == fgl_chi) {
                    TruncSeries chi = TruncSeries(law.chi().poly(), std::min(degree, law.cap()));
                    if (as_json) {
                        envelope["result"] = {{"law", fgl_law},
                                              {"cap", chi.cap()},
                                              {"text", chi.poly().to_string()},
                                              {"poly", poly_to_json(chi.poly())}};
                        out << envelope.dump(2) << "\n";
                    } else {
                        out << chi.poly().to_string() << "\n";
                    }
                } else {
                    AxiomReport rep = law.verify_axioms();
                    auto line = [&](const char* name, const AxiomCheck& c) {
                        out << name << ": " << (c.ok ? "pass" : "FAIL") ;
                        if (!c.ok) out << " (first offender: " << c.first_offender << ")";
                        out << "\n";
                    };
                    if (as_json) {
                        auto jcheck = [](const AxiomCheck& c) {
                            return Json{{"ok", c.ok}, {"first_offender", c.first_offender}};
                        };
                        envelope["result"] = {{"law", fgl_law},
                                              {"cap", law.cap()},
                                              {"unit", jcheck(rep.unit)},
                                              {"commutativity", jcheck(rep.commutativity)},
                                              {"associativity", jcheck(rep.associativity)},
                                              {"ok", rep.all_ok()}};
                        out << envelope.dump(2) << "\n";
                    } else {
                        line("unit", rep.unit);
                        line("commutativity", rep.commutativity);
                        line("associativity", rep.associativity);
                    }
                    if (!rep.all_ok()) exit_code = 1;
                }
            }
        } else if (chern_cmd->parsed()) {
            if (chern_n < 1) throw DomainError("--n must be positive");
            ChernEval ev = ChernEval::additive();
            std::optional<FormalGroupLaw> law;
            std::string mode = "additive";
            if (chern_law == "mult" && !global_cap) {
                ev = ChernEval::ck_exact();
                mode = "ck-exact";
            } else if (chern_law != "add") {
                int cap = global_cap.value_or(chern_n * (chern_n - 1));
                law = detail::load_law(chern_law, std::max(cap, 2));
                ev = ChernEval::truncated(*law, std::min(cap, law->cap()));
                mode = "truncated";
            }
            FactorProduct factors = base_class_factors(chern_n, ev);
            if (as_json) {
                Json jf = Json::array();
                for (const auto& f : factors.factors) jf.push_back(f.to_string());
                envelope["result"] = {{"n", chern_n}, {"mode", mode}, {"factors", jf}};
                if (chern_expand) envelope["result"]["expanded"] = bott_base_class(chern_n, ev).to_string();
                out << envelope.dump(2) << "\n";
            } else if (chern_expand) {
                out << bott_base_class(chern_n, ev).to_string() << "\n";
            } else {
                for (const auto& f : factors.factors) out << f.to_string() << "\n";
            }
        } else if (flag_cmd->parsed()) {
            if (flag_n < 1 || flag_n > detail::kClassEqCapN)
                throw DomainError("flag commands support 1 <= n <= " +
                                  std::to_string(detail::kClassEqCapN));
            std::optional<FormalGroupLaw> law;
            FlagContext ctx = [&] {
                if (flag_mode == "ch") return FlagContext::ch(flag_n);
                if (flag_mode == "ck") return FlagContext::ck(flag_n);
                if (flag_mode != "fgl") throw ParseError("mode must be ch|ck|fgl");
                if (flag_law.empty()) throw ParseError("fgl mode needs --law FILE");
                int cap = global_cap.value_or(flag_n * flag_n);
                law = detail::load_law(flag_law, cap + 1);
                return FlagContext::fgl(flag_n, *law, std::min(cap, law->cap() - 1));
            }();

            if (flag_cmd->get_subcommands().front() == flag_class) {
                std::vector<int> word = detail::parse_word(flag_word_text);
                FlagClass cls = bott_samelson_class(word, ctx);
                Json result{{"n", flag_n},
                            {"mode", flag_mode_name(ctx.mode())},
                            {"word", word},
                            {"representative", cls.to_string()},
                            {"truncated", cls.truncated()}};
                if (ctx.mode() == FlagMode::FGL) {
                    result["cap"] = ctx.cap();
                    result["exact_to"] = cls.exact_to;
                }
                if (!flag_pullback.empty()) {
                    std::vector<Poly> roots = detail::parse_poly_list(flag_pullback);
                    result["pullback"] = pullback_to_base(cls, roots).to_string();
                }
                if (flag_fingerprint) {
                    Json fp = Json::array();
                    for (const auto& value : class_fingerprint(cls)) fp.push_back(value.to_string());
                    result["fingerprint"] = fp;
                }
                if (as_json) {
                    envelope["result"] = result;
                    out << envelope.dump(2) << "\n";
                } else {
                    out << result["representative"].get<std::string>() << "\n";
                    if (result.contains("pullback"))
                        out << "pullback: " << result["pullback"].get<std::string>() << "\n";
                    if (flag_fingerprint)
                        for (const auto& v : result["fingerprint"])
                            out << "fingerprint: " << v.get<std::string>() << "\n";
                }
            } else {
                FlagClass a = make_class(ctx, Poly::parse(flag_exprs.at(0)));
                FlagClass b = make_class(ctx, Poly::parse(flag_exprs.at(1)));
                Poly diff = a.num * b.den - b.num * a.den;
                auto witness = nonvanishing_witness(diff, ctx.n(), std::min(a.exact_to, b.exact_to));
                bool equal = !witness.has_value();
                if (as_json) {
                    envelope["result"] = {{"n", flag_n},
                                          {"mode", flag_mode_name(ctx.mode())},
                                          {"equal", equal}};
                    if (witness) {
                        envelope["result"]["witness_sigma"] = witness->first;
                        envelope["result"]["witness_value"] = witness->second.to_string();
                    }
                    out << envelope.dump(2) << "\n";
                } else if (equal) {
                    out << "equal\n";
                } else {
                    out << "not equal: substituting x := sigma(y) with sigma = "
                        << Permutation(witness->first).to_string() << " leaves "
                        << witness->second.to_string() << "\n";
                }
                if (!equal) exit_code = 1;
            }
        } else if (deg_cmd->parsed()) {
            Permutation w = Permutation::parse(deg_perm);
            if (deg_cmd->get_subcommands().front() == deg_essential) {
                RankTable rt(w);
                Json cells = Json::array();
                for (const auto& [i, j] : essential_set(w)) {
                    if (!as_json) out << "(" << i << "," << j << "): r=" << rt(i, j) << "\n";
                    cells.push_back({{"i", i}, {"j", j}, {"r", rt(i, j)}});
                }
                if (as_json) {
                    envelope["result"] = {{"perm", w.images()},
                                          {"codimension", expected_codimension(w)},
                                          {"essential", cells}};
                    out << envelope.dump(2) << "\n";
                } else if (cells.empty()) {
                    out << "(empty)\n";
                }
            } else if (!deg_matrix.empty()) {
                IntMatrix m = matrix_from_json(Json::parse(deg_matrix));
                bool ess = satisfies_rank_conditions(m, w, ConditionSet::Essential);
                bool all = satisfies_rank_conditions(m, w, ConditionSet::All);
                if (as_json) {
                    envelope["result"] = {{"perm", w.images()}, {"essential", ess}, {"all", all}};
                    out << envelope.dump(2) << "\n";
                } else {
                    out << "essential: " << (ess ? "satisfied" : "violated") << "\n";
                    out << "all: " << (all ? "satisfied" : "violated") << "\n";
                }
            } else {
                auto rep = essential_sufficiency_check(w, deg_trials, seed);
                if (as_json) {
                    envelope["result"] = {{"perm", w.images()},
                                          {"trials", rep.trials},
                                          {"failures", rep.failures}};
                    if (rep.counterexample)
                        envelope["result"]["counterexample"] = matrix_to_json(*rep.counterexample);
                    out << envelope.dump(2) << "\n";
                } else {
                    out << "trials: " << rep.trials << ", counterexamples: " << rep.failures << "\n";
                    if (rep.counterexample) out << matrix_to_json(*rep.counterexample).dump() << "\n";
                }
                if (!rep.ok()) exit_code = 1;
            }
        } else if (verify_cmd->parsed()) {
            const std::string suite = verify_cmd->get_subcommands().front()->get_name();
            if (verify_n > detail::kReducedWordsCapN)
                throw DomainError("verification suites enumerate reduced words; n is capped at " +
                                  std::to_string(detail::kReducedWordsCapN));
            VerifyResult res;
            if (suite == "braid") {
                int n = verify_n > 0 ? verify_n : 4;
                res = verify_braid(n, seed, 100, verify_all);
            } else if (suite == "stability") {
                res = verify_stability(verify_n > 0 ? verify_n : 4, verify_all);
            } else if (suite == "special") {
                res = verify_special(verify_n > 0 ? verify_n : 4, verify_all);
            } else if (suite == "bott-ch") {
                res = verify_bott_ch(verify_n > 0 ? verify_n : 4, 3, verify_all);
            } else if (suite == "bott-ck") {
                res = verify_bott_ck(verify_n > 0 ? verify_n : 3, 4, 5, verify_all);
            } else {
                res = verify_essential(6, verify_n > 0 ? verify_n : 5, 4, 200, seed, verify_all);
            }
            detail::print_verify(out, res, as_json);
            if (!res.ok()) exit_code = 1;
        }
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream help;
        help << app.help();
        return {0, help.str()};
    } catch (const CLI::ParseError& e) {
        std::ostringstream err;
        err << "usage error: " << e.what() << "\n" << app.help();
        return {2, err.str()};
    } catch (const Error& e) {
        return {2, std::string("error: ") + e.what() + "\n"};
    }
    return {exit_code, out.str()};
}

}  // namespace flagcalc::cli
