#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "flagcalc/chern.hpp"
#include "flagcalc/degeneracy.hpp"
#include "flagcalc/flag.hpp"
#include "flagcalc/rng.hpp"
#include "flagcalc/schubert.hpp"

namespace flagcalc {

struct VerifyResult {
    std::string name;
    int cases = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }

    void check(bool cond, const std::function<std::string()>& describe, bool collect_all) {
        ++cases;
        if (!cond && (collect_all || failures.empty())) failures.push_back(describe());
    }
    bool should_stop(bool collect_all) const { return !collect_all && !failures.empty(); }
};

/// Random sparse polynomial in x_1..x_n, y_1..y_n (and b) for operator tests.
inline Poly random_poly(Rng& rng, int n, bool with_beta, int max_terms = 5, int max_exp = 2) {
    Poly p;
    const int terms = rng.range(1, max_terms);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int i = 1; i <= n; ++i) {
            if (rng.below(3) == 0) m = m * Monomial::var(varid::x(i), rng.range(1, max_exp));
            if (rng.below(4) == 0) m = m * Monomial::var(varid::y(i), 1);
        }
        if (with_beta && rng.below(3) == 0) m = m * Monomial::var(varid::beta(), rng.range(1, 2));
        Poly::Terms tt;
        tt.emplace(std::move(m), Int(rng.nonzero(4)));
        p += Poly::from_terms(std::move(tt),
                              with_beta ? CoeffRing::integers_beta() : CoeffRing::integers());
    }
    return p;
}

/// Braid relations as operator identities on random polynomials, for the
/// three operator families.
inline VerifyResult verify_braid(int n, std::uint64_t seed, int count = 100, bool collect_all = false) {
    VerifyResult res{"braid"};
    Rng rng(seed);
    struct Family {
        const char* name;
        Poly (*op)(int, const Poly&);
    };
    const Family families[] = {{"partial", &apply_partial}, {"pi", &apply_pi}, {"phi", &apply_phi}};
    for (int t = 0; t < count && !res.should_stop(collect_all); ++t) {
        Poly p = random_poly(rng, n, true);
        for (const auto& fam : families) {
            for (int i = 1; i < n; ++i)
                for (int j = i + 2; j < n; ++j) {
                    Poly lhs = fam.op(i, fam.op(j, p));
                    Poly rhs = fam.op(j, fam.op(i, p));
                    res.check(lhs == rhs,
                              [&] {
                                  std::ostringstream os;
                                  os << fam.name << "_" << i << " o " << fam.name << "_" << j
                                     << " != commuted, on " << p.to_string();
                                  return os.str();
                              },
                              collect_all);
                }
            for (int i = 1; i + 1 < n; ++i) {
                int j = i + 1;
                Poly lhs = fam.op(i, fam.op(j, fam.op(i, p)));
                Poly rhs = fam.op(j, fam.op(i, fam.op(j, p)));
                res.check(lhs == rhs,
                          [&] {
                              std::ostringstream os;
                              os << fam.name << " braid (" << i << "," << j << ") failed on "
                                 << p.to_string();
                              return os.str();
                          },
                          collect_all);
            }
        }
    }
    return res;
}

/// Every reduced word of w0*w yields the same beta-polynomial.
inline VerifyResult verify_word_independence(int n, bool collect_all = false) {
    VerifyResult res{"word-independence"};
    const Permutation w0 = Permutation::longest(n);
    for (const auto& im : detail::all_permutation_images(n)) {
        if (res.should_stop(collect_all)) break;
        Permutation w{im};
        Poly reference = double_poly(FamilyKind::Beta, w);
        for (const auto& word : all_reduced_words(w0 * w)) {
            Poly via = double_poly_via_word(FamilyKind::Beta, w, word);
            res.check(via == reference,
                      [&] { return "H differs along a reduced word for w = " + w.to_string(); },
                      collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    return res;
}

/// Stability in the ambient symmetric group plus the telescoping ladder.
inline VerifyResult verify_stability(int n_max, bool collect_all = false) {
    VerifyResult res{"stability"};
    for (int n = 2; n <= n_max - 1 && !res.should_stop(collect_all); ++n) {
        for (const auto& im : detail::all_permutation_images(n)) {
            Permutation w{im};
            Poly small = double_poly(FamilyKind::Beta, w);
            Poly big = double_poly(FamilyKind::Beta, w.embedded(n + 1));
            res.check(small == big,
                      [&] { return "H_w changed under S_" + std::to_string(n) + " -> S_" +
                                   std::to_string(n + 1) + " for w = " + w.to_string(); },
                      collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    for (int n = 1; n <= n_max && !res.should_stop(collect_all); ++n)
        for (int m = 1; m <= n; ++m) {
            Poly lhs = apply_phi(m, stability_ladder_poly(n, m));
            Poly rhs = stability_ladder_poly(n, m + 1);
            res.check(lhs == rhs,
                      [&] { return "telescoping phi_" + std::to_string(m) + " H_" + std::to_string(m) +
                                   " != H_" + std::to_string(m + 1) + " at n = " + std::to_string(n); },
                      collect_all);
            if (res.should_stop(collect_all)) break;
        }
    return res;
}

/// beta = 0 (with y -> -y) gives Schubert, beta = -1 gives Grothendieck.
inline VerifyResult verify_special(int n, bool collect_all = false) {
    VerifyResult res{"special"};
    for (const auto& im : detail::all_permutation_images(n)) {
        if (res.should_stop(collect_all)) break;
        Permutation w{im};
        Poly h = double_poly(FamilyKind::Beta, w);
        res.check(beta_to_schubert(h) == double_poly(FamilyKind::Schubert, w),
                  [&] { return "H|_{b=0,y->-y} != S for w = " + w.to_string(); }, collect_all);
        res.check(beta_to_grothendieck(h) == double_poly(FamilyKind::Grothendieck, w),
                  [&] { return "H|_{b=-1} != G for w = " + w.to_string(); }, collect_all);
    }
    return res;
}

/// Additive-mode Bott-Samelson chains reproduce Schubert polynomials mod J.
inline VerifyResult verify_bott_ch(int n, int all_words_up_to = 3, bool collect_all = false) {
    VerifyResult res{"bott-ch"};
    const Permutation w0 = Permutation::longest(n);
    const FlagContext ctx = FlagContext::ch(n);
    for (const auto& im : detail::all_permutation_images(n)) {
        if (res.should_stop(collect_all)) break;
        Permutation w{im};
        FlagClass target = make_class(ctx, double_poly(FamilyKind::Schubert, w));
        std::vector<std::vector<int>> words;
        if (n <= all_words_up_to)
            words = all_reduced_words(w0 * w);
        else
            words.push_back(lex_min_reduced_word(w0 * w));
        for (const auto& word : words) {
            FlagClass chain = bott_samelson_class(word, ctx);
            res.check(class_eq(chain, target),
                      [&] { return "CH chain differs from S_w mod J for w = " + w.to_string(); },
                      collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    return res;
}

/// The main connected-K-theory identity: operator chains applied to the CK
/// base class are class-equal to H^(-b)_w(x, chi_m(y)).
inline VerifyResult verify_bott_ck(int n_exhaustive, int spot_n = 4, int spot_count = 5,
                                   bool collect_all = false) {
    VerifyResult res{"bott-ck"};
    {
        const int n = n_exhaustive;
        const Permutation w0 = Permutation::longest(n);
        const FlagContext ctx = FlagContext::ck(n);
        for (const auto& im : detail::all_permutation_images(n)) {
            if (res.should_stop(collect_all)) break;
            Permutation w{im};
            FlagClass target = ck_schubert_class(w, ctx);
            for (const auto& word : all_reduced_words(w0 * w)) {
                FlagClass chain = bott_samelson_class(word, ctx);
                res.check(class_eq(chain, target),
                          [&] { return "CK chain differs from H^(-b)_w for w = " + w.to_string(); },
                          collect_all);
                if (res.should_stop(collect_all)) break;
            }
        }
    }
    if (spot_count > 0 && !res.should_stop(collect_all)) {
        const Permutation w0 = Permutation::longest(spot_n);
        const FlagContext ctx = FlagContext::ck(spot_n);
        // a fixed spread of lengths, including both extremes
        std::vector<std::vector<int>> picks = {
            {1, 2, 3, 4}, {2, 1, 3, 4}, {3, 1, 4, 2}, {2, 4, 1, 3}, {4, 3, 2, 1}};
        picks.resize(static_cast<std::size_t>(std::min<int>(spot_count, 5)));
        for (const auto& im : picks) {
            Permutation w{im};
            FlagClass target = ck_schubert_class(w, ctx);
            FlagClass chain = bott_samelson_class(lex_min_reduced_word(w0 * w), ctx);
            res.check(class_eq(chain, target),
                      [&] { return "CK spot check failed for w = " + w.to_string(); }, collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    return res;
}

/// operator_A_ck agrees with phi^(-b), and the additive operator_A with
/// partial_i, on random representatives.
inline VerifyResult verify_operator_bridge(int n, std::uint64_t seed, int count = 100,
                                           bool collect_all = false) {
    VerifyResult res{"operator-bridge"};
    Rng rng(seed);
    const FlagContext ck = FlagContext::ck(n);
    const FlagContext ch = FlagContext::ch(n);
    for (int t = 0; t < count && !res.should_stop(collect_all); ++t) {
        Poly p = random_poly(rng, n, true);
        int i = rng.range(1, n - 1);
        Poly via_ck = operator_A_ck(i, make_class(ck, p)).num;
        res.check(via_ck == apply_phi_neg(i, p),
                  [&] { return "A_ck != phi^(-b) on " + p.to_string(); }, collect_all);
        res.check(operator_A(i, make_class(ck, p)).num == via_ck,
                  [&] { return "A (CK mode) != A_ck on " + p.to_string(); }, collect_all);
        Poly q = random_poly(rng, n, false);
        res.check(operator_A(i, make_class(ch, q)).num == apply_partial(i, q),
                  [&] { return "A (CH mode) != partial on " + q.to_string(); }, collect_all);
    }
    return res;
}

/// Essential-set suites: the antidiagonal formula for w0, embedding
/// stability, and the sufficiency shadow on conditioned random matrices.
inline VerifyResult verify_essential(int formula_n_max = 6, int embed_n_max = 5, int suff_n = 4,
                                     int trials = 200, std::uint64_t seed = 2024,
                                     bool collect_all = false) {
    VerifyResult res{"essential"};
    for (int n = 2; n <= formula_n_max && !res.should_stop(collect_all); ++n) {
        std::set<std::pair<int, int>> expect;
        for (int i = 1; i < n; ++i) expect.emplace(i, n - i);
        res.check(essential_set(Permutation::longest(n)) == expect,
                  [&] { return "Ess(w0) antidiagonal formula failed at n = " + std::to_string(n); },
                  collect_all);
    }
    for (int n = 2; n <= embed_n_max && !res.should_stop(collect_all); ++n) {
        for (const auto& im : detail::all_permutation_images(n)) {
            Permutation w{im};
            auto base = essential_set(w);
            for (int m = n + 1; m <= n + 3; ++m)
                res.check(essential_set(w.embedded(m)) == base,
                          [&] { return "Ess moved under embedding for w = " + w.to_string(); },
                          collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    if (!res.should_stop(collect_all)) {
        for (const auto& im : detail::all_permutation_images(suff_n)) {
            Permutation w{im};
            auto rep = essential_sufficiency_check(w, trials, seed);
            res.check(rep.ok(),
                      [&] { return "essential sufficiency counterexample for w = " + w.to_string(); },
                      collect_all);
            if (res.should_stop(collect_all)) break;
        }
    }
    return res;
}

/// FGL axioms, chi, the (u-v)*unit factorization, and the Lazard generators.
inline VerifyResult verify_fgl(int cap = 8, bool collect_all = false) {
    VerifyResult res{"fgl"};
    const FormalGroupLaw add = make_additive(cap);
    const FormalGroupLaw mult = make_multiplicative(cap);
    const FormalGroupLaw custom = FormalGroupLaw::from_coeffs(
        {{{1, 0}, Poly(Int(1))},
         {{0, 1}, Poly(Int(1))},
         {{1, 1}, Poly::parse("-b")},
         {{2, 2}, Poly::parse("b^3")},
         {{1, 2}, Poly::parse("b^2")},
         {{2, 1}, Poly::parse("b^2")}},
        cap);

    for (const auto* law : {&add, &mult}) {
        res.check(law->verify_axioms().all_ok(), [&] { return std::string("axioms failed"); },
                  collect_all);
    }
    for (const auto* law : {&add, &mult, &custom}) {
        Poly u = Poly::variable("u"), v = Poly::variable("v");
        TruncSeries fu_chiu =
            ts_substitute(law->series(), {{varid::u(), u}, {varid::v(), law->chi().poly()}});
        res.check(fu_chiu.is_zero(), [&] { return std::string("F(u, chi(u)) != 0"); }, collect_all);

        TruncSeries chi_v = ts_substitute(law->chi(), {{varid::u(), v}});
        TruncSeries fu_chiv =
            ts_substitute(law->series(), {{varid::u(), u}, {varid::v(), chi_v.poly()}});
        Poly unit = exact_div(fu_chiv.poly(), u - v);
        res.check(unit.series_constant_part() == Poly(Int(1)),
                  [&] { return std::string("F(u, chi(v)) does not factor as (u-v)*unit"); },
                  collect_all);
    }
    auto rels = lazard_relations(4);
    res.check(!rels.empty(), [&] { return std::string("lazard_relations(4) is empty"); }, collect_all);
    std::map<VarId, Poly> mult_sub;
    for (int i = 1; i < 4; ++i)
        for (int j = i; i + j <= 4; ++j)
            mult_sub[varid::gen("a" + std::to_string(i) + std::to_string(j))] =
                (i == 1 && j == 1) ? -Poly::variable("b") : Poly();
    for (const auto& rel : rels)
        res.check(substitute(rel, mult_sub).is_zero(),
                  [&] { return "lazard relation survives the multiplicative law: " + rel.to_string(); },
                  collect_all);
    return res;
}

/// The Whitney-ratio kernel class equals the closed-form factor multiset.
inline VerifyResult verify_base_class(int n_max = 4, bool collect_all = false) {
    VerifyResult res{"base-class"};
    FormalGroupLaw custom = FormalGroupLaw::from_coeffs(
        {{{1, 0}, Poly(Int(1))},
         {{0, 1}, Poly(Int(1))},
         {{1, 1}, Poly::parse("-2")},
         {{1, 2}, Poly::parse("3")},
         {{2, 1}, Poly::parse("3")}},
        2 * n_max * n_max);
    for (int n = 2; n <= n_max && !res.should_stop(collect_all); ++n) {
        const ChernEval evals[] = {ChernEval::additive(), ChernEval::ck_exact(),
                                   ChernEval::truncated(custom, n * n)};
        for (const auto& ev : evals) {
            FactorProduct kernel = kernel_top_chern(n, ev);
            FactorProduct closed = base_class_factors(n, ev);
            res.check(kernel.size() == n * (n - 1) / 2,
                      [&] { return "kernel factor count is off at n = " + std::to_string(n); },
                      collect_all);
            res.check(kernel.factors == closed.factors,
                      [&] { return "kernel != closed form at n = " + std::to_string(n); },
                      collect_all);
        }
    }
    return res;
}

}  // namespace flagcalc
