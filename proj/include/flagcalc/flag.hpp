#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "flagcalc/chern.hpp"
#include "flagcalc/fgl.hpp"
#include "flagcalc/perm.hpp"
#include "flagcalc/schubert.hpp"

namespace flagcalc {

enum class FlagMode { CH, CK, FGL };

inline const char* flag_mode_name(FlagMode m) {
    switch (m) {
        case FlagMode::CH: return "ch";
        case FlagMode::CK: return "ck";
        case FlagMode::FGL: return "fgl";
    }
    return "?";
}

/// The ring A(X)[x_1..x_n]/J with J = (e_i(x) - e_i(y)): the flag bundle of a
/// rank-n bundle whose Chern roots are the y_j.  CH and CK classes are exact
/// (CK via unit denominators); a general law works modulo a series cap.
class FlagContext {
public:
    static FlagContext ch(int n) { return FlagContext(n, FlagMode::CH, nullptr, 0); }
    static FlagContext ck(int n) { return FlagContext(n, FlagMode::CK, nullptr, 0); }
    /// The cap defaults to n*n; the law must be known one degree further so
    /// the unit cofactor of F(x_i, chi(x_{i+1})) is exact up to the cap.
    static FlagContext fgl(int n, FormalGroupLaw law, std::optional<int> cap = std::nullopt) {
        int c = cap.value_or(n * n);
        if (law.cap() < c + 1)
            throw DomainError("law cap " + std::to_string(law.cap()) +
                              " is too small for context cap " + std::to_string(c) +
                              " (need cap+1)");
        auto shared = std::make_shared<const FormalGroupLaw>(std::move(law));
        return FlagContext(n, FlagMode::FGL, std::move(shared), c);
    }

    int n() const { return n_; }
    FlagMode mode() const { return mode_; }
    int cap() const { return cap_; }
    const FormalGroupLaw& law() const {
        if (!law_) throw DomainError("no custom law attached to this context");
        return *law_;
    }

    ChernEval eval() const {
        switch (mode_) {
            case FlagMode::CH: return ChernEval::additive();
            case FlagMode::CK: return ChernEval::ck_exact();
            case FlagMode::FGL: return ChernEval::truncated(*law_, cap_);
        }
        throw DomainError("bad mode");
    }

    bool operator==(const FlagContext& o) const {
        return n_ == o.n_ && mode_ == o.mode_ && cap_ == o.cap_ && law_ == o.law_;
    }

private:
    FlagContext(int n, FlagMode mode, std::shared_ptr<const FormalGroupLaw> law, int cap)
        : n_(n), mode_(mode), cap_(cap), law_(std::move(law)) {
        if (n < 1) throw DomainError("n must be positive");
    }

    int n_;
    FlagMode mode_;
    int cap_;
    std::shared_ptr<const FormalGroupLaw> law_;
};

/// A class in the flag quotient ring, represented as num/den with den a unit
/// (a product of (1 - b*y_j) in CK mode, 1 otherwise).  exact_to is the
/// series degree up to which the representative agrees with the exact class:
/// unbounded for CH/CK, the running cap in FGL mode.
struct FlagClass {
    FlagContext ctx;
    Poly num;
    Poly den = Poly(Int(1));
    int exact_to = std::numeric_limits<int>::max();

    bool truncated() const { return exact_to != std::numeric_limits<int>::max(); }

    RatPoly rep() const { return {num, den}; }

    std::string to_string() const { return rep().to_string(); }
};

inline FlagClass make_class(const FlagContext& ctx, Poly rep) {
    return {ctx, std::move(rep), Poly(Int(1)),
            ctx.mode() == FlagMode::FGL ? ctx.cap() : std::numeric_limits<int>::max()};
}

namespace detail {

inline std::vector<std::vector<int>> all_permutation_images(int n) {
    std::vector<int> base(static_cast<std::size_t>(n));
    std::iota(base.begin(), base.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

}  // namespace detail

/// Substitute x_i := y_{sigma(i)} for every sigma in S_n; a polynomial lies
/// in J iff all n! substitutions vanish (the quotient is free of rank n! and
/// the evaluation matrix has unit-free nonzero determinant over the domain).
/// Returns the first sigma whose evaluation is nonzero, if any.
inline std::optional<std::pair<std::vector<int>, Poly>> nonvanishing_witness(const Poly& p, int n,
                                                                             int degree_cutoff) {
    for (const auto& images : detail::all_permutation_images(n)) {
        std::map<VarId, Poly> bind;
        for (int i = 1; i <= n; ++i)
            bind.emplace(varid::x(i), Poly::var(varid::y(images[static_cast<std::size_t>(i - 1)])));
        Poly value = substitute(p, bind);
        if (degree_cutoff != std::numeric_limits<int>::max())
            value = value.truncated_series(degree_cutoff);
        if (!value.is_zero()) return std::make_pair(images, value);
    }
    return std::nullopt;
}

inline bool in_ideal(const Poly& p, int n) {
    return !nonvanishing_witness(p, n, std::numeric_limits<int>::max()).has_value();
}

/// Equality modulo J, decided on the cross-multiplied difference.  In FGL
/// mode both representatives are truncations; they are compared up to the
/// smaller validity degree.
inline bool class_eq(const FlagClass& a, const FlagClass& b) {
    if (!(a.ctx == b.ctx)) throw DomainError("comparing classes from different contexts");
    Poly diff = a.num * b.den - b.num * a.den;
    int cutoff = std::min(a.exact_to, b.exact_to);
    return !nonvanishing_witness(diff, a.ctx.n(), cutoff).has_value();
}

/// The n! evaluation vector of the representative: a canonical fingerprint of
/// the class (two classes are equal iff their fingerprints agree).
inline std::vector<RatPoly> class_fingerprint(const FlagClass& c) {
    std::vector<RatPoly> out;
    for (const auto& images : detail::all_permutation_images(c.ctx.n())) {
        std::map<VarId, Poly> bind;
        for (int i = 1; i <= c.ctx.n(); ++i)
            bind.emplace(varid::x(i), Poly::var(varid::y(images[static_cast<std::size_t>(i - 1)])));
        out.push_back({substitute(c.num, bind), c.den});
    }
    return out;
}

/// The push-forward-pull-back operator of the P^1-bundle in the directions
/// (x_i, x_{i+1}):  A(f) = (1+sigma) f / F(x_i, chi(x_{i+1})).  Computed as
/// (g - sigma g)/(x_i - x_{i+1}) with g = f * U^{-1}, where
/// F(x_i, chi(x_{i+1})) = (x_i - x_{i+1}) * U and U is a unit:
///   CH:  U = 1;   CK:  U^{-1} = 1 - b*x_{i+1}  (exact);
///   FGL: U^{-1} by truncated series inversion.
/// The final division is by the generic exact_div and must be exact.
inline FlagClass operator_A(int i, const FlagClass& f) {
    const FlagContext& ctx = f.ctx;
    if (i < 1 || i >= ctx.n()) throw DomainError("operator index out of range");
    Poly g = f.num;
    int exact_to = f.exact_to;
    switch (ctx.mode()) {
        case FlagMode::CH:
            break;
        case FlagMode::CK: {
            Poly b = Poly::var(varid::beta());
            g = (Poly(Int(1)) - b * Poly::var(varid::x(i + 1))) * g;
            break;
        }
        case FlagMode::FGL: {
            const FormalGroupLaw& law = ctx.law();
            Poly xi = Poly::var(varid::x(i)), xj = Poly::var(varid::x(i + 1));
            Poly fv = ts_substitute(TruncSeries(law.series().poly(), ctx.cap() + 1),
                                    {{varid::u(), xi}, {varid::v(), law.chi_apply(xj, ctx.cap() + 1)}})
                          .poly();
            Poly unit = exact_div(fv, xi - xj);
            TruncSeries inv = series_inverse(TruncSeries(unit, ctx.cap()));
            g = (g * inv.poly()).truncated_series(ctx.cap());
            exact_to = std::min(exact_to, ctx.cap());
            break;
        }
    }
    Poly num = exact_div(g - swap_vars(g, i), Poly::var(varid::x(i)) - Poly::var(varid::x(i + 1)));
    if (exact_to != std::numeric_limits<int>::max()) exact_to -= 1;
    return {ctx, std::move(num), f.den, exact_to};
}

/// The connected-K-theory operator in closed form:
/// ((1 - b x_{i+1}) f - (1 - b x_i) sigma f) / (x_i - x_{i+1}).
inline FlagClass operator_A_ck(int i, const FlagClass& f) {
    if (f.ctx.mode() != FlagMode::CK) throw DomainError("operator_A_ck needs a CK context");
    if (i < 1 || i >= f.ctx.n()) throw DomainError("operator index out of range");
    Poly b = Poly::var(varid::beta());
    Poly wi = Poly(Int(1)) - b * Poly::var(varid::x(i));
    Poly wj = Poly(Int(1)) - b * Poly::var(varid::x(i + 1));
    Poly numer = wj * f.num - wi * swap_vars(f.num, i);
    Poly num = exact_div(numer, Poly::var(varid::x(i)) - Poly::var(varid::x(i + 1)));
    return {f.ctx, std::move(num), f.den, f.exact_to};
}

/// Cancel denominator units (1 - b*y_j) that also divide the numerator, so
/// chains that collapse to polynomials print as such.
inline void reduce_class(FlagClass& c) {
    Poly one(Int(1));
    Poly b = Poly::var(varid::beta());
    for (int j = 1; j <= c.ctx.n(); ++j) {
        Poly unit = one - b * Poly::var(varid::y(j));
        while (!(c.den == one)) {
            try {
                Poly qd = exact_div(c.den, unit);
                Poly qn = exact_div(c.num, unit);
                c.den = std::move(qd);
                c.num = std::move(qn);
            } catch (const NonDivisibleError&) {
                break;
            }
        }
    }
}

/// The initial class R_empty in the context's representation.
inline FlagClass initial_class(const FlagContext& ctx) {
    RatPoly base = bott_base_class(ctx.n(), ctx.eval());
    int exact_to =
        ctx.mode() == FlagMode::FGL ? ctx.cap() : std::numeric_limits<int>::max();
    return {ctx, std::move(base.num), std::move(base.den), exact_to};
}

/// R_I = A_{i_l} ... A_{i_1} R_empty for an arbitrary tuple I (words need not
/// be reduced); i_1 is applied first.
inline FlagClass bott_samelson_class(const std::vector<int>& word, const FlagContext& ctx) {
    FlagClass c = initial_class(ctx);
    for (int i : word) c = operator_A(i, c);
    reduce_class(c);
    return c;
}

/// The fundamental-class formula in connected K-theory:
/// H^(-b)_w(x_1..x_n, chi_m(y_1)..chi_m(y_n)) with chi_m(y) = -y/(1-b*y)
/// substituted exactly as a fraction with unit denominator.
inline FlagClass ck_schubert_class(const Permutation& w, const FlagContext& ctx) {
    if (ctx.mode() != FlagMode::CK) throw DomainError("ck_schubert_class needs a CK context");
    if (w.n() != ctx.n()) throw DomainError("permutation size differs from the context");
    const int n = ctx.n();
    Poly h = specialize_beta(double_poly(FamilyKind::Beta, w), BetaValue::negated());

    Poly b = Poly::var(varid::beta());
    std::vector<int> ydeg(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 1; j <= n; ++j) ydeg[static_cast<std::size_t>(j)] = h.degree_in(varid::y(j));

    // num = sum over terms of h:  c * x-part * b-part * prod_j (-y_j)^{e_j} (1-b y_j)^{d_j - e_j}
    std::vector<std::vector<Poly>> unit_pows(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        auto& tab = unit_pows[static_cast<std::size_t>(j)];
        tab.push_back(Poly(Int(1)));
        Poly unit = Poly(Int(1)) - b * Poly::var(varid::y(j));
        for (int k = 1; k <= ydeg[static_cast<std::size_t>(j)]; ++k) tab.push_back(tab.back() * unit);
    }
    Poly num;
    for (const auto& [m, c] : h.terms()) {
        Monomial rest = m;
        Poly term(c, h.ring());
        int sign_flips = 0;
        for (int j = 1; j <= n; ++j) {
            VarId yj = varid::y(j);
            int e = m.exponent(yj);
            sign_flips += e;
            rest = rest.without(yj, yj);
            term *= unit_pows[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(ydeg[static_cast<std::size_t>(j)] - e)];
            if (e > 0) term *= Poly::var(yj, e);
        }
        if (sign_flips % 2 == 1) term = -term;
        Poly::Terms restt;
        restt.emplace(rest, Int(1));
        term *= Poly::from_terms(std::move(restt), CoeffRing::integers());
        num += term;
    }
    Poly den(Int(1));
    for (int j = 1; j <= n; ++j)
        den *= unit_pows[static_cast<std::size_t>(j)].back();
    FlagClass out{ctx, std::move(num), std::move(den), std::numeric_limits<int>::max()};
    reduce_class(out);
    return out;
}

/// Pull a class back along the section of a quotient flag with the given
/// Chern roots: substitute x_i := w_roots[i].
inline RatPoly pullback_to_base(const FlagClass& c, const std::vector<Poly>& w_roots) {
    if (static_cast<int>(w_roots.size()) != c.ctx.n())
        throw DomainError("need exactly n roots for the pullback");
    std::map<VarId, Poly> bind;
    for (int i = 1; i <= c.ctx.n(); ++i)
        bind.emplace(varid::x(i), w_roots[static_cast<std::size_t>(i - 1)]);
    return {substitute(c.num, bind), c.den};
}

/// A random element of the ideal J (for tests of operator well-definedness).
inline Poly elementary_symmetric(int k, int n, VarClass cls) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 1);
    Poly acc;
    while (true) {
        Poly prod(Int(1));
        for (int v : idx)
            prod *= Poly::var(cls == VarClass::X ? varid::x(v) : varid::y(v));
        acc += prod;
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + 1 + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < k; ++q)
            idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
    return acc;
}

inline Poly ideal_generator(int k, int n) {
    return elementary_symmetric(k, n, VarClass::X) - elementary_symmetric(k, n, VarClass::Y);
}

}  // namespace flagcalc
