#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "flagcalc/fgl.hpp"
#include "flagcalc/poly.hpp"

namespace flagcalc {

enum class BundleFlavor { SubFlag, QuotFlag };

/// A bundle presented by the Chern roots of a full flag; rank = #roots and
/// c_t = prod (1 + root_i t).  The trivial convention: an empty root is the
/// zero polynomial.
struct RootedBundle {
    BundleFlavor flavor;
    std::vector<Poly> roots;

    int rank() const { return static_cast<int>(roots.size()); }
};

inline RootedBundle sub_flag_bundle(std::vector<Poly> roots) {
    return {BundleFlavor::SubFlag, std::move(roots)};
}
inline RootedBundle quot_flag_bundle(std::vector<Poly> roots) {
    return {BundleFlavor::QuotFlag, std::move(roots)};
}

/// How F(a, chi(b)) is evaluated.
///  - the additive law is polynomial: exact, denominator-free;
///  - the multiplicative law admits the exact rational form (a-b)/(1-b*b_);
///  - any validated law can be evaluated as a series truncated at `cap`.
struct ChernEval {
    enum class Mode { Additive, CkExact, Truncated };

    Mode mode;
    const FormalGroupLaw* law = nullptr;  // Truncated mode only
    int cap = 0;

    static ChernEval additive() { return {Mode::Additive, nullptr, 0}; }
    static ChernEval ck_exact() { return {Mode::CkExact, nullptr, 0}; }
    static ChernEval truncated(const FormalGroupLaw& law, int cap) {
        return {Mode::Truncated, &law, cap};
    }
};

/// One factor of a top Chern class.  Exactly divisible bookkeeping: products
/// of factors are only ever multiplied or cancelled as multisets.
struct Factor {
    Poly num;
    Poly den = Poly(Int(1));

    bool operator==(const Factor&) const = default;

    friend bool factor_less(const Factor& a, const Factor& b) {
        if (!(a.num == b.num)) return poly_less(a.num, b.num);
        return poly_less(a.den, b.den);
    }

    std::string to_string() const {
        if (den == Poly(Int(1))) return num.to_string();
        return "(" + num.to_string() + ") / (" + den.to_string() + ")";
    }
};

/// A top Chern class carried as an unexpanded multiset of factors.
struct FactorProduct {
    std::vector<Factor> factors;  // kept sorted under factor_less

    void insert(Factor f) {
        auto it = std::lower_bound(factors.begin(), factors.end(), f,
                                   [](const Factor& a, const Factor& b) { return factor_less(a, b); });
        factors.insert(it, std::move(f));
    }

    int size() const { return static_cast<int>(factors.size()); }

    /// Multiset difference; throws when rhs is not contained (a Whitney
    /// bookkeeping bug, not a user error).
    friend FactorProduct multiset_divide(const FactorProduct& num, const FactorProduct& den) {
        FactorProduct out;
        std::size_t i = 0, j = 0;
        while (i < num.factors.size() && j < den.factors.size()) {
            if (num.factors[i] == den.factors[j]) {
                ++i, ++j;
            } else if (factor_less(num.factors[i], den.factors[j])) {
                out.factors.push_back(num.factors[i++]);
            } else {
                throw NonDivisibleError("factor multiset difference failed on " +
                                        den.factors[j].to_string());
            }
        }
        if (j < den.factors.size())
            throw NonDivisibleError("factor multiset difference failed on " +
                                    den.factors[j].to_string());
        out.factors.insert(out.factors.end(), num.factors.begin() + static_cast<long>(i),
                           num.factors.end());
        return out;
    }

    friend FactorProduct operator*(const FactorProduct& a, const FactorProduct& b) {
        FactorProduct out = a;
        for (const Factor& f : b.factors) out.insert(f);
        return out;
    }

    RatPoly expanded(std::optional<int> cap = std::nullopt) const {
        RatPoly r{Poly(Int(1)), Poly(Int(1))};
        for (const Factor& f : factors) {
            r.num = r.num * f.num;
            if (cap) r.num = r.num.truncated_series(*cap);
            r.den = r.den * f.den;
        }
        return r;
    }
};

/// chi applied to a single root: exact for the additive law, a truncated
/// series otherwise.
inline Poly chi_root(const ChernEval& ev, const Poly& root) {
    switch (ev.mode) {
        case ChernEval::Mode::Additive:
            return -root;
        case ChernEval::Mode::CkExact:
            throw DomainError("chi of a root is rational in ck-exact mode; use hom factors");
        case ChernEval::Mode::Truncated:
            return ev.law->chi_apply(root, ev.cap);
    }
    throw DomainError("bad eval mode");
}

/// The factor F(x_root, chi(y_root)) in the representation the mode affords.
inline Factor hom_factor(const ChernEval& ev, const Poly& x_root, const Poly& y_root) {
    switch (ev.mode) {
        case ChernEval::Mode::Additive:
            return {x_root - y_root};
        case ChernEval::Mode::CkExact: {
            Poly b = Poly::var(varid::beta());
            return {x_root - y_root, Poly(Int(1)) - b * y_root};
        }
        case ChernEval::Mode::Truncated: {
            Poly chi = chi_root(ev, y_root);
            return {ts_substitute(TruncSeries(ev.law->series().poly(), ev.cap),
                                  {{varid::u(), x_root}, {varid::v(), chi}})
                        .poly()};
        }
    }
    throw DomainError("bad eval mode");
}

/// The factor F(x_root, y_root) (tensor product of line bundles).
inline Factor tensor_factor(const ChernEval& ev, const Poly& x_root, const Poly& y_root) {
    switch (ev.mode) {
        case ChernEval::Mode::Additive:
            return {x_root + y_root};
        case ChernEval::Mode::CkExact: {
            Poly b = Poly::var(varid::beta());
            return {x_root + y_root - b * x_root * y_root};
        }
        case ChernEval::Mode::Truncated:
            return {ts_substitute(TruncSeries(ev.law->series().poly(), ev.cap),
                                  {{varid::u(), x_root}, {varid::v(), y_root}})
                        .poly()};
    }
    throw DomainError("bad eval mode");
}

/// Dual of a sub-flagged bundle: roots become chi(root), flavor flips.
inline RootedBundle chern_dual(const RootedBundle& e, const ChernEval& ev) {
    if (e.flavor != BundleFlavor::SubFlag)
        throw DomainError("chern_dual expects a sub-flagged bundle");
    std::vector<Poly> roots;
    roots.reserve(e.roots.size());
    for (const Poly& r : e.roots) roots.push_back(chi_root(ev, r));
    return quot_flag_bundle(std::move(roots));
}

/// Top Chern class of E (x) F as the multiset {F(x_i, y_j)}.
inline FactorProduct chern_tensor(const RootedBundle& e, const RootedBundle& f, const ChernEval& ev) {
    FactorProduct out;
    for (const Poly& xr : e.roots)
        for (const Poly& yr : f.roots) out.insert(tensor_factor(ev, xr, yr));
    return out;
}

/// Top Chern class of Hom(E, F) = E^v (x) F as the multiset {F(x_i, chi(y_j))}.
inline FactorProduct chern_hom(const RootedBundle& e_sub, const RootedBundle& f_quot,
                               const ChernEval& ev) {
    if (e_sub.flavor != BundleFlavor::SubFlag)
        throw DomainError("chern_hom expects a sub-flagged source");
    if (f_quot.flavor != BundleFlavor::QuotFlag)
        throw DomainError("chern_hom expects a quotient-flagged target");
    FactorProduct out;
    for (const Poly& xr : f_quot.roots)
        for (const Poly& yr : e_sub.roots) out.insert(hom_factor(ev, xr, yr));
    return out;
}

namespace detail {

inline RootedBundle standard_sub(int l) {
    std::vector<Poly> roots;
    for (int j = 1; j <= l; ++j) roots.push_back(Poly::var(varid::y(j)));
    return sub_flag_bundle(std::move(roots));
}

inline RootedBundle standard_quot(int m) {
    std::vector<Poly> roots;
    for (int k = 1; k <= m; ++k) roots.push_back(Poly::var(varid::x(k)));
    return quot_flag_bundle(std::move(roots));
}

}  // namespace detail

/// Top Chern class of the kernel K of  M = (+) Hom(V_l, Q_{n-l})  ->>
/// M' = (+) Hom(V_l, Q_{n-l-1}),  computed the Whitney way: build both factor
/// multisets and divide.  The result must have n(n-1)/2 factors and equal the
/// closed-form multiset {F(x_k, chi(y_j)) : k+j <= n}.
inline FactorProduct kernel_top_chern(int n, const ChernEval& ev) {
    if (n < 2) throw DomainError("kernel_top_chern needs n >= 2");
    FactorProduct big, small;
    for (int l = 1; l <= n - 1; ++l)
        big = big * chern_hom(detail::standard_sub(l), detail::standard_quot(n - l), ev);
    for (int l = 1; l <= n - 2; ++l)
        small = small * chern_hom(detail::standard_sub(l), detail::standard_quot(n - l - 1), ev);
    FactorProduct kernel = multiset_divide(big, small);
    if (kernel.size() != n * (n - 1) / 2)
        throw Error("internal error: kernel rank is not n(n-1)/2");
    return kernel;
}

/// The closed-form factor multiset {F(x_k, chi(y_j)) : k+j <= n}.
inline FactorProduct base_class_factors(int n, const ChernEval& ev) {
    FactorProduct out;
    for (int k = 1; k < n; ++k)
        for (int j = 1; k + j <= n; ++j)
            out.insert(hom_factor(ev, Poly::var(varid::x(k)), Poly::var(varid::y(j))));
    return out;
}

/// The initial (Bott-Samelson) class: the expanded closed-form product.
inline RatPoly bott_base_class(int n, const ChernEval& ev) {
    if (n < 1) throw DomainError("n must be positive");
    std::optional<int> cap;
    if (ev.mode == ChernEval::Mode::Truncated) cap = ev.cap;
    return base_class_factors(n, ev).expanded(cap);
}

}  // namespace flagcalc
