#pragma once

#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "flagcalc/fgl.hpp"
#include "flagcalc/perm.hpp"
#include "flagcalc/poly.hpp"

namespace flagcalc {

/// Divided difference (P - sigma_i P)/(x_i - x_{i+1}), computed termwise via
/// the telescoping identity (x^a y^b - x^b y^a)/(x - y) = sum x^s y^t.  The
/// numerator is antisymmetric, so the division is always exact and no
/// polynomial division is needed.
inline Poly apply_partial(int i, const Poly& p) {
    const VarId xi = varid::x(i), xj = varid::x(i + 1);
    Poly::Terms out;
    auto add = [&](Monomial m, const Int& c) {
        auto [it, fresh] = out.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) out.erase(it);
        }
    };
    for (const auto& [m, c] : p.terms()) {
        const int a = m.exponent(xi), b = m.exponent(xj);
        if (a == b) continue;
        const Monomial rest = m.without(xi, xj);
        if (a > b) {
            for (int k = 0; k < a - b; ++k)
                add(rest * Monomial::var(xi, a - 1 - k) * Monomial::var(xj, b + k), c);
        } else {
            for (int k = 0; k < b - a; ++k)
                add(rest * Monomial::var(xi, b - 1 - k) * Monomial::var(xj, a + k), -c);
        }
    }
    return Poly::from_terms(std::move(out), p.ring(), p.beta_shift());
}

/// Isobaric operator pi_i P = ((1-x_{i+1})P - (1-x_i) sigma_i P)/(x_i - x_{i+1})
/// = partial_i((1 - x_{i+1}) P).
inline Poly apply_pi(int i, const Poly& p) {
    return apply_partial(i, (Poly(Int(1)) - Poly::var(varid::x(i + 1))) * p);
}

/// Beta-divided difference phi_i P = ((1+b x_{i+1})P - (1+b x_i) sigma_i P)/(x_i - x_{i+1})
/// = partial_i((1 + b x_{i+1}) P).
inline Poly apply_phi(int i, const Poly& p) {
    Poly weight = Poly(Int(1)) + Poly::var(varid::beta()) * Poly::var(varid::x(i + 1));
    return apply_partial(i, weight * p);
}

/// phi with the sign of beta flipped; the form the push-forward operators on
/// connected K-theory take.
inline Poly apply_phi_neg(int i, const Poly& p) {
    Poly weight = Poly(Int(1)) - Poly::var(varid::beta()) * Poly::var(varid::x(i + 1));
    return apply_partial(i, weight * p);
}

enum class FamilyKind { Schubert, Grothendieck, Beta };

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Schubert: return "schubert";
        case FamilyKind::Grothendieck: return "grothendieck";
        case FamilyKind::Beta: return "beta";
    }
    return "?";
}

/// One linear factor of the longest-element product: x+y+bxy, x+y-xy or x-y.
inline Poly family_factor(FamilyKind kind, int i, int j) {
    Poly x = Poly::var(varid::x(i)), y = Poly::var(varid::y(j));
    switch (kind) {
        case FamilyKind::Schubert: return x - y;
        case FamilyKind::Grothendieck: return x + y - x * y;
        case FamilyKind::Beta: return x + y + Poly::var(varid::beta()) * x * y;
    }
    throw DomainError("unknown family");
}

inline Poly apply_family_op(FamilyKind kind, int i, const Poly& p) {
    switch (kind) {
        case FamilyKind::Schubert: return apply_partial(i, p);
        case FamilyKind::Grothendieck: return apply_pi(i, p);
        case FamilyKind::Beta: return apply_phi(i, p);
    }
    throw DomainError("unknown family");
}

/// The w0 base case: the product of factors over i+j <= n.
inline Poly top_poly(FamilyKind kind, int n) {
    if (n < 1) throw DomainError("n must be positive");
    Poly acc(Int(1));
    for (int i = 1; i < n; ++i)
        for (int j = 1; i + j <= n; ++j) acc *= family_factor(kind, i, j);
    return acc;
}

struct DoublePolynomial {
    FamilyKind kind;
    Permutation perm;
    Poly value;
};

namespace detail {

struct FamilyCache {
    std::mutex mu;
    std::map<std::tuple<FamilyKind, int, std::vector<int>>, Poly> values;

    static FamilyCache& instance() {
        static FamilyCache cache;
        return cache;
    }
};

}  // namespace detail

/// The double polynomial of w, computed by descending from w0 along the
/// lexicographically smallest reduced word of w0*w (independence of the word
/// is a theorem, exercised by the verification suites, so the choice only
/// pins the cache path).  Intermediate permutations are memoized; the cache
/// is insert-or-get under a mutex and idempotent.
inline Poly double_poly(FamilyKind kind, const Permutation& w) {
    const int n = w.n();
    auto& cache = detail::FamilyCache::instance();
    auto key = [&](const Permutation& p) { return std::make_tuple(kind, n, p.images()); };
    {
        std::lock_guard<std::mutex> lock(cache.mu);
        auto it = cache.values.find(key(w));
        if (it != cache.values.end()) return it->second;
    }

    const Permutation w0 = Permutation::longest(n);
    const std::vector<int> word = lex_min_reduced_word(w0 * w);
    Permutation cur = w0;
    Poly value = top_poly(kind, n);
    {
        std::lock_guard<std::mutex> lock(cache.mu);
        cache.values.emplace(key(cur), value);
    }
    for (int letter : word) {
        cur = cur.times_s(letter);  // after t letters: cur = w0 * s_{j1} * ... * s_{jt}
        bool hit = false;
        {
            std::lock_guard<std::mutex> lock(cache.mu);
            auto it = cache.values.find(key(cur));
            if (it != cache.values.end()) {
                value = it->second;
                hit = true;
            }
        }
        if (!hit) {
            value = apply_family_op(kind, letter, value);
            std::lock_guard<std::mutex> lock(cache.mu);
            cache.values.emplace(key(cur), value);
        }
    }
    if (!(cur == w)) throw Error("internal error: descent chain did not reach the target permutation");
    return value;
}

/// Same chain as double_poly but along a caller-chosen reduced word of w0*w;
/// used to exercise word independence.
inline Poly double_poly_via_word(FamilyKind kind, const Permutation& w, const std::vector<int>& word) {
    const Permutation w0 = Permutation::longest(w.n());
    Permutation check = Permutation::identity(w.n());
    for (int i : word) check = check.times_s(i);
    if (!(check == w0 * w)) throw DomainError("word is not a decomposition of w0*w");
    if (static_cast<int>(word.size()) != (w0 * w).length())
        throw DomainError("word is not reduced");
    Poly value = top_poly(kind, w.n());
    for (int letter : word) value = apply_family_op(kind, letter, value);
    return value;
}

/// H_w | beta=0, y -> -y  (the Chow specialization).
inline Poly beta_to_schubert(const Poly& h) {
    Poly p = specialize_beta(h, BetaValue::zero());
    std::map<VarId, Poly> flip;
    for (VarId v : p.variables())
        if (varid::cls(v) == VarClass::Y) flip.emplace(v, -Poly::var(v));
    return substitute(p, flip);
}

/// H_w | beta=-1  (the K-theory specialization).
inline Poly beta_to_grothendieck(const Poly& h) { return specialize_beta(h, BetaValue::minus_one()); }

/// Evaluate the family polynomial at explicit Chern roots.
inline Poly degeneracy_class(FamilyKind kind, const Permutation& w, std::span<const Poly> x_roots,
                             std::span<const Poly> y_roots) {
    const int n = w.n();
    if (static_cast<int>(x_roots.size()) < n || static_cast<int>(y_roots.size()) < n)
        throw DomainError("need at least n Chern roots per family");
    Poly p = double_poly(kind, w);
    std::map<VarId, Poly> bind;
    for (int i = 1; i <= n; ++i) {
        bind.emplace(varid::x(i), x_roots[static_cast<std::size_t>(i - 1)]);
        bind.emplace(varid::y(i), y_roots[static_cast<std::size_t>(i - 1)]);
    }
    return substitute(p, bind);
}

/// The telescoped products H_m of the stability argument:
/// H_m = prod_{i+j<=n} f_ij * prod_{k=m..n} f_{k,n+1-k}; phi_m' H_m' = H_{m'+1}.
inline Poly stability_ladder_poly(int n, int m) {
    if (m < 1 || m > n + 1) throw DomainError("need 1 <= m <= n+1");
    Poly acc = top_poly(FamilyKind::Beta, n);
    for (int k = m; k <= n; ++k) acc *= family_factor(FamilyKind::Beta, k, n + 1 - k);
    return acc;
}

}  // namespace flagcalc
