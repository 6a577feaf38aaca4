#pragma once

#include <map>

#include "flagcalc/poly.hpp"

namespace flagcalc {

/// A polynomial truncated at a fixed total degree in the series variables
/// (x/y/z/u/v/w/t).  b and named generators are coefficient symbols and do
/// not count towards the cap.  Arithmetic re-truncates eagerly.
class TruncSeries {
public:
    TruncSeries(Poly p, int cap) : cap_(cap), p_(p.truncated_series(cap)) {
        if (cap < 0) throw DomainError("series cap must be non-negative");
    }

    const Poly& poly() const { return p_; }
    int cap() const { return cap_; }

    bool is_zero() const { return p_.is_zero(); }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        return TruncSeries(a.p_ + b.p_, common_cap(a, b));
    }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        return TruncSeries(a.p_ - b.p_, common_cap(a, b));
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        return TruncSeries(a.p_ * b.p_, common_cap(a, b));
    }
    friend TruncSeries operator*(const TruncSeries& a, const Poly& b) {
        return TruncSeries(a.p_ * b, a.cap_);
    }
    TruncSeries operator-() const { return TruncSeries(-p_, cap_); }

    bool operator==(const TruncSeries& o) const { return cap_ == o.cap_ && p_ == o.p_; }

private:
    static int common_cap(const TruncSeries& a, const TruncSeries& b) {
        if (a.cap_ != b.cap_)
            throw DomainError("mixing series with caps " + std::to_string(a.cap_) + " and " +
                              std::to_string(b.cap_));
        return a.cap_;
    }

    int cap_;
    Poly p_;
};

/// Substitute series variables by polynomials of positive series degree,
/// truncating while powers are formed so composition of truncations stays
/// the truncation of the exact composite.
inline TruncSeries ts_substitute(const TruncSeries& s, const std::map<VarId, Poly>& bindings) {
    const int cap = s.cap();
    for (const auto& [v, val] : bindings) {
        if (!val.is_zero() && !val.series_constant_part().is_zero())
            throw DomainError("series substitution needs values with zero constant term (variable '" +
                              varid::name(v) + "')");
    }
    std::map<VarId, std::vector<Poly>> powers;
    auto power = [&](VarId v, int e) -> const Poly& {
        auto& tab = powers[v];
        if (tab.empty()) tab.push_back(Poly(Int(1)));
        while (static_cast<int>(tab.size()) <= e)
            tab.push_back((tab.back() * bindings.at(v)).truncated_series(cap));
        return tab[e];
    };
    Poly acc;
    for (const auto& [m, c] : s.poly().terms()) {
        Poly term(c, s.poly().ring());
        Monomial rest;
        for (const auto& [v, e] : m.factors()) {
            if (bindings.count(v))
                term = (term * power(v, e)).truncated_series(cap);
            else
                rest = rest * Monomial::var(v, e);
        }
        if (!rest.empty()) {
            Poly::Terms one;
            one.emplace(rest, Int(1));
            term = (term * Poly::from_terms(std::move(one), CoeffRing::integers())).truncated_series(cap);
        }
        acc += term;
    }
    if (s.poly().beta_shift() != 0) {
        Poly::Terms shift;
        shift.emplace(Monomial(), Int(1));
        acc = Poly::from_terms(std::move(shift), s.poly().ring(), s.poly().beta_shift()) * acc;
    }
    return TruncSeries(std::move(acc), cap);
}

/// Multiplicative inverse of a unit series: the constant coefficient must be
/// +-1, or +-b^k in the Laurent ring.
inline TruncSeries series_inverse(const TruncSeries& s) {
    Poly c0 = s.poly().series_constant_part();
    if (c0.terms().size() != 1)
        throw DomainError("series_inverse: constant term is not a unit: " + c0.to_string());
    const auto& [mono, coeff] = *c0.terms().begin();
    if (coeff != 1 && coeff != -1)
        throw DomainError("series_inverse: constant coefficient must be a unit, got " + coeff.str());
    int beta_exp = mono.exponent(varid::beta()) + c0.beta_shift();
    if (!mono.without(varid::beta(), varid::beta()).empty())
        throw DomainError("series_inverse: constant term is not a unit: " + c0.to_string());
    Poly c0_inv;
    if (beta_exp == 0) {
        c0_inv = Poly(coeff);
    } else {
        if (!s.poly().ring().beta_invertible())
            throw DomainError("series_inverse: b^" + std::to_string(beta_exp) +
                              " is only a unit in the Laurent ring");
        Poly::Terms one;
        one.emplace(Monomial(), coeff);
        c0_inv = Poly::from_terms(std::move(one), CoeffRing::integers_beta_laurent(), -beta_exp);
    }

    // s = c0 (1 - r) with r of positive series degree; 1/s = (1/c0) sum r^k.
    Poly r = Poly(Int(1)) - s.poly() * c0_inv;
    r = r.truncated_series(s.cap());
    Poly acc(Int(1));
    Poly pw(Int(1));
    for (int k = 1; k <= s.cap(); ++k) {
        pw = (pw * r).truncated_series(s.cap());
        if (pw.is_zero()) break;
        acc += pw;
    }
    return TruncSeries(acc * c0_inv, s.cap());
}

}  // namespace flagcalc
