#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flagcalc/series.hpp"

namespace flagcalc {

struct AxiomCheck {
    bool ok = true;
    std::string first_offender;  // textual witness, empty when ok
};

struct AxiomReport {
    AxiomCheck unit, commutativity, associativity;
    bool all_ok() const { return unit.ok && commutativity.ok && associativity.ok; }
};

/// A (truncated) one-dimensional commutative formal group law F(u,v) together
/// with its inverse series chi(u), solved once at construction.  Additive and
/// multiplicative laws remember their closed form, which keeps downstream
/// computations exact instead of truncated.
class FormalGroupLaw {
public:
    enum class Kind { Additive, Multiplicative, Custom };

    static FormalGroupLaw additive(int cap) {
        Poly f = Poly::variable("u") + Poly::variable("v");
        return FormalGroupLaw(Kind::Additive, TruncSeries(std::move(f), cap));
    }

    static FormalGroupLaw multiplicative(int cap) {
        Poly u = Poly::variable("u"), v = Poly::variable("v"), b = Poly::variable("b");
        return FormalGroupLaw(Kind::Multiplicative, TruncSeries(u + v - b * u * v, cap));
    }

    /// F = sum a_ij u^i v^j from an explicit coefficient table.  The table
    /// must be symmetric with a_10 = 1 and a_i0 = 0 otherwise; the law is not
    /// validated beyond that (run verify_axioms for the full check).
    static FormalGroupLaw from_coeffs(const std::map<std::pair<int, int>, Poly>& table, int cap) {
        auto at = [&](int i, int j) -> Poly {
            auto it = table.find({i, j});
            return it == table.end() ? Poly() : it->second;
        };
        for (const auto& [ij, c] : table) {
            auto [i, j] = ij;
            if (i < 0 || j < 0) throw DomainError("coefficient indices must be non-negative");
            if (!(at(i, j) == at(j, i)))
                throw DomainError("coefficient table is not symmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        }
        if (!(at(1, 0) == Poly(Int(1)))) throw DomainError("a_{1,0} must be 1");
        if (!at(0, 0).is_zero()) throw DomainError("a_{0,0} must be 0");
        for (const auto& [ij, c] : table) {
            auto [i, j] = ij;
            if (j == 0 && i != 1 && !c.is_zero())
                throw DomainError("a_{" + std::to_string(i) + ",0} must be 0");
        }
        Poly f;
        for (const auto& [ij, c] : table) {
            auto [i, j] = ij;
            if (c.is_zero()) continue;
            Poly::Terms t;
            t.emplace(Monomial::var(varid::u(), i) * Monomial::var(varid::v(), j), Int(1));
            f += c * Poly::from_terms(std::move(t), CoeffRing::integers());
        }
        return FormalGroupLaw(Kind::Custom, TruncSeries(std::move(f), cap));
    }

    /// A raw bivariate series with no precondition checks; verify_axioms does
    /// the judging.  The coefficient of v must still be 1 so the inverse
    /// series exists (construction fails otherwise).
    static FormalGroupLaw unchecked(Poly f, int cap) {
        return FormalGroupLaw(Kind::Custom, TruncSeries(std::move(f), cap));
    }

    Kind kind() const { return kind_; }
    int cap() const { return series_.cap(); }
    const TruncSeries& series() const { return series_; }
    const TruncSeries& chi() const { return chi_; }

    bool has_closed_form() const { return kind_ != Kind::Custom; }

    /// F(p, q) as a truncated series.
    TruncSeries apply(const TruncSeries& p, const TruncSeries& q) const {
        return ts_substitute(series_, {{varid::u(), p.poly()}, {varid::v(), q.poly()}});
    }

    /// F(p, q) exactly; only the additive and multiplicative laws are
    /// polynomial, and the arguments must have zero constant term.
    Poly apply_exact(const Poly& p, const Poly& q) const {
        if (!has_closed_form())
            throw DomainError("exact evaluation needs the additive or multiplicative law");
        if (!p.series_constant_part().is_zero() || !q.series_constant_part().is_zero())
            throw DomainError("exact F(p,q) needs arguments with zero constant term");
        if (kind_ == Kind::Additive) return p + q;
        return p + q - Poly::variable("b") * p * q;
    }

    /// chi(p) exactly (additive law only: chi = -u).
    Poly chi_exact(const Poly& p) const {
        if (kind_ != Kind::Additive) throw DomainError("chi is a genuine series for this law");
        return -p;
    }

    /// chi(p) truncated at the law's cap (or a caller cap).
    Poly chi_apply(const Poly& p, std::optional<int> cap = std::nullopt) const {
        if (kind_ == Kind::Additive) return -p;
        TruncSeries c = cap ? TruncSeries(chi_.poly(), *cap) : chi_;
        return ts_substitute(c, {{varid::u(), p}}).poly();
    }

    AxiomReport verify_axioms() const {
        AxiomReport rep;
        Poly u = Poly::variable("u"), v = Poly::variable("v"), w = Poly::variable("w");
        TruncSeries fu0 = ts_substitute(series_, {{varid::u(), u}, {varid::v(), Poly()}});
        TruncSeries f0v = ts_substitute(series_, {{varid::u(), Poly()}, {varid::v(), v}});
        Poly unit_defect = (fu0.poly() - u) + (f0v.poly() - v);
        rep.unit = check(unit_defect);

        TruncSeries swapped = ts_substitute(series_, {{varid::u(), v}, {varid::v(), u}});
        rep.commutativity = check(series_.poly() - swapped.poly());

        TruncSeries inner_vw = ts_substitute(series_, {{varid::u(), v}, {varid::v(), w}});
        TruncSeries lhs = ts_substitute(series_, {{varid::u(), u}, {varid::v(), inner_vw.poly()}});
        TruncSeries inner_uv = series_;
        TruncSeries rhs = ts_substitute(series_, {{varid::u(), inner_uv.poly()}, {varid::v(), w}});
        rep.associativity = check(lhs.poly() - rhs.poly());
        return rep;
    }

private:
    FormalGroupLaw(Kind kind, TruncSeries f)
        : kind_(kind), series_(std::move(f)), chi_(solve_chi(series_)) {}

    static AxiomCheck check(const Poly& defect) {
        AxiomCheck c;
        if (!defect.is_zero()) {
            c.ok = false;
            const auto& [m, coeff] = *defect.terms().begin();
            Poly::Terms t;
            t.emplace(m, coeff);
            c.first_offender = Poly::from_terms(std::move(t), defect.ring()).to_string();
        }
        return c;
    }

    /// Solve F(u, X(u)) = 0 degree by degree.  The unit axiom forces
    /// X = -u + higher order and makes the solution unique.
    static TruncSeries solve_chi(const TruncSeries& f) {
        const int cap = f.cap();
        Poly u = Poly::variable("u");
        Poly x = -u;
        for (int d = 2; d <= cap; ++d) {
            TruncSeries r = ts_substitute(f, {{varid::u(), u}, {varid::v(), x}});
            // collect the coefficient of u^d
            Poly correction;
            for (const auto& [m, c] : r.poly().terms()) {
                if (m.exponent(varid::u()) == d && m.series_degree() == d) {
                    Poly::Terms t;
                    t.emplace(*m.divided_by(Monomial::var(varid::u(), d)), c);
                    correction += Poly::from_terms(std::move(t), r.poly().ring());
                }
            }
            if (correction.is_zero()) continue;
            Poly::Terms ud;
            ud.emplace(Monomial::var(varid::u(), d), Int(1));
            x -= correction * Poly::from_terms(std::move(ud), CoeffRing::integers());
        }
        TruncSeries chi(x, cap);
        TruncSeries residual = ts_substitute(f, {{varid::u(), u}, {varid::v(), chi.poly()}});
        if (!residual.is_zero())
            throw Error("internal error: chi does not satisfy F(u, chi(u)) = 0 up to the cap");
        return chi;
    }

    Kind kind_;
    TruncSeries series_;  // F(u, v)
    TruncSeries chi_;     // chi(u)
};

inline FormalGroupLaw make_additive(int cap = 8) { return FormalGroupLaw::additive(cap); }
inline FormalGroupLaw make_multiplicative(int cap = 8) { return FormalGroupLaw::multiplicative(cap); }

/// Generators of the Lazard-ring ideal up to total degree `cap`: coefficients
/// of F(u,F(v,w)) - F(F(u,v),w) for the free symmetric law with unit
/// constraints pre-substituted.  Generator a_ij carries grade 1-i-j (the dual
/// convention would be i+j-1).
inline std::vector<Poly> lazard_relations(int cap) {
    if (cap < 3) return {};
    if (cap > 10) throw DomainError("lazard_relations supports caps up to 10");

    CoeffRing::GenTable grades;
    for (int i = 1; i < cap; ++i)
        for (int j = i; i + j <= cap; ++j)
            grades["a" + std::to_string(i) + std::to_string(j)] = 1 - i - j;
    CoeffRing ring = CoeffRing::named(grades);

    std::map<std::pair<int, int>, Poly> table;
    table[{1, 0}] = Poly(Int(1));
    table[{0, 1}] = Poly(Int(1));
    for (int i = 1; i < cap; ++i)
        for (int j = i; i + j <= cap; ++j) {
            std::string name = "a" + std::to_string(i) + std::to_string(j);
            Poly::Terms t;
            t.emplace(Monomial::var(varid::gen(name)), Int(1));
            Poly gen = Poly::from_terms(std::move(t), ring);
            table[{i, j}] = gen;
            table[{j, i}] = std::move(gen);
        }

    FormalGroupLaw free_law = FormalGroupLaw::from_coeffs(table, cap);
    Poly u = Poly::variable("u"), v = Poly::variable("v"), w = Poly::variable("w");
    TruncSeries inner_vw = free_law.apply(TruncSeries(v, cap), TruncSeries(w, cap));
    TruncSeries lhs = free_law.apply(TruncSeries(u, cap), inner_vw);
    TruncSeries inner_uv = free_law.apply(TruncSeries(u, cap), TruncSeries(v, cap));
    TruncSeries rhs = free_law.apply(inner_uv, TruncSeries(w, cap));
    Poly defect = lhs.poly() - rhs.poly();

    // group by the (u,v,w) monomial
    std::map<Monomial, Poly, MonoPrintLess> by_mono;
    VarId uu = varid::u(), vv = varid::v(), ww = varid::w();
    for (const auto& [m, c] : defect.terms()) {
        Monomial key = Monomial::var(uu, m.exponent(uu)) * Monomial::var(vv, m.exponent(vv)) *
                       Monomial::var(ww, m.exponent(ww));
        Monomial coeff_mono = *m.divided_by(key);
        Poly::Terms t;
        t.emplace(std::move(coeff_mono), c);
        by_mono[key] += Poly::from_terms(std::move(t), defect.ring());
    }

    std::vector<Poly> out;
    std::set<std::string> seen;
    for (auto& [key, rel] : by_mono) {
        if (rel.is_zero()) continue;
        if (rel.terms().begin()->second < 0) rel = -rel;  // sign-normalize
        if (seen.insert(rel.to_string()).second) out.push_back(std::move(rel));
    }
    return out;
}

/// F evaluated at two polynomials: exact for the additive and multiplicative
/// laws, truncated at `cap` otherwise.
inline Poly fgl_apply(const FormalGroupLaw& law, const Poly& p, const Poly& q,
                      std::optional<int> cap = std::nullopt) {
    if (law.has_closed_form() && !cap) return law.apply_exact(p, q);
    int c = cap.value_or(law.cap());
    return ts_substitute(TruncSeries(law.series().poly(), c),
                         {{varid::u(), p}, {varid::v(), q}})
        .poly();
}

}  // namespace flagcalc
