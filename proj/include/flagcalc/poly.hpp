#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flagcalc/errors.hpp"

namespace flagcalc {

using Int = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Variables
//
// A variable is a 64-bit id whose numeric order realises the canonical
// precedence x1 > x2 > ... > z1 > ... > y1 > ... > u,v,w,t > b > named
// generators (byte-lexicographic); z sits with the x-side roots it replaces
// in pullbacks.  Ids are pure functions of the name, so there is no registry
// object and no global state.
// ---------------------------------------------------------------------------

enum class VarClass : unsigned { X = 0, Z = 1, Y = 2, Aux = 3, Beta = 4, Gen = 5 };

using VarId = std::uint64_t;

namespace varid {

constexpr std::uint64_t kPayloadMask = (std::uint64_t(1) << 56) - 1;

constexpr VarId make(VarClass c, std::uint64_t payload) {
    return (static_cast<std::uint64_t>(c) << 56) | (payload & kPayloadMask);
}

constexpr VarClass cls(VarId id) { return static_cast<VarClass>(id >> 56); }
constexpr std::uint64_t payload(VarId id) { return id & kPayloadMask; }

inline VarId indexed(VarClass c, int i) {
    if (i < 1) throw DomainError("variable index must be >= 1");
    return make(c, static_cast<std::uint64_t>(i));
}

inline VarId x(int i) { return indexed(VarClass::X, i); }
inline VarId y(int i) { return indexed(VarClass::Y, i); }
inline VarId z(int i) { return indexed(VarClass::Z, i); }
inline VarId beta() { return make(VarClass::Beta, 0); }
inline VarId u() { return make(VarClass::Aux, 0); }
inline VarId v() { return make(VarClass::Aux, 1); }
inline VarId w() { return make(VarClass::Aux, 2); }
inline VarId t() { return make(VarClass::Aux, 3); }

inline int index(VarId id) { return static_cast<int>(payload(id)); }

/// Named generator (a11, c2, ...).  At most 7 bytes so the byte-packed id
/// stays collision-free; numeric id order equals byte-lexicographic order.
inline VarId gen(std::string_view name) {
    if (name.empty() || name.size() > 7)
        throw DomainError("generator name must have 1..7 characters: '" + std::string(name) + "'");
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        throw DomainError("generator name must start with a letter: '" + std::string(name) + "'");
    std::uint64_t p = 0;
    for (std::size_t k = 0; k < 7; ++k) {
        unsigned char ch = k < name.size() ? static_cast<unsigned char>(name[k]) : 0;
        if (ch != 0 && !(std::isalnum(ch) || ch == '_'))
            throw DomainError("bad character in generator name: '" + std::string(name) + "'");
        p = (p << 8) | ch;
    }
    return make(VarClass::Gen, p);
}

inline std::string name(VarId id) {
    switch (cls(id)) {
        case VarClass::X: return "x" + std::to_string(index(id));
        case VarClass::Y: return "y" + std::to_string(index(id));
        case VarClass::Z: return "z" + std::to_string(index(id));
        case VarClass::Aux: {
            static const char* names[4] = {"u", "v", "w", "t"};
            return names[payload(id) & 3];
        }
        case VarClass::Beta: return "b";
    }
    std::string s;
    std::uint64_t p = payload(id);
    for (int k = 6; k >= 0; --k) {
        unsigned char ch = static_cast<unsigned char>((p >> (8 * k)) & 0xff);
        if (ch != 0) s.push_back(static_cast<char>(ch));
    }
    return s;
}

/// Resolve a textual name.  "b" and "beta" are the same variable; x/y/z
/// require an index and are reserved.
inline VarId parse_name(std::string_view s) {
    if (s == "b" || s == "beta") return beta();
    if (s == "u") return u();
    if (s == "v") return v();
    if (s == "w") return w();
    if (s == "t") return t();
    if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'y' || s[0] == 'z')) {
        bool digits = true;
        for (std::size_t k = 1; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) digits = false;
        if (digits) {
            int idx = std::stoi(std::string(s.substr(1)));
            if (s[0] == 'x') return x(idx);
            if (s[0] == 'y') return y(idx);
            return z(idx);
        }
    }
    if (s == "x" || s == "y" || s == "z")
        throw ParseError("'" + std::string(s) + "' is reserved; indexed variables look like x1, y2, z3");
    return gen(s);
}

}  // namespace varid

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

class Monomial {
public:
    using Factor = std::pair<VarId, int>;

    Monomial() = default;

    static Monomial var(VarId v, int exp = 1) {
        Monomial m;
        if (exp < 0) throw DomainError("monomial exponents must be non-negative");
        if (exp > 0) m.f_.emplace_back(v, exp);
        return m;
    }

    bool empty() const { return f_.empty(); }
    const std::vector<Factor>& factors() const { return f_; }

    int degree() const {
        int d = 0;
        for (const auto& [v, e] : f_) d += e;
        return d;
    }

    /// Degree in the series variables only (x/y/z/u/v/w/t); b and named
    /// generators are coefficient symbols and do not count.
    int series_degree() const {
        int d = 0;
        for (const auto& [v, e] : f_)
            if (varid::cls(v) <= VarClass::Aux) d += e;
        return d;
    }

    int exponent(VarId v) const {
        auto it = std::lower_bound(f_.begin(), f_.end(), v,
                                   [](const Factor& f, VarId id) { return f.first < id; });
        return (it != f_.end() && it->first == v) ? it->second : 0;
    }

    Monomial without(VarId a, VarId b) const {
        Monomial m;
        m.f_.reserve(f_.size());
        for (const auto& fac : f_)
            if (fac.first != a && fac.first != b) m.f_.push_back(fac);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m;
        m.f_.reserve(a.f_.size() + b.f_.size());
        auto ia = a.f_.begin(), ib = b.f_.begin();
        while (ia != a.f_.end() || ib != b.f_.end()) {
            if (ib == b.f_.end() || (ia != a.f_.end() && ia->first < ib->first)) {
                m.f_.push_back(*ia++);
            } else if (ia == a.f_.end() || ib->first < ia->first) {
                m.f_.push_back(*ib++);
            } else {
                m.f_.emplace_back(ia->first, ia->second + ib->second);
                ++ia, ++ib;
            }
        }
        return m;
    }

    std::optional<Monomial> divided_by(const Monomial& d) const {
        Monomial m;
        auto ia = f_.begin();
        auto id = d.f_.begin();
        while (id != d.f_.end()) {
            if (ia == f_.end() || ia->first > id->first) return std::nullopt;
            if (ia->first < id->first) {
                m.f_.push_back(*ia++);
                continue;
            }
            if (ia->second < id->second) return std::nullopt;
            if (ia->second > id->second) m.f_.emplace_back(ia->first, ia->second - id->second);
            ++ia, ++id;
        }
        m.f_.insert(m.f_.end(), ia, f_.end());
        return m;
    }

    bool operator==(const Monomial&) const = default;

    /// Lexicographic comparison under the variable precedence: true when *this
    /// precedes o, i.e. the first variable (highest precedence) where the
    /// exponents differ has the larger exponent here.
    bool lex_before(const Monomial& o) const {
        auto ia = f_.begin(), ib = o.f_.begin();
        while (ia != f_.end() && ib != o.f_.end()) {
            if (ia->first < ib->first) return true;    // we own the higher-precedence var
            if (ib->first < ia->first) return false;
            if (ia->second != ib->second) return ia->second > ib->second;
            ++ia, ++ib;
        }
        return ia != f_.end();
    }

private:
    std::vector<Factor> f_;  // sorted by VarId, all exponents > 0
};

/// Canonical term order for storage and printing: ascending total degree,
/// ties broken lexicographically by precedence (so x1^2 before x1*y1).
struct MonoPrintLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.lex_before(b);
    }
};

/// Division order: descending total degree, ties lexicographic.  begin() of a
/// map under this order is the leading term used by exact_div.
struct MonoDivLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da > db;
        return a.lex_before(b);
    }
};

// ---------------------------------------------------------------------------
// Coefficient rings
//
// The supported kinds (Z, Z[b], Z[b,b^-1], Z adjoined named generators) are
// realised by two facts: whether b is invertible and which named generators
// (with their grades) are declared.  join() computes the smallest common
// ring; the only hard failure is a grade conflict between generators.
// ---------------------------------------------------------------------------

enum class RingKind { Integers, IntegersBeta, IntegersBetaLaurent, NamedPolynomial };

class CoeffRing {
public:
    using GenTable = std::map<std::string, int>;  // name -> grade

    CoeffRing() = default;

    static CoeffRing integers() { return CoeffRing(); }
    static CoeffRing integers_beta() {
        CoeffRing r;
        r.has_beta_ = true;
        return r;
    }
    static CoeffRing integers_beta_laurent() {
        CoeffRing r;
        r.has_beta_ = true;
        r.laurent_ = true;
        return r;
    }
    static CoeffRing named(GenTable grades) {
        CoeffRing r;
        r.gens_ = std::make_shared<const GenTable>(std::move(grades));
        return r;
    }

    bool beta_invertible() const { return laurent_; }
    bool has_generators() const { return gens_ && !gens_->empty(); }
    const GenTable& generators() const {
        static const GenTable empty;
        return gens_ ? *gens_ : empty;
    }

    RingKind kind() const {
        if (has_generators()) return RingKind::NamedPolynomial;
        if (laurent_) return RingKind::IntegersBetaLaurent;
        if (has_beta_) return RingKind::IntegersBeta;
        return RingKind::Integers;
    }

    std::string kind_name() const {
        switch (kind()) {
            case RingKind::Integers: return "integers";
            case RingKind::IntegersBeta: return "integers-beta";
            case RingKind::IntegersBetaLaurent: return "integers-beta-laurent";
            case RingKind::NamedPolynomial: return "named-polynomial";
        }
        return "?";
    }

    friend CoeffRing join(const CoeffRing& a, const CoeffRing& b) {
        CoeffRing r;
        r.has_beta_ = a.has_beta_ || b.has_beta_;
        r.laurent_ = a.laurent_ || b.laurent_;
        if (!a.has_generators()) {
            r.gens_ = b.gens_;
        } else if (!b.has_generators()) {
            r.gens_ = a.gens_;
        } else if (a.gens_ == b.gens_) {
            r.gens_ = a.gens_;
        } else {
            GenTable merged = *a.gens_;
            for (const auto& [name, grade] : *b.gens_) {
                auto [it, fresh] = merged.emplace(name, grade);
                if (!fresh && it->second != grade)
                    throw RingMismatchError("generator '" + name + "' declared with grades " +
                                            std::to_string(it->second) + " and " + std::to_string(grade));
            }
            r.gens_ = std::make_shared<const GenTable>(std::move(merged));
        }
        return r;
    }

    bool operator==(const CoeffRing& o) const {
        return has_beta_ == o.has_beta_ && laurent_ == o.laurent_ && generators() == o.generators();
    }

private:
    bool has_beta_ = false;
    bool laurent_ = false;
    std::shared_ptr<const GenTable> gens_;
};

// ---------------------------------------------------------------------------
// Sparse polynomials
// ---------------------------------------------------------------------------

class Poly {
public:
    using Terms = std::map<Monomial, Int, MonoPrintLess>;

    Poly() = default;
    explicit Poly(Int c) {
        if (c != 0) terms_.emplace(Monomial(), std::move(c));
    }
    Poly(Int c, CoeffRing ring) : ring_(std::move(ring)) {
        if (c != 0) terms_.emplace(Monomial(), std::move(c));
    }

    static Poly constant(Int c) { return Poly(std::move(c)); }

    static Poly var(VarId v, int exp = 1) {
        Poly p;
        if (varid::cls(v) == VarClass::Beta)
            p.ring_ = CoeffRing::integers_beta();
        else if (varid::cls(v) == VarClass::Gen)
            p.ring_ = CoeffRing::named({{varid::name(v), 0}});
        p.terms_.emplace(Monomial::var(v, exp), Int(1));
        return p;
    }

    static Poly variable(std::string_view name) { return var(varid::parse_name(name)); }

    static Poly from_terms(Terms terms, CoeffRing ring, int beta_shift = 0) {
        Poly p;
        p.terms_ = std::move(terms);
        p.ring_ = std::move(ring);
        p.beta_shift_ = beta_shift;
        p.normalize();
        return p;
    }

    const CoeffRing& ring() const { return ring_; }
    const Terms& terms() const { return terms_; }
    int beta_shift() const { return beta_shift_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty() && beta_shift_ == 0);
    }

    /// Constant (as integer) when the polynomial is one; throws otherwise.
    Int constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw DomainError("polynomial is not constant: " + to_string());
        return terms_.begin()->second;
    }

    Int coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Int(0) : it->second;
    }

    /// Max total degree, -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    int series_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.series_degree());
        return d;
    }

    int degree_in(VarId v) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
        return d;
    }

    /// The part of series degree zero (what the series code treats as the
    /// constant coefficient).
    Poly series_constant_part() const {
        Terms t;
        for (const auto& [m, c] : terms_)
            if (m.series_degree() == 0) t.emplace(m, c);
        return from_terms(std::move(t), ring_, beta_shift_);
    }

    /// Drop every term of series degree greater than cap.
    Poly truncated_series(int cap) const {
        Terms t;
        for (const auto& [m, c] : terms_)
            if (m.series_degree() <= cap) t.emplace(m, c);
        return from_terms(std::move(t), ring_, beta_shift_);
    }

    std::vector<VarId> variables() const {
        std::vector<VarId> vs;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.factors()) vs.push_back(v);
        if (beta_shift_ != 0) vs.push_back(varid::beta());
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    Poly& operator+=(const Poly& o) { return add_scaled(o, Int(1)); }
    Poly& operator-=(const Poly& o) { return add_scaled(o, Int(-1)); }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    Poly operator-() const {
        Poly p = *this;
        for (auto& [m, c] : p.terms_) c = -c;
        return p;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly p;
        p.ring_ = join(a.ring_, b.ring_);
        p.beta_shift_ = a.beta_shift_ + b.beta_shift_;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma * mb;
                auto [it, fresh] = p.terms_.emplace(std::move(m), ca * cb);
                if (!fresh) {
                    it->second += ca * cb;
                    if (it->second == 0) p.terms_.erase(it);
                }
            }
        p.normalize();
        return p;
    }

    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const Poly& a, const Int& k) {
        Poly p = a;
        if (k == 0) {
            p.terms_.clear();
            p.beta_shift_ = 0;
            return p;
        }
        for (auto& [m, c] : p.terms_) c *= k;
        return p;
    }
    friend Poly operator*(const Int& k, const Poly& a) { return a * k; }

    /// Equality is structural on the value (terms plus Laurent shift); the
    /// ring tag is bookkeeping and intentionally not compared.
    bool operator==(const Poly& o) const { return beta_shift_ == o.beta_shift_ && terms_ == o.terms_; }

    std::string to_string() const;
    static Poly parse(std::string_view text);

    /// Structural order usable as a container key; consistent with ==.
    friend bool poly_less(const Poly& a, const Poly& b) {
        if (a.beta_shift_ != b.beta_shift_) return a.beta_shift_ < b.beta_shift_;
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        MonoPrintLess less;
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            if (less(ia->first, ib->first)) return true;
            if (less(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ib != b.terms_.end();
    }

private:
    Poly& add_scaled(const Poly& o, const Int& sign) {
        ring_ = join(ring_, o.ring_);
        int shift = std::min(beta_shift_, o.beta_shift_);
        rebase(shift);
        Monomial lift;
        if (o.beta_shift_ != shift) lift = Monomial::var(varid::beta(), o.beta_shift_ - shift);
        for (const auto& [m, c] : o.terms_) {
            auto [it, fresh] = terms_.emplace(m * lift, c * sign);
            if (!fresh) {
                it->second += c * sign;
                if (it->second == 0) terms_.erase(it);
            }
        }
        normalize();
        return *this;
    }

    void rebase(int shift) {
        if (shift == beta_shift_) return;
        Monomial lift = Monomial::var(varid::beta(), beta_shift_ - shift);
        Terms t;
        for (auto& [m, c] : terms_) t.emplace(m * lift, std::move(c));
        terms_ = std::move(t);
        beta_shift_ = shift;
    }

    void normalize() {
        if (terms_.empty()) {
            beta_shift_ = 0;
            return;
        }
        if (beta_shift_ != 0 && !ring_.beta_invertible())
            throw RingMismatchError("negative powers of b require the Laurent ring");
        if (!ring_.beta_invertible()) return;
        int g = INT32_MAX;
        for (const auto& [m, c] : terms_) g = std::min(g, m.exponent(varid::beta()));
        if (g > 0) {
            Terms t;
            Monomial drop = Monomial::var(varid::beta(), g);
            for (auto& [m, c] : terms_) t.emplace(*m.divided_by(drop), std::move(c));
            terms_ = std::move(t);
            beta_shift_ += g;
        }
    }

    CoeffRing ring_;
    int beta_shift_ = 0;  // value = b^beta_shift * (sum of terms); Laurent rings only
    Terms terms_;
};

/// Exchange x_i and x_{i+1}.
inline Poly swap_vars(const Poly& p, int i) {
    VarId xi = varid::x(i), xj = varid::x(i + 1);
    Poly::Terms t;
    for (const auto& [m, c] : p.terms()) {
        int a = m.exponent(xi), b = m.exponent(xj);
        if (a == b) {
            t.emplace(m, c);
            continue;
        }
        Monomial r = m.without(xi, xj) * Monomial::var(xi, b) * Monomial::var(xj, a);
        t.emplace(std::move(r), c);
    }
    return Poly::from_terms(std::move(t), p.ring(), p.beta_shift());
}

inline bool is_symmetric(const Poly& p, int i) { return swap_vars(p, i) == p; }

/// Simultaneous substitution.  In strict mode every variable of p must be
/// bound; otherwise unbound variables pass through.
inline Poly substitute(const Poly& p, const std::map<VarId, Poly>& bindings, bool strict = false) {
    std::map<VarId, std::vector<Poly>> powers;  // powers[v][k] = value^k
    auto power = [&](VarId v, int e) -> const Poly& {
        auto& tab = powers[v];
        if (tab.empty()) tab.push_back(Poly(Int(1)));
        while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * bindings.at(v));
        return tab[e];
    };
    Poly result;
    for (const auto& [m, c] : p.terms()) {
        Poly term(c, p.ring());
        Monomial passthrough;
        for (const auto& [v, e] : m.factors()) {
            if (bindings.count(v)) {
                term *= power(v, e);
            } else {
                if (strict)
                    throw DomainError("unbound variable '" + varid::name(v) + "' in strict substitution");
                passthrough = passthrough * Monomial::var(v, e);
            }
        }
        if (!passthrough.empty()) {
            Poly::Terms one;
            one.emplace(passthrough, Int(1));
            term *= Poly::from_terms(std::move(one), CoeffRing::integers());
        }
        result += term;
    }
    if (p.beta_shift() != 0) {
        Poly::Terms shift;
        shift.emplace(Monomial(), Int(1));
        result = Poly::from_terms(std::move(shift), p.ring(), p.beta_shift()) * result;
    }
    return result;
}

/// Exact division; throws NonDivisibleError when den does not divide num.
inline Poly exact_div(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw NonDivisibleError("division by the zero polynomial");
    if (num.beta_shift() != 0 || den.beta_shift() != 0)
        throw DomainError("exact_div does not operate on Laurent-shifted values");
    CoeffRing ring = join(num.ring(), den.ring());
    if (num.is_zero()) return Poly(Int(0), ring);

    using DivMap = std::map<Monomial, Int, MonoDivLess>;
    DivMap r(num.terms().begin(), num.terms().end());
    DivMap d(den.terms().begin(), den.terms().end());
    const Monomial& lead_m = d.begin()->first;
    const Int& lead_c = d.begin()->second;

    Poly::Terms q;
    while (!r.empty()) {
        const Monomial& rm = r.begin()->first;
        const Int& rc = r.begin()->second;
        auto qm = rm.divided_by(lead_m);
        if (!qm || rc % lead_c != 0)
            throw NonDivisibleError("NON-DIVISIBLE: remainder is nonzero");
        Int qc = rc / lead_c;
        for (const auto& [dm, dc] : d) {
            Monomial m = *qm * dm;
            auto [it, fresh] = r.emplace(std::move(m), -qc * dc);
            if (!fresh) {
                it->second -= qc * dc;
                if (it->second == 0) r.erase(it);
            }
        }
        q.emplace(std::move(*qm), std::move(qc));
    }
    return Poly::from_terms(std::move(q), std::move(ring));
}

enum class ArithOp { Add, Sub, Mul };

inline Poly arith(const Poly& a, const Poly& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
    }
    throw DomainError("unknown arithmetic op");
}

// ---------------------------------------------------------------------------
// Printing
//
// Text format: signed monomials in canonical order, '^' for powers, '*'
// between factors, b printed before the series variables ("b^2*x1*y1").
// ---------------------------------------------------------------------------

inline std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        Int mag = neg ? Int(-c) : c;

        std::vector<std::pair<VarId, int>> show;
        int beta_exp = beta_shift_;
        for (const auto& [v, e] : m.factors()) {
            if (varid::cls(v) == VarClass::Beta)
                beta_exp += e;
            else
                show.emplace_back(v, e);
        }
        // b first, then named generators, then series variables.
        std::stable_sort(show.begin(), show.end(), [](const auto& a, const auto& b) {
            bool ga = varid::cls(a.first) == VarClass::Gen;
            bool gb = varid::cls(b.first) == VarClass::Gen;
            if (ga != gb) return ga;
            return a.first < b.first;
        });

        bool wrote = false;
        if (mag != 1 || (show.empty() && beta_exp == 0)) {
            os << mag.str();
            wrote = true;
        }
        if (beta_exp != 0) {
            if (wrote) os << "*";
            os << "b";
            if (beta_exp != 1) os << "^" << beta_exp;
            wrote = true;
        }
        for (const auto& [v, e] : show) {
            if (wrote) os << "*";
            os << varid::name(v);
            if (e != 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct PolyParser {
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip();
        return pos >= s.size();
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Poly parse_expression() {
        Poly acc;
        bool neg = false;
        if (consume('-'))
            neg = true;
        else
            consume('+');
        acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                Poly t = parse_term();
                acc = (c == '+') ? acc + t : acc - t;
            } else {
                break;
            }
        }
        return acc;
    }

    Poly parse_term() {
        Poly acc = parse_factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                acc *= parse_factor();
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_') {
                acc *= parse_factor();  // implicit multiplication
            } else {
                break;
            }
        }
        return acc;
    }

    Poly parse_factor() {
        Poly base = parse_base();
        if (consume('^')) {
            bool neg = consume('-');
            long e = parse_integer();
            if (neg) {
                // negative exponents are legal only for b (Laurent mode)
                VarId b = varid::beta();
                Poly expect = Poly::var(b);
                if (!(base == expect))
                    throw ParseError("negative exponents are only supported on b");
                Poly::Terms one;
                one.emplace(Monomial(), Int(1));
                return Poly::from_terms(std::move(one), CoeffRing::integers_beta_laurent(),
                                        static_cast<int>(-e));
            }
            Poly acc(Int(1));
            for (long k = 0; k < e; ++k) acc *= base;
            return acc;
        }
        return base;
    }

    long parse_integer() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw ParseError("expected an integer at position " + std::to_string(pos));
        return std::stol(std::string(s.substr(start, pos - start)));
    }

    Poly parse_base() {
        skip();
        if (pos >= s.size()) throw ParseError("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Poly inner = parse_expression();
            if (!consume(')')) throw ParseError("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return Poly(Int(std::string(s.substr(start, pos - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            return Poly::variable(s.substr(start, pos - start));
        }
        throw ParseError(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace detail

inline Poly Poly::parse(std::string_view text) {
    detail::PolyParser p{text};
    if (p.eof()) throw ParseError("empty polynomial");
    Poly result = p.parse_expression();
    if (!p.eof()) throw ParseError("trailing input at position " + std::to_string(p.pos));
    return result;
}

// ---------------------------------------------------------------------------
// Rational polynomials (numerator / denominator)
//
// Used for connected-K-theory classes where denominators are products of
// (1 - b*y_j); those are units in the completed ring, so exact fraction
// arithmetic replaces series truncation.
// ---------------------------------------------------------------------------

struct RatPoly {
    Poly num;
    Poly den = Poly(Int(1));

    bool den_is_one() const { return den == Poly(Int(1)); }

    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        return {a.num * b.num, a.den * b.den};
    }

    /// Equality as rational functions (cross multiplication); assumes nonzero
    /// denominators, which holds for the unit denominators used here.
    friend bool rat_eq(const RatPoly& a, const RatPoly& b) {
        return a.num * b.den == b.num * a.den;
    }

    std::string to_string() const {
        if (den_is_one()) return num.to_string();
        return "(" + num.to_string() + ") / (" + den.to_string() + ")";
    }
};

/// Substitute beta := scalar * b^power (covers 0, -1, sign flips and Laurent
/// units).  A negative power promotes the result into the Laurent ring.
struct BetaValue {
    Int scalar;
    int power;

    static BetaValue zero() { return {0, 0}; }
    static BetaValue minus_one() { return {-1, 0}; }
    static BetaValue identity() { return {1, 1}; }
    static BetaValue negated() { return {-1, 1}; }
    static BetaValue laurent_unit(Int scalar, int power) { return {std::move(scalar), power}; }
};

inline Poly specialize_beta(const Poly& p, const BetaValue& val) {
    VarId b = varid::beta();
    struct Staged {
        Monomial mono;  // b removed
        Int coeff;
        int beta_exp;   // exponent after specialization
    };
    std::vector<Staged> staged;
    int min_exp = 0;
    for (const auto& [m, c] : p.terms()) {
        int e = m.exponent(b) + p.beta_shift();
        Int coeff = c;
        if (e != 0) {
            if (val.scalar == 0) continue;
            if (e < 0 && val.scalar != 1 && val.scalar != -1)
                throw DomainError("negative beta exponent needs a unit scalar");
            for (int k = 0; k < (e < 0 ? -e : e); ++k) coeff *= val.scalar;
        }
        int new_exp = e * val.power;
        min_exp = std::min(min_exp, new_exp);
        staged.push_back({m.without(b, b), std::move(coeff), new_exp});
    }
    CoeffRing ring = p.ring();
    if (min_exp < 0 && !ring.beta_invertible())
        ring = join(ring, CoeffRing::integers_beta_laurent());
    Poly::Terms out;
    for (auto& s : staged) {
        Monomial m = s.beta_exp > min_exp ? s.mono * Monomial::var(b, s.beta_exp - min_exp) : s.mono;
        auto [it, fresh] = out.emplace(std::move(m), s.coeff);
        if (!fresh) {
            it->second += s.coeff;
            if (it->second == 0) out.erase(it);
        }
    }
    return Poly::from_terms(std::move(out), ring, min_exp);
}

}  // namespace flagcalc
