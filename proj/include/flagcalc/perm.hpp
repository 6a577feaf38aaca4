#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flagcalc/errors.hpp"

namespace flagcalc {

/// Element of S_n in one-line notation; all interfaces are 1-based to match
/// the usual two-row displays.
class Permutation {
public:
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        const int n = static_cast<int>(images_.size());
        if (n == 0) throw DomainError("a permutation needs at least one point");
        std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
        for (int v : images_) {
            if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
                throw DomainError("not a bijection of {1..n}: " + to_string_of(images_));
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> im(static_cast<std::size_t>(n));
        std::iota(im.begin(), im.end(), 1);
        return Permutation(std::move(im));
    }

    /// w0 = [n, n-1, ..., 1].
    static Permutation longest(int n) {
        std::vector<int> im(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) im[static_cast<std::size_t>(k)] = n - k;
        return Permutation(std::move(im));
    }

    /// The elementary transposition s_i in S_n.
    static Permutation transposition(int n, int i) {
        if (i < 1 || i >= n) throw DomainError("s_i needs 1 <= i <= n-1");
        Permutation p = identity(n);
        std::swap(p.images_[static_cast<std::size_t>(i - 1)], p.images_[static_cast<std::size_t>(i)]);
        return p;
    }

    int n() const { return static_cast<int>(images_.size()); }
    const std::vector<int>& images() const { return images_; }
    int operator()(int k) const {
        if (k < 1 || k > n()) throw DomainError("argument out of range");
        return images_[static_cast<std::size_t>(k - 1)];
    }

    Permutation inverse() const {
        std::vector<int> inv(images_.size());
        for (int k = 1; k <= n(); ++k) inv[static_cast<std::size_t>((*this)(k)-1)] = k;
        return Permutation(std::move(inv));
    }

    /// Composition: (a*b)(k) = a(b(k)).
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        if (a.n() != b.n()) throw DomainError("composing permutations of different sizes");
        std::vector<int> im(a.images_.size());
        for (int k = 1; k <= a.n(); ++k) im[static_cast<std::size_t>(k - 1)] = a(b(k));
        return Permutation(std::move(im));
    }

    bool operator==(const Permutation&) const = default;
    bool operator<(const Permutation& o) const { return images_ < o.images_; }

    /// Inversion count; equals the size of any minimal decomposition.
    int length() const {
        int l = 0;
        for (int i = 0; i < n(); ++i)
            for (int j = i + 1; j < n(); ++j)
                if (images_[static_cast<std::size_t>(i)] > images_[static_cast<std::size_t>(j)]) ++l;
        return l;
    }

    bool is_identity() const { return length() == 0; }

    /// Canonical inclusion into S_m (fix the new points).
    Permutation embedded(int m) const {
        if (m < n()) throw DomainError("cannot embed into a smaller symmetric group");
        std::vector<int> im = images_;
        for (int k = n() + 1; k <= m; ++k) im.push_back(k);
        return Permutation(std::move(im));
    }

    /// w * s_i: exchanges positions i, i+1 of the one-line notation.
    Permutation times_s(int i) const {
        if (i < 1 || i >= n()) throw DomainError("s_i needs 1 <= i <= n-1");
        std::vector<int> im = images_;
        std::swap(im[static_cast<std::size_t>(i - 1)], im[static_cast<std::size_t>(i)]);
        return Permutation(std::move(im));
    }

    /// s_i * w: exchanges the values i, i+1.
    Permutation s_times(int i) const {
        if (i < 1 || i >= n()) throw DomainError("s_i needs 1 <= i <= n-1");
        std::vector<int> im = images_;
        for (int& v : im) {
            if (v == i)
                v = i + 1;
            else if (v == i + 1)
                v = i;
        }
        return Permutation(std::move(im));
    }

    /// l(w * s_i) = l(w) - 1 exactly when this holds.
    bool right_descent(int i) const { return (*this)(i) > (*this)(i + 1); }

    /// l(s_i * w) = l(w) - 1 exactly when this holds.
    bool left_descent(int i) const {
        const Permutation inv = inverse();
        return inv(i) > inv(i + 1);
    }

    std::string to_string() const { return to_string_of(images_); }

    /// Accepts "[2,3,1]" or bare "2,3,1".
    static Permutation parse(std::string_view text) {
        std::vector<int> im;
        std::string token;
        bool bracketed = false;
        for (char c : text) {
            if (c == '[') {
                bracketed = true;
                continue;
            }
            if (c == ']' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                if (!token.empty()) {
                    im.push_back(std::stoi(token));
                    token.clear();
                }
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("bad permutation text: '" + std::string(text) + "'");
            token.push_back(c);
        }
        if (!token.empty()) im.push_back(std::stoi(token));
        if (im.empty()) throw ParseError("empty permutation: '" + std::string(text) + "'");
        (void)bracketed;
        return Permutation(std::move(im));
    }

private:
    static std::string to_string_of(const std::vector<int>& im) {
        std::string s = "[";
        for (std::size_t k = 0; k < im.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(im[static_cast<std::size_t>(k)]);
        }
        return s + "]";
    }

    std::vector<int> images_;
};

/// A decomposition w = s_{i1} ... s_{il} with l = length(w).
struct ReducedWord {
    std::vector<int> word;
    Permutation target;

    bool valid() const {
        if (static_cast<int>(word.size()) != target.length()) return false;
        Permutation acc = Permutation::identity(target.n());
        for (int i : word) acc = acc.times_s(i);  // s_{i1} * ... * s_{il}, applied by right multiplication
        return acc == target;
    }
};

namespace detail {

inline void all_reduced_words_rec(const Permutation& w,
                                  std::map<std::vector<int>, std::vector<std::vector<int>>>& memo) {
    if (memo.count(w.images())) return;
    std::vector<std::vector<int>> words;
    if (w.length() == 0) {
        words.push_back({});
    } else {
        for (int i = 1; i < w.n(); ++i) {
            if (!w.right_descent(i)) continue;
            Permutation shorter = w.times_s(i);
            all_reduced_words_rec(shorter, memo);
            for (const auto& prefix : memo.at(shorter.images())) {
                std::vector<int> word = prefix;
                word.push_back(i);
                words.push_back(std::move(word));
            }
        }
        std::sort(words.begin(), words.end());
    }
    memo.emplace(w.images(), std::move(words));
}

}  // namespace detail

/// Every minimal decomposition of w, sorted lexicographically.  The memo is
/// per call, so concurrent callers do not share state.
inline std::vector<std::vector<int>> all_reduced_words(const Permutation& w) {
    std::map<std::vector<int>, std::vector<std::vector<int>>> memo;
    detail::all_reduced_words_rec(w, memo);
    return memo.at(w.images());
}

/// The lexicographically smallest reduced word, built greedily from left
/// descents (the first letter of a reduced word is always a left descent).
inline std::vector<int> lex_min_reduced_word(const Permutation& w) {
    std::vector<int> word;
    Permutation cur = w;
    while (cur.length() > 0) {
        for (int i = 1; i < cur.n(); ++i) {
            if (cur.left_descent(i)) {
                word.push_back(i);
                cur = cur.s_times(i);
                break;
            }
        }
    }
    return word;
}

/// r(i,j) = #{k <= j : w(k) <= i}.
class RankTable {
public:
    explicit RankTable(const Permutation& w) : n_(w.n()), r_(static_cast<std::size_t>(n_ * n_)) {
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j) {
                int count = 0;
                for (int k = 1; k <= j; ++k)
                    if (w(k) <= i) ++count;
                r_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))] = count;
            }
    }

    int n() const { return n_; }
    int operator()(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_) throw DomainError("rank table index out of range");
        return r_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
    }

private:
    int n_;
    std::vector<int> r_;
};

inline RankTable rank_table(const Permutation& w) { return RankTable(w); }

/// The essential set, oriented to match r(i,j) = #{k<=j : w(k)<=i} and
/// upper-left i-by-j rank conditions: (i,j) is essential iff
///   w(j) > i,  w(j+1) <= i,  w^-1(i) > j,  w^-1(i+1) <= j.
inline std::set<std::pair<int, int>> essential_set(const Permutation& w) {
    std::set<std::pair<int, int>> ess;
    const Permutation inv = w.inverse();
    for (int i = 1; i < w.n(); ++i)
        for (int j = 1; j < w.n(); ++j)
            if (w(j) > i && w(j + 1) <= i && inv(i) > j && inv(i + 1) <= j) ess.emplace(i, j);
    return ess;
}

/// The permutation in S_{e+f-l} whose single essential cell is (e,f) with
/// rank bound l: one-line [1..l, e+1..e+f-l, l+1..e].  When l = min(e,f) the
/// rank condition is vacuous and the result degenerates to the identity.
inline Permutation single_condition_permutation(int e, int f, int l) {
    if (e < 1 || f < 1) throw DomainError("e and f must be positive");
    if (l < 0 || l > std::min(e, f)) throw DomainError("need 0 <= l <= min(e,f)");
    std::vector<int> im;
    for (int k = 1; k <= l; ++k) im.push_back(k);
    for (int k = e + 1; k <= e + f - l; ++k) im.push_back(k);
    for (int k = l + 1; k <= e; ++k) im.push_back(k);
    Permutation w(std::move(im));

    if (l < std::min(e, f)) {
        std::set<std::pair<int, int>> expect{{e, f}};
        if (essential_set(w) != expect)
            throw Error("internal error: essential set of the single-condition permutation is off");
    } else if (!essential_set(w).empty()) {
        throw Error("internal error: degenerate single-condition permutation has rank conditions");
    }
    if (rank_table(w)(e, f) != l)
        throw Error("internal error: single-condition permutation has the wrong rank value");
    return w;
}

}  // namespace flagcalc
