#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flagcalc/perm.hpp"
#include "flagcalc/poly.hpp"
#include "flagcalc/rng.hpp"

namespace flagcalc {

/// Dense integer matrix with exact rank via fraction-free (Bareiss)
/// elimination.  No floating point anywhere.
class IntMatrix {
public:
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {
        if (rows < 0 || cols < 0) throw DomainError("negative matrix dimensions");
    }

    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int r, int c) {
        check(r, c);
        return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(c)];
    }
    const Int& at(int r, int c) const {
        check(r, c);
        return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(c)];
    }

    IntMatrix top_left(int r, int c) const {
        if (r > rows_ || c > cols_) throw DomainError("corner exceeds the matrix");
        IntMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = at(i, j);
        return m;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product shape mismatch");
        IntMatrix m(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.at(i, k) == 0) continue;
                for (int j = 0; j < b.cols_; ++j) m.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return m;
    }

    int rank() const {
        std::vector<Int> w = a_;
        auto e = [&](int r, int c) -> Int& {
            return w[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(c)];
        };
        int rank = 0;
        Int prev = 1;
        for (int col = 0; col < cols_ && rank < rows_; ++col) {
            int pivot = -1;
            for (int r = rank; r < rows_; ++r)
                if (e(r, col) != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) continue;
            if (pivot != rank)
                for (int c = 0; c < cols_; ++c) std::swap(e(pivot, c), e(rank, c));
            for (int r = rank + 1; r < rows_; ++r) {
                for (int c = col + 1; c < cols_; ++c)
                    e(r, c) = (e(rank, col) * e(r, c) - e(r, col) * e(rank, c)) / prev;
                e(r, col) = 0;
            }
            prev = e(rank, col);
            ++rank;
        }
        return rank;
    }

    bool operator==(const IntMatrix&) const = default;

private:
    void check(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw DomainError("matrix index out of range");
    }

    int rows_, cols_;
    std::vector<Int> a_;
};

enum class ConditionSet { All, Essential };

/// True iff rank(upper-left i x j of M) <= r_w(i,j) for every cell in the
/// chosen set.
inline bool satisfies_rank_conditions(const IntMatrix& m, const Permutation& w, ConditionSet which) {
    const int n = w.n();
    if (m.rows() != n || m.cols() != n) throw DomainError("matrix must be n x n with n = w.n");
    const RankTable rt(w);
    if (which == ConditionSet::All) {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                if (m.top_left(i, j).rank() > rt(i, j)) return false;
        return true;
    }
    for (const auto& [i, j] : essential_set(w))
        if (m.top_left(i, j).rank() > rt(i, j)) return false;
    return true;
}

namespace detail {

/// A 0/1 partial-permutation pattern whose corner dot counts obey the
/// essential bounds of w.  Corner ranks of L * P * V (L lower-, V
/// upper-triangular, nonzero diagonal) equal the pattern's dot counts, so the
/// product satisfies the essential conditions by construction.
inline IntMatrix essential_conditioned_pattern(const Permutation& w, Rng& rng) {
    const int n = w.n();
    const auto ess = essential_set(w);
    const RankTable rt(w);
    auto ok = [&](const std::vector<std::pair<int, int>>& dots) {
        for (const auto& [i, j] : ess) {
            int count = 0;
            for (const auto& [r, c] : dots)
                if (r <= i && c <= j) ++count;
            if (count > rt(i, j)) return false;
        }
        return true;
    };

    std::vector<std::pair<int, int>> dots;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        dots.clear();
        int k = rng.range(0, n);
        std::vector<int> rows(static_cast<std::size_t>(n)), cols(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) rows[static_cast<std::size_t>(q)] = cols[static_cast<std::size_t>(q)] = q + 1;
        for (int q = n - 1; q > 0; --q) {
            std::swap(rows[static_cast<std::size_t>(q)], rows[rng.below(static_cast<std::uint64_t>(q + 1))]);
            std::swap(cols[static_cast<std::size_t>(q)], cols[rng.below(static_cast<std::uint64_t>(q + 1))]);
        }
        for (int q = 0; q < k; ++q)
            dots.emplace_back(rows[static_cast<std::size_t>(q)], cols[static_cast<std::size_t>(q)]);
        found = ok(dots);
    }
    if (!found) {
        // fallback: thin out the permutation's own pattern (deleting dots
        // only lowers corner counts, so the bounds keep holding)
        dots.clear();
        for (int k = 1; k <= n; ++k)
            if (rng.below(4) != 0) dots.emplace_back(w(k), k);
    }

    IntMatrix p(n, n);
    for (const auto& [r, c] : dots) p.at(r - 1, c - 1) = 1;
    return p;
}

inline IntMatrix random_unitriangular(int n, bool lower, Rng& rng) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = rng.nonzero(3);
        for (int j = 0; j < i; ++j) {
            int v = rng.range(-3, 3);
            if (lower)
                m.at(i, j) = v;
            else
                m.at(j, i) = v;
        }
    }
    return m;
}

}  // namespace detail

/// A random integer matrix satisfying the essential rank conditions of w.
inline IntMatrix random_essential_matrix(const Permutation& w, Rng& rng) {
    const int n = w.n();
    IntMatrix pattern = detail::essential_conditioned_pattern(w, rng);
    IntMatrix l = detail::random_unitriangular(n, true, rng);
    IntMatrix v = detail::random_unitriangular(n, false, rng);
    return l * pattern * v;
}

struct SufficiencyReport {
    int trials = 0;
    int failures = 0;
    std::optional<IntMatrix> counterexample;

    bool ok() const { return failures == 0; }
};

/// The set-theoretic shadow of the essential-set lemma: random matrices
/// conditioned to satisfy the essential conditions must satisfy all of them.
inline SufficiencyReport essential_sufficiency_check(const Permutation& w, int trials,
                                                     std::uint64_t seed) {
    SufficiencyReport rep;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed + static_cast<std::uint64_t>(t) * 0x9e3779b9ULL);
        IntMatrix m = random_essential_matrix(w, rng);
        if (!satisfies_rank_conditions(m, w, ConditionSet::Essential))
            throw Error("internal error: conditioned matrix violates the essential conditions");
        ++rep.trials;
        if (!satisfies_rank_conditions(m, w, ConditionSet::All)) {
            ++rep.failures;
            if (!rep.counterexample) rep.counterexample = m;
        }
    }
    return rep;
}

struct SameRankReport {
    int e = 0, f = 0, n = 0;
    std::vector<std::pair<int, int>> inherited;  // cells inside the e x f corner
    std::vector<std::pair<int, int>> automatic;  // padded cells, impose nothing new
    int trials = 0;
    int mismatches = 0;

    bool ok() const { return mismatches == 0; }
};

/// Bookkeeping of the same-rank padding: an e x f problem with conditions
/// restricted from r_w is equivalent to the padded n x n problem [[M,0],[0,0]]
/// with the full condition set of w.  The numeric shadow checks the
/// equivalence on random matrices (plain and rank-degraded).
inline SameRankReport same_rank_embedding(int e, int f, const Permutation& w, int trials = 64,
                                          std::uint64_t seed = 1) {
    const int n = w.n();
    if (e < 1 || f < 1 || n < std::max(e, f))
        throw DomainError("need n >= max(e,f) with positive e, f");
    SameRankReport rep;
    rep.e = e;
    rep.f = f;
    rep.n = n;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            (i <= e && j <= f ? rep.inherited : rep.automatic).emplace_back(i, j);

    const RankTable rt(w);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        IntMatrix m(e, f);
        if (t % 2 == 0) {
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < f; ++j) m.at(i, j) = rng.range(-9, 9);
        } else {
            int r = rng.range(0, std::min(e, f));
            IntMatrix a(e, r), b2(r, f);
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < r; ++j) a.at(i, j) = rng.range(-3, 3);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < f; ++j) b2.at(i, j) = rng.range(-3, 3);
            m = a * b2;
        }
        bool corner_ok = true;
        for (int i = 1; i <= e && corner_ok; ++i)
            for (int j = 1; j <= f && corner_ok; ++j)
                if (m.top_left(i, j).rank() > rt(i, j)) corner_ok = false;

        IntMatrix padded(n, n);
        for (int i = 0; i < e; ++i)
            for (int j = 0; j < f; ++j) padded.at(i, j) = m.at(i, j);
        bool padded_ok = satisfies_rank_conditions(padded, w, ConditionSet::All);

        ++rep.trials;
        if (corner_ok != padded_ok) ++rep.mismatches;
    }
    return rep;
}

/// The detour through h' = id on V = E (+) F: the permutation is just w
/// included in S_{2n}, and the essential set does not move.
inline Permutation id_reduction_permutation(const Permutation& w) {
    Permutation embedded = w.embedded(2 * w.n());
    if (essential_set(embedded) != essential_set(w))
        throw Error("internal error: essential set moved under the canonical inclusion");
    return embedded;
}

/// A degeneracy locus of the expected dimension has codimension l(w).
inline int expected_codimension(const Permutation& w) { return w.length(); }

}  // namespace flagcalc
