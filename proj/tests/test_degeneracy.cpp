#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "flagcalc/degeneracy.hpp"
#include "flagcalc/flag.hpp"

using namespace flagcalc;

namespace {
Permutation W(std::initializer_list<int> im) { return Permutation(std::vector<int>(im)); }

IntMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    int r = static_cast<int>(rows.size());
    int c = static_cast<int>(rows.begin()->size());
    IntMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (int v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

/// Independent rank oracle: Gaussian elimination over exact rationals.
int rank_oracle(const IntMatrix& m) {
    using Rat = boost::multiprecision::cpp_rational;
    std::vector<std::vector<Rat>> a(static_cast<std::size_t>(m.rows()),
                                    std::vector<Rat>(static_cast<std::size_t>(m.cols())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(m.at(i, j));
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(rank)]);
        for (int r = rank + 1; r < m.rows(); ++r) {
            Rat f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                    a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
            for (int c2 = col; c2 < m.cols(); ++c2)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] -=
                    f * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c2)];
        }
        ++rank;
    }
    return rank;
}
}  // namespace

TEST_CASE("bareiss rank agrees with the rational-elimination oracle") {
    Rng rng(404);
    for (int t = 0; t < 200; ++t) {
        int r = rng.range(1, 5), c = rng.range(1, 5);
        IntMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = rng.range(-9, 9);
        if (rng.below(3) == 0) {
            // rank-degraded product
            int k = rng.range(0, std::min(r, c));
            IntMatrix a(r, k), b(k, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < k; ++j) a.at(i, j) = rng.range(-4, 4);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < c; ++j) b.at(i, j) = rng.range(-4, 4);
            m = a * b;
        }
        CHECK(m.rank() == rank_oracle(m));
    }
}

TEST_CASE("rank handles degenerate matrices") {
    CHECK(IntMatrix::zero(3, 3).rank() == 0);
    CHECK(IntMatrix::identity(4).rank() == 4);
    IntMatrix wide = from_rows({{1, 2, 3, 4}});
    CHECK(wide.rank() == 1);
}

TEST_CASE("rank conditions on spec examples") {
    CHECK(satisfies_rank_conditions(IntMatrix::zero(3, 3), Permutation::longest(3),
                                    ConditionSet::All));
    CHECK_FALSE(satisfies_rank_conditions(IntMatrix::identity(3), Permutation::longest(3),
                                          ConditionSet::Essential));
    // upper-left 2x2 zero block with full border still satisfies w0's conditions
    IntMatrix m = from_rows({{0, 0, 1}, {0, 0, 2}, {3, 5, 7}});
    CHECK(satisfies_rank_conditions(m, Permutation::longest(3), ConditionSet::Essential));
    CHECK(satisfies_rank_conditions(m, Permutation::longest(3), ConditionSet::All));
    CHECK_THROWS_AS(satisfies_rank_conditions(IntMatrix::zero(2, 2), Permutation::longest(3),
                                              ConditionSet::All),
                    DomainError);
}

TEST_CASE("essential conditions suffice on conditioned random matrices") {
    for (auto w : {Permutation::longest(3), W({1, 3, 2})}) {
        auto rep = essential_sufficiency_check(w, 500, 7);
        CHECK(rep.trials == 500);
        CHECK(rep.ok());
    }
    // identity: no conditions, vacuously no counterexamples
    auto rep = essential_sufficiency_check(Permutation::identity(3), 10, 7);
    CHECK(rep.ok());
}

TEST_CASE("essential equivalence both ways for all of S4") {
    // forward: all => essential is structural; backward over conditioned
    // matrices is the lemma's shadow; plain random matrices check both
    // directions degenerately
    for (const auto& im : detail::all_permutation_images(4)) {
        Permutation w{im};
        CHECK(essential_sufficiency_check(w, 200, 2024).ok());
        Rng rng(99 + w.length());
        for (int t = 0; t < 20; ++t) {
            IntMatrix m(4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m.at(i, j) = rng.range(-9, 9);
            bool all = satisfies_rank_conditions(m, w, ConditionSet::All);
            bool ess = satisfies_rank_conditions(m, w, ConditionSet::Essential);
            CHECK(all == ess);
        }
    }
}

TEST_CASE("single rank condition reduces to one corner bound") {
    Rng rng(55);
    for (int e = 1; e <= 3; ++e)
        for (int f = 1; f <= 3; ++f)
            for (int l = 0; l < std::min(e, f); ++l) {
                Permutation w = single_condition_permutation(e, f, l);
                const int n = w.n();
                for (int t = 0; t < 40; ++t) {
                    IntMatrix m(n, n);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) m.at(i, j) = rng.range(-3, 3);
                    bool all = satisfies_rank_conditions(m, w, ConditionSet::All);
                    bool corner = m.top_left(e, f).rank() <= l;
                    CHECK(all == corner);
                }
            }
}

TEST_CASE("same-rank padding bookkeeping") {
    auto rep = same_rank_embedding(2, 2, W({2, 1}));
    CHECK(rep.n == 2);
    CHECK(rep.inherited.size() == 4);
    CHECK(rep.automatic.empty());
    CHECK(rep.ok());

    auto rep2 = same_rank_embedding(2, 1, W({2, 1}), 128, 5);
    CHECK(rep2.inherited.size() == 2);
    CHECK(rep2.automatic.size() == 2);
    CHECK(rep2.ok());

    auto rep3 = same_rank_embedding(1, 1, W({3, 1, 2}), 128, 6);
    CHECK(rep3.n == 3);
    CHECK(rep3.inherited.size() == 1);
    CHECK(rep3.automatic.size() == 8);
    CHECK(rep3.ok());

    CHECK_THROWS_AS(same_rank_embedding(3, 1, W({2, 1})), DomainError);
}

TEST_CASE("id reduction embeds into S_2n and keeps the essential set") {
    CHECK(id_reduction_permutation(W({2, 1})) == W({2, 1, 3, 4}));
    CHECK(id_reduction_permutation(Permutation::identity(2)) == Permutation::identity(4));
    for (const auto& im : detail::all_permutation_images(4)) {
        Permutation w{im};
        Permutation big = id_reduction_permutation(w);
        CHECK(big.n() == 8);
        CHECK(big.length() == w.length());
        CHECK(essential_set(big) == essential_set(w));
    }
}

TEST_CASE("expected codimension is the length") {
    CHECK(expected_codimension(Permutation::identity(3)) == 0);
    for (int n : {2, 3, 4, 5}) CHECK(expected_codimension(Permutation::longest(n)) == n * (n - 1) / 2);
    CHECK(expected_codimension(W({1, 3, 2})) == 1);
}
