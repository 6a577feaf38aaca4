#include <catch2/catch_amalgamated.hpp>

#include "flagcalc/chern.hpp"
#include "flagcalc/schubert.hpp"
#include "flagcalc/verify.hpp"

using namespace flagcalc;

namespace {
Poly P(const char* text) { return Poly::parse(text); }
}

TEST_CASE("dual bundles") {
    FormalGroupLaw add = make_additive(6), mult = make_multiplicative(6);
    RootedBundle line = sub_flag_bundle({P("y1")});

    RootedBundle dual_add = chern_dual(line, ChernEval::additive());
    CHECK(dual_add.flavor == BundleFlavor::QuotFlag);
    CHECK(dual_add.roots == std::vector<Poly>{P("-y1")});

    RootedBundle dual_mult = chern_dual(line, ChernEval::truncated(mult, 3));
    CHECK(dual_mult.roots == std::vector<Poly>{P("-y1 - b*y1^2 - b^2*y1^3")});

    RootedBundle rank2 = sub_flag_bundle({P("y1"), P("y2")});
    CHECK(chern_dual(rank2, ChernEval::additive()).roots ==
          std::vector<Poly>{P("-y1"), P("-y2")});

    CHECK_THROWS_AS(chern_dual(quot_flag_bundle({P("x1")}), ChernEval::additive()), DomainError);
}

TEST_CASE("tensor products") {
    RootedBundle e = quot_flag_bundle({P("x1")});
    RootedBundle f = quot_flag_bundle({P("y1")});
    CHECK(chern_tensor(e, f, ChernEval::additive()).factors ==
          std::vector<Factor>{{P("x1 + y1")}});
    CHECK(chern_tensor(e, f, ChernEval::ck_exact()).factors ==
          std::vector<Factor>{{P("x1 + y1 - b*x1*y1")}});
    RootedBundle e2 = quot_flag_bundle({P("x1"), P("x2")});
    auto prod = chern_tensor(e2, f, ChernEval::additive());
    FactorProduct expect;
    expect.insert({P("x1 + y1")});
    expect.insert({P("x2 + y1")});
    CHECK(prod.factors == expect.factors);
}

TEST_CASE("hom bundles") {
    RootedBundle e = sub_flag_bundle({P("y1")});
    RootedBundle f = quot_flag_bundle({P("x1")});
    CHECK(chern_hom(e, f, ChernEval::additive()).factors ==
          std::vector<Factor>{{P("x1 - y1")}});

    auto ck = chern_hom(e, f, ChernEval::ck_exact());
    REQUIRE(ck.size() == 1);
    CHECK(ck.factors[0].num == P("x1 - y1"));
    CHECK(ck.factors[0].den == P("1 - b*y1"));
    // the exact fraction expands to the truncated geometric series
    FormalGroupLaw mult = make_multiplicative(6);
    Poly expanded = (ck.factors[0].num *
                     series_inverse(TruncSeries(ck.factors[0].den, 5)).poly())
                        .truncated_series(5);
    Poly direct = chern_hom(e, f, ChernEval::truncated(mult, 5)).factors[0].num;
    CHECK(expanded == direct);

    RootedBundle f2 = quot_flag_bundle({P("x1"), P("x2")});
    auto two = chern_hom(e, f2, ChernEval::additive());
    FactorProduct expect;
    expect.insert({P("x1 - y1")});
    expect.insert({P("x2 - y1")});
    CHECK(two.factors == expect.factors);
}

TEST_CASE("kernel top Chern class via the Whitney ratio") {
    CHECK(kernel_top_chern(2, ChernEval::additive()).factors ==
          std::vector<Factor>{{P("x1 - y1")}});

    auto n3 = kernel_top_chern(3, ChernEval::additive());
    FactorProduct expect;
    expect.insert({P("x1 - y1")});
    expect.insert({P("x1 - y2")});
    expect.insert({P("x2 - y1")});
    CHECK(n3.factors == expect.factors);

    CHECK(kernel_top_chern(4, ChernEval::additive()).size() == 6);
    CHECK_THROWS_AS(kernel_top_chern(1, ChernEval::additive()), DomainError);
}

TEST_CASE("kernel class equals the closed form for every supported mode") {
    CHECK(verify_base_class(4).ok());
}

TEST_CASE("whitney consistency: hom products recombine") {
    for (int n = 2; n <= 4; ++n)
        for (auto ev : {ChernEval::additive(), ChernEval::ck_exact()}) {
            FactorProduct big, small;
            for (int l = 1; l <= n - 1; ++l)
                big = big * chern_hom(detail::standard_sub(l), detail::standard_quot(n - l), ev);
            for (int l = 1; l <= n - 2; ++l)
                small = small * chern_hom(detail::standard_sub(l), detail::standard_quot(n - l - 1), ev);
            FactorProduct recombined = kernel_top_chern(n, ev) * small;
            CHECK(recombined.factors == big.factors);
        }
}

TEST_CASE("base classes") {
    CHECK(bott_base_class(2, ChernEval::additive()).num == P("x1 - y1"));
    CHECK(bott_base_class(3, ChernEval::additive()).num ==
          top_poly(FamilyKind::Schubert, 3));

    RatPoly ck2 = bott_base_class(2, ChernEval::ck_exact());
    CHECK(ck2.num == P("x1 - y1"));
    CHECK(ck2.den == P("1 - b*y1"));

    // expansion of (x1-y1)/(1-b*y1) matches the truncated evaluation
    FormalGroupLaw mult = make_multiplicative(8);
    RatPoly trunc2 = bott_base_class(2, ChernEval::truncated(mult, 4));
    Poly expanded =
        (ck2.num * series_inverse(TruncSeries(ck2.den, 4)).poly()).truncated_series(4);
    CHECK(trunc2.num == expanded);
}

TEST_CASE("base class equals the Schubert top polynomial, additive mode") {
    for (int n = 2; n <= 4; ++n)
        CHECK(bott_base_class(n, ChernEval::additive()).num == top_poly(FamilyKind::Schubert, n));
}

TEST_CASE("multiset difference reports missing factors") {
    FactorProduct a, b;
    a.insert({P("x1 - y1")});
    b.insert({P("x1 - y2")});
    CHECK_THROWS_AS(multiset_divide(a, b), NonDivisibleError);
}
