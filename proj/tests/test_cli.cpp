#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "flagcalc/cli.hpp"

using namespace flagcalc;
using flagcalc::cli::run;

TEST_CASE("poly subcommand prints canonical text") {
    auto env = run({"poly", "beta", "--perm", "[2,1]"});
    CHECK(env.exit_code == 0);
    CHECK(env.out == "x1 + y1 + b*x1*y1\n");
    CHECK(run({"poly", "schubert", "--perm", "[1,2]"}).out == "1\n");
    CHECK(run({"poly", "schubert", "--perm", "[2,1]"}).out == "x1 - y1\n");
    CHECK(run({"poly", "grothendieck", "--perm", "[2,1]"}).out == "x1 + y1 - x1*y1\n");
}

TEST_CASE("verify subcommands exit 0 on pass") {
    CHECK(run({"verify", "special", "--n", "3"}).exit_code == 0);
    CHECK(run({"verify", "braid", "--n", "3", "--seed", "7"}).exit_code == 0);
    CHECK(run({"verify", "bott-ck", "--n", "2"}).exit_code == 0);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"poly", "beta"}).exit_code == 2);             // missing --perm
    CHECK(run({"nonsense"}).exit_code == 2);                 // unknown subcommand
    CHECK(run({"poly", "beta", "--perm", "[2,2]"}).exit_code == 2);  // not a bijection
    CHECK(run({"table", "--kind", "beta", "--n", "9"}).exit_code == 2);  // above the cap
}

TEST_CASE("table emits sorted rows that re-parse") {
    auto env = run({"table", "--kind", "schubert", "--n", "2"});
    CHECK(env.out == "[1,2]: 1\n[2,1]: x1 - y1\n");
    CHECK(run({"table", "--kind", "beta", "--n", "2"}).out ==
          "[1,2]: 1\n[2,1]: x1 + y1 + b*x1*y1\n");
    CHECK(run({"table", "--kind", "grothendieck", "--n", "1"}).out == "[1]: 1\n");

    auto big = run({"table", "--kind", "beta", "--n", "3"});
    REQUIRE(big.exit_code == 0);
    std::istringstream lines(big.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        auto colon = line.find(": ");
        REQUIRE(colon != std::string::npos);
        CHECK_NOTHROW(Permutation::parse(line.substr(0, colon)));
        CHECK_NOTHROW(Poly::parse(line.substr(colon + 2)));
        ++rows;
    }
    CHECK(rows == 6);
}

TEST_CASE("round-trip: emitted polynomials parse back to equal values") {
    auto env = run({"poly", "beta", "--perm", "[3,1,2]"});
    Poly p = Poly::parse(env.out.substr(0, env.out.size() - 1));
    CHECK(p == double_poly(FamilyKind::Beta, Permutation({3, 1, 2})));
}

TEST_CASE("determinism: identical argv, identical bytes") {
    std::vector<std::string> argv{"degeneracy", "check", "--perm", "[3,1,4,2]",
                                  "--trials", "50", "--seed", "99"};
    auto a = run(argv);
    auto b = run(argv);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    auto j1 = run({"poly", "beta", "--perm", "[3,1,2]", "--json"});
    auto j2 = run({"poly", "beta", "--perm", "[3,1,2]", "--json"});
    CHECK(j1.out == j2.out);
}

TEST_CASE("fgl subcommands") {
    CHECK(run({"fgl", "chi", "--law", "add", "--degree", "5"}).out == "-u\n");
    CHECK(run({"fgl", "chi", "--law", "mult", "--degree", "3"}).out == "-u - b*u^2 - b^2*u^3\n");
    auto ax = run({"fgl", "axioms", "--law", "mult", "--degree", "8"});
    CHECK(ax.exit_code == 0);
    CHECK(ax.out == "unit: pass\ncommutativity: pass\nassociativity: pass\n");
    auto laz = run({"fgl", "lazard", "--degree", "4"});
    CHECK(laz.exit_code == 0);
    CHECK_FALSE(laz.out.empty());
    CHECK(run({"fgl", "lazard", "--degree", "2"}).out == "(no relations up to degree 2)\n");
}

TEST_CASE("fgl law files load") {
    std::string path = "test_law_tmp.json";
    {
        std::ofstream f(path);
        f << R"({"1,0": "1", "0,1": "1", "1,1": "-b", "cap": 6})";
    }
    auto env = run({"fgl", "chi", "--law", path, "--degree", "3"});
    CHECK(env.out == "-u - b*u^2 - b^2*u^3\n");
    auto bad = run({"fgl", "chi", "--law", "no_such_file.json"});
    CHECK(bad.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("chern base-class") {
    auto env = run({"chern", "base-class", "--n", "2", "--law", "add"});
    CHECK(env.out == "x1 - y1\n");
    CHECK(run({"chern", "base-class", "--n", "2", "--law", "mult"}).out ==
          "(x1 - y1) / (1 - b*y1)\n");
    CHECK(run({"chern", "base-class", "--n", "3", "--law", "add", "--expand"}).out ==
          run({"poly", "schubert", "--perm", "[3,2,1]"}).out);
}

TEST_CASE("flag class and eq") {
    CHECK(run({"flag", "class", "--n", "2", "--mode", "ch"}).out == "x1 - y1\n");
    CHECK(run({"flag", "class", "--n", "2", "--mode", "ch", "--word", "1"}).out == "1\n");
    CHECK(run({"flag", "class", "--n", "2", "--mode", "ck"}).out ==
          "(x1 - y1) / (1 - b*y1)\n");

    auto pulled = run({"flag", "class", "--n", "2", "--mode", "ch", "--pullback", "z1,z2"});
    CHECK(pulled.out == "x1 - y1\npullback: z1 - y1\n");

    CHECK(run({"flag", "eq", "--n", "2", "--mode", "ch", "x1 + x2", "y1 + y2"}).exit_code == 0);
    auto neq = run({"flag", "eq", "--n", "2", "--mode", "ch", "x1", "y1"});
    CHECK(neq.exit_code == 1);
    CHECK(neq.out.find("not equal") == 0);
}

TEST_CASE("degeneracy subcommands") {
    auto ess = run({"degeneracy", "essential", "--perm", "[3,2,1]"});
    CHECK(ess.out == "(1,2): r=0\n(2,1): r=0\n");
    CHECK(run({"degeneracy", "essential", "--perm", "[1,2,3]"}).out == "(empty)\n");

    auto check = run({"degeneracy", "check", "--perm", "[1,3,2]", "--trials", "100", "--seed", "3"});
    CHECK(check.exit_code == 0);
    CHECK(check.out == "trials: 100, counterexamples: 0\n");

    auto matrix = run({"degeneracy", "check", "--perm", "[3,2,1]", "--matrix",
                       "[[0,0,1],[0,0,2],[3,5,7]]"});
    CHECK(matrix.exit_code == 0);
    CHECK(matrix.out == "essential: satisfied\nall: satisfied\n");
    auto viol = run({"degeneracy", "check", "--perm", "[3,2,1]", "--matrix",
                     "[[1,0,0],[0,1,0],[0,0,1]]"});
    CHECK(viol.out == "essential: violated\nall: violated\n");
}

TEST_CASE("json envelopes carry the command echo") {
    auto env = run({"poly", "beta", "--perm", "[2,1]", "--json"});
    auto j = Json::parse(env.out);
    CHECK(j.at("command").size() == 5);
    CHECK(j.at("result").at("text") == "x1 + y1 + b*x1*y1");
    Poly back = poly_from_json(j.at("result").at("poly"));
    CHECK(back == Poly::parse("x1 + y1 + b*x1*y1"));

    auto flag = run({"flag", "class", "--n", "2", "--mode", "ck", "--fingerprint", "--json"});
    auto jf = Json::parse(flag.out);
    CHECK(jf.at("result").at("mode") == "ck");
    CHECK(jf.at("result").at("fingerprint").size() == 2);
}

TEST_CASE("help exits 0") {
    CHECK(run({"--help"}).exit_code == 0);
}
