#include <catch2/catch.hpp>

#include <sstream>

#include "factlab/arith.hpp"
#include "factlab/mpoly.hpp"
#include "factlab/polyroots.hpp"

using namespace factlab;
using namespace factlab::poly;

namespace {

MPoly from_terms(std::vector<std::string> vars,
                 std::vector<std::pair<ExpVec, long>> terms) {
    MPoly f(std::move(vars));
    for (auto& [e, c] : terms) f.add_term(e, Int(c));
    return f;
}

}  // namespace

TEST_CASE("ring arithmetic") {
    MPoly x = MPoly::variable("x");
    MPoly y = MPoly::variable("y");
    SECTION("difference of squares identity") {
        MPoly lhs = (x + y) * (x - y);
        MPoly rhs = x * x - y * y;
        CHECK(lhs == rhs);
    }
    SECTION("additive identity") {
        MPoly f = x * y - MPoly::constant(15);
        CHECK(f + MPoly() == f);
    }
    SECTION("hand expansion with three variables") {
        MPoly X = MPoly::variable("X"), Y = MPoly::variable("Y"), z = MPoly::variable("z");
        MPoly f = (X + Y - z) * X;
        MPoly expect = from_terms({"X", "Y", "z"}, {{{2, 0, 0}, 1}, {{1, 1, 0}, 1}, {{1, 0, 1}, -1}});
        CHECK(f == expect);
    }
}

TEST_CASE("evaluation") {
    MPoly f = MPoly::variable("x") * MPoly::variable("y") - MPoly::constant(15);
    CHECK(f.evaluate({Int(3), Int(5)}) == 0);
    MPoly g = MPoly::variable("x") + MPoly::variable("y") - MPoly::variable("z");
    CHECK(g.evaluate({Int(1), Int(2), Int(4)}) == -1);
    CHECK_THROWS_AS(g.evaluate({Int(1)}), std::domain_error);

    // u1 = X^2 - zX + N vanishes at (p, q, p+q)
    Int p(9521), q(20369), N = p * q;
    MPoly u1 = from_terms({"X", "Y", "z"}, {{{2, 0, 0}, 1}, {{1, 0, 1}, -1}});
    u1.add_term({0, 0, 0}, N);
    CHECK(u1.evaluate({p, q, p + q}) == 0);
}

TEST_CASE("norms") {
    MPoly f = MPoly::variable("x") + MPoly::variable("y") - MPoly::variable("z");
    auto n = norms(f);
    CHECK(n.l2_squared == 3);
    CHECK(n.sup == 1);

    MPoly g = from_terms({"x", "y"}, {{{1, 1}, 2}, {{1, 0}, -3}, {{0, 0}, 5}});
    auto ng = norms(g);
    CHECK(ng.l2_squared == 38);
    CHECK(ng.sup == 5);

    auto nz = norms(MPoly());
    CHECK(nz.l2_squared == 0);
    CHECK(nz.sup == 0);
}

TEST_CASE("height") {
    MPoly f = MPoly::variable("x") + MPoly::variable("y");
    CHECK(height(f, {Int(2), Int(3)}) == 3);

    // Shifted-center polynomial at alpha*beta != 1: the constant dominates.
    Int N("100000000000039");
    Rat alpha(20, 37), beta(43, 20);
    Int a = arith::round_sqrt_rational(alpha.get_num() * N, alpha.get_den());
    Int b = arith::round_sqrt_rational(beta.get_num() * N, beta.get_den());
    MPoly f6({"x", "y"});
    f6.add_term({1, 1}, 1);
    f6.add_term({1, 0}, -b);
    f6.add_term({0, 1}, -a);
    f6.add_term({0, 0}, a * b - N);
    Int X = 2 * arith::ceil_root(N, 3);
    CHECK(height(f6, {X, X}) == abs(a * b - N));

    CHECK_THROWS_AS(height(f, {Int(0), Int(1)}), std::domain_error);
}

TEST_CASE("resultants") {
    Int N(193933249);
    MPoly u0 = from_terms({"X", "Y", "z"}, {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, -1}});
    MPoly u1 = from_terms({"X", "Y", "z"}, {{{2, 0, 0}, 1}, {{1, 0, 1}, -1}});
    u1.add_term({0, 0, 0}, N);
    MPoly u3 = from_terms({"X", "Y", "z"}, {{{4, 0, 0}, 1}, {{2, 0, 2}, -1}});
    u3.add_term({2, 0, 0}, 2 * N);
    u3.add_term({0, 0, 0}, N * N);

    SECTION("printed degree-4 elimination") {
        MPoly r = resultant(u0, u3, "z");
        MPoly expect({"X", "Y"});
        expect.add_term({3, 1}, -2);
        expect.add_term({2, 2}, -1);
        expect.add_term({2, 0}, 2 * N);
        expect.add_term({0, 0}, N * N);
        CHECK(r == expect);
    }
    SECTION("printed degree-6 elimination") {
        MPoly u5 = from_terms({"X", "Y", "z"}, {{{6, 0, 0}, 1}, {{3, 0, 3}, -1}});
        u5.add_term({3, 0, 1}, 3 * N);
        u5.add_term({0, 0, 0}, N * N * N);
        MPoly r = resultant(u0, u5, "z");
        MPoly expect({"X", "Y"});
        expect.add_term({5, 1}, -3);
        expect.add_term({4, 0}, 3 * N);
        expect.add_term({4, 2}, -3);
        expect.add_term({3, 1}, 3 * N);
        expect.add_term({3, 3}, -1);
        expect.add_term({0, 0}, N * N * N);
        CHECK(r == expect);
    }
    SECTION("linear pair reproduces substitution") {
        MPoly r = resultant(u0, u1, "z");
        // Substituting z = X + Y into u1 gives -XY + N.
        MPoly expect({"X", "Y"});
        expect.add_term({1, 1}, -1);
        expect.add_term({0, 0}, N);
        CHECK(r == expect);
    }
    SECTION("two constants in the variable") {
        MPoly a = MPoly::variable("x") - MPoly::constant(1);
        MPoly b = MPoly::variable("x") + MPoly::constant(1);
        MPoly r = resultant(a, b, "x");
        CHECK(r == MPoly::constant(-2));
        CHECK_THROWS_AS(resultant(MPoly::constant(2), MPoly::constant(3), "x"), std::domain_error);
    }
    SECTION("shared factor means zero resultant") {
        MPoly x = MPoly::variable("x"), y = MPoly::variable("y");
        MPoly common = x * y - MPoly::constant(4);
        MPoly f = common * (x + y);
        MPoly g = common * (x - y);
        CHECK(resultant(f, g, "x").is_zero());
        // and a coprime pair is nonzero
        CHECK_FALSE(resultant(x * y - MPoly::constant(4), x + y, "x").is_zero());
    }
    SECTION("constant^degree convention") {
        MPoly c = MPoly::constant(3);
        MPoly f = MPoly::variable("x") * MPoly::variable("x") + MPoly::constant(1);
        CHECK(resultant(c, f, "x") == MPoly::constant(9));
    }
}

TEST_CASE("elimination soundness at a shared root") {
    Int p(9521), q(20369), N = p * q;
    MPoly u0 = from_terms({"X", "Y", "z"}, {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, -1}});
    MPoly u1 = from_terms({"X", "Y", "z"}, {{{2, 0, 0}, 1}, {{1, 0, 1}, -1}});
    u1.add_term({0, 0, 0}, N);
    MPoly r = resultant(u0, u1, "z");
    CHECK(r.evaluate({p, q}) == 0);
}

TEST_CASE("not-multiple certificate") {
    MPoly x = MPoly::variable("x"), y = MPoly::variable("y");
    SECTION("soundness: actual multiples never certify") {
        MPoly f = x + y;
        MPoly g = (Int(1) << 200) * (x + y);  // integer multiple of f
        CHECK_FALSE(not_multiple_certificate(g, f));
    }
    SECTION("fires on a clear norm gap") {
        // ||g||_2 = 10, ||f||_inf = 2^300, d = 2, n = 3: 10 < 2^(300-81)
        MPoly g({"x", "y", "z"});
        g.add_term({1, 0, 0}, 10);
        MPoly f({"x", "y", "z"});
        f.add_term({2, 2, 2}, Int(1) << 300);
        CHECK(not_multiple_certificate(g, f));
    }
    SECTION("never certifies a polynomial against itself") {
        MPoly f = x * y + MPoly::constant(7);
        CHECK_FALSE(not_multiple_certificate(f, f));
    }
    SECTION("random multiples stay uncertified") {
        arith::Rng rng(77);
        for (int trial = 0; trial < 100; ++trial) {
            MPoly f({"x", "y"});
            MPoly h({"x", "y"});
            for (unsigned i = 0; i <= 3; ++i)
                for (unsigned j = 0; j + i <= 3; ++j) {
                    Int cf = rng.between(Int(-100), Int(100));
                    Int ch = rng.below(Int(1) << 64) - (Int(1) << 63);
                    if (cf != 0) f.add_term({i, j}, cf);
                    if (ch != 0) h.add_term({i, j}, ch);
                }
            if (f.is_zero() || h.is_zero()) continue;
            MPoly g = h * f;
            CHECK_FALSE(not_multiple_certificate(g, f));
        }
    }
    CHECK_THROWS_AS(not_multiple_certificate(MPoly(), MPoly::variable("x")), std::domain_error);
}

TEST_CASE("univariate integer roots") {
    MPoly x = MPoly::variable("x");
    SECTION("quadratic with two roots") {
        MPoly f = x * x - Int(5) * x + MPoly::constant(6);
        auto roots = integer_roots_univariate(f, Int(10));
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == 2);
        CHECK(roots[1] == 3);
    }
    SECTION("no real roots") {
        MPoly f = x * x + MPoly::constant(1);
        CHECK(integer_roots_univariate(f, Int(100)).empty());
    }
    SECTION("constructed large-root instance") {
        MPoly f = (x - MPoly::constant(9521)) * (x + MPoly::constant(4));
        auto roots = integer_roots_univariate(f, Int(10000));
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == -4);
        CHECK(roots[1] == 9521);
        for (const auto& r : roots) CHECK(f.evaluate({r}) == 0);
    }
    SECTION("bound excludes out-of-range roots") {
        MPoly f = (x - MPoly::constant(9521)) * (x + MPoly::constant(4));
        auto roots = integer_roots_univariate(f, Int(100));
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == -4);
    }
    SECTION("huge coefficients go through the isolation path") {
        Int big = (Int(1) << 80) + 17;  // prime-ish trailing magnitude over 2^64
        MPoly f = (x - MPoly::constant(big / 3)) * (x * x + MPoly::constant(3));
        // trailing coefficient magnitude exceeds 2^64, forcing Sturm
        auto roots = integer_roots_univariate(f, big);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == big / 3);
    }
    SECTION("repeated roots and zero roots") {
        MPoly f = x * x * (x - MPoly::constant(7)) * (x - MPoly::constant(7));
        auto roots = integer_roots_univariate(f, Int(10));
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == 0);
        CHECK(roots[1] == 7);
    }
    CHECK_THROWS_AS(integer_roots_univariate(MPoly(), Int(10)), std::domain_error);
}

TEST_CASE("bilinear irreducibility") {
    MPoly x = MPoly::variable("x"), y = MPoly::variable("y");
    // (x+2)(y+3) = xy + 3x + 2y + 6: a*e = 6 = b*c -> reducible
    MPoly red = x * y + Int(3) * x + Int(2) * y + MPoly::constant(6);
    CHECK_FALSE(bilinear_irreducible(red));
    MPoly irr = x * y + Int(3) * x + Int(2) * y + MPoly::constant(7);
    CHECK(bilinear_irreducible(irr));
    MPoly scaled = Int(2) * irr;
    CHECK_FALSE(bilinear_irreducible(scaled));  // content 2
}

TEST_CASE("norm monotonicity under coefficient growth") {
    arith::Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        MPoly f({"x", "y"});
        for (unsigned i = 0; i <= 2; ++i)
            for (unsigned j = 0; j <= 2; ++j) f.add_term({i, j}, rng.between(Int(-50), Int(50)));
        if (f.is_zero()) continue;
        MPoly g = Int(3) * f;
        CHECK(norms(g).l2_squared >= norms(f).l2_squared);
        CHECK(norms(g).sup >= norms(f).sup);
        CHECK(height(g, {Int(4), Int(5)}) >= height(f, {Int(4), Int(5)}));
    }
}

TEST_CASE("text format round trip") {
    arith::Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        MPoly f({"x", "y", "z"});
        int terms = 1 + static_cast<int>(rng.below(Int(8)).get_ui());
        for (int t = 0; t < terms; ++t) {
            ExpVec e{static_cast<unsigned>(rng.below(Int(5)).get_ui()),
                     static_cast<unsigned>(rng.below(Int(5)).get_ui()),
                     static_cast<unsigned>(rng.below(Int(5)).get_ui())};
            f.add_term(e, rng.below(Int(1) << 96) - (Int(1) << 95));
        }
        std::string text = poly_to_text(f);
        MPoly g = poly_from_text(text);
        CHECK(f == g);
        CHECK(poly_to_text(g) == text);  // bit-exact
    }
}
