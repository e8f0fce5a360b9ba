#include <catch2/catch.hpp>

#include "factlab/arith.hpp"
#include "factlab/fermat.hpp"
#include "oracles.hpp"

using namespace factlab;
using namespace factlab::fermat;

namespace {
const Int kExampleN(193933249);  // 9521 * 20369

void check_solution(const FactorResult& r, const Int& n) {
    REQUIRE(r.found);
    CHECK(r.p * r.q == n);
    CHECK(r.p <= r.q);
    CHECK(r.x == r.p + r.q);
    CHECK(r.y == r.q - r.p);
    CHECK(r.x * r.x - r.y * r.y == 4 * n);
    CHECK(r.steps >= 1);
}
}  // namespace

TEST_CASE("classic fermat on the worked 28-bit instance") {
    auto r = fermat_factor(kExampleN, 1 << 20);
    check_solution(r, kExampleN);
    CHECK(r.p == 9521);
    CHECK(r.q == 20369);
    CHECK(r.steps == 2039);
}

TEST_CASE("classic fermat small cases") {
    auto r15 = fermat_factor(Int(15), 100);
    check_solution(r15, Int(15));
    CHECK(r15.x == 8);
    CHECK(r15.y == 2);
    CHECK(r15.p == 3);
    CHECK(r15.q == 5);
    CHECK(r15.steps == 1);

    auto r9 = fermat_factor(Int(9), 100);
    check_solution(r9, Int(9));
    CHECK(r9.p == 3);
    CHECK(r9.q == 3);
    CHECK(r9.y == 0);
    CHECK(r9.steps == 1);
}

TEST_CASE("fermat input validation") {
    CHECK_THROWS_AS(fermat_factor(Int(6), 10), std::domain_error);   // 4M+2
    CHECK_THROWS_AS(fermat_factor(Int(12), 10), std::domain_error);  // even
    CHECK_THROWS_AS(fermat_factor(Int(7), 10), std::domain_error);   // < 9
}

TEST_CASE("bounded search reports failure without throwing") {
    auto r = fermat_factor(kExampleN, 10);
    CHECK_FALSE(r.found);
    CHECK(r.steps == 10);
}

TEST_CASE("triangular fermat reproduces the nine step run") {
    auto r = triangular_fermat(kExampleN, 1000);
    check_solution(r, kExampleN);
    CHECK(r.p == 9521);
    CHECK(r.q == 20369);
    CHECK(r.steps == 9);
    CHECK(r.x == 29890);
    CHECK(r.y == 10848);
}

TEST_CASE("triangular start matches the printed first candidate") {
    // First candidate is the smallest triangular number whose square covers
    // 4N: for the worked instance that is 27966 = 236*237/2.
    const Int four_n = 4 * kExampleN;
    Int s = arith::ceil_sqrt(four_n);
    Int m = 236;
    CHECK(m * (m + 1) / 2 >= s);
    CHECK((m - 1) * m / 2 < s);
    CHECK(m * (m + 1) / 2 == 27966);
    CHECK(Int(27966) * 27966 == 782097156);
}

TEST_CASE("triangular fermat fails when p+q is not triangular") {
    // 23 * 29 = 667: p+q = 52, not triangular.
    auto r = triangular_fermat(Int(667), 3);
    CHECK_FALSE(r.found);
}

TEST_CASE("triangular agrees with classic whenever both succeed") {
    arith::Rng rng(5);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto s = arith::gen_balanced_semiprime(26, Rat(2), Int(1000 + trial));
        auto classic = fermat_factor(s.n, 1 << 16);
        auto tri = triangular_fermat(s.n, 1 << 16);
        if (classic.found && tri.found && !tri.trivial) {
            CHECK(classic.p == tri.p);
            CHECK(classic.q == tri.q);
            ++compared;
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("shifted fermat with gamma 1 equals classic") {
    auto classic = fermat_factor(kExampleN, 1 << 16);
    auto shifted = shifted_fermat(kExampleN, Rat(1), 1 << 16);
    REQUIRE(shifted.found);
    CHECK(shifted.p == classic.p);
    CHECK(shifted.q == classic.q);
    CHECK(shifted.steps == classic.steps);
}

TEST_CASE("shifted fermat with a good gamma saves steps") {
    auto classic = fermat_factor(kExampleN, 1 << 16);
    auto shifted = shifted_fermat(kExampleN, Rat(53, 50), 1 << 16);  // 1.06
    REQUIRE(shifted.found);
    CHECK(shifted.p == classic.p);
    CHECK(shifted.q == classic.q);
    CHECK(shifted.steps < classic.steps);
}

TEST_CASE("shifted fermat overshooting the sum fails") {
    // 2 * 1.2 * sqrt(N) > p + q = 29890: the scan starts past the solution.
    Int start = arith::ceil_sqrt_rational(4 * Int(36) * kExampleN, Int(25));  // (2*6/5)^2
    CHECK(start > 29890);
    auto r = shifted_fermat(kExampleN, Rat(6, 5), 10000);
    CHECK_FALSE(r.found);
}

TEST_CASE("representation counts against Prop 1 and brute force") {
    CHECK(count_representations(Int(6)) == 0);
    CHECK(count_representations(Int(13)) == 1);
    CHECK(count_representations(Int(15)) == 2);
    CHECK(count_representations(Int(1)) == 1);
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        CAPTURE(n);
        REQUIRE(count_representations(Int(static_cast<unsigned long>(n))) ==
                oracles::count_reps_brute(n));
    }
}

TEST_CASE("no representation iff N = 4M + 2") {
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        bool zero = count_representations(Int(static_cast<unsigned long>(n))) == 0;
        REQUIRE(zero == (n % 4 == 2));
    }
}

TEST_CASE("step bound from the gap inequality") {
    // With q - p <= 2 N^(1/4) L the scan finds the solution within L^2 + 2
    // candidates: derived instances with controlled gaps.
    for (int trial = 0; trial < 10; ++trial) {
        arith::Rng rng(200 + trial);
        Int p = arith::next_prime(rng.bits(20));
        for (long L = 1; L <= 4; ++L) {
            Int gap_budget = 2 * arith::iroot(p * p, 4) * L;
            Int q = arith::next_prime(p);
            if (q - p > gap_budget) continue;
            Int n = p * q;
            // confirm the gap hypothesis exactly: (q-p)^4 <= 16 N L^4
            Int lhs = (q - p) * (q - p) * (q - p) * (q - p);
            if (lhs > 16 * n * L * L * L * L) continue;
            auto r = fermat_factor(n, static_cast<std::uint64_t>(L * L + 2));
            REQUIRE(r.found);
            CHECK(r.steps <= static_cast<std::uint64_t>(L * L + 2));
            break;
        }
    }
}

TEST_CASE("prime input yields the trivial representation") {
    // For prime N the only solution has p = 1; flagged as trivial.
    auto r = fermat_factor(Int(11), 100000);
    REQUIRE(r.found);
    CHECK(r.trivial);
    CHECK(r.p == 1);
    CHECK(r.q == 11);
}
