#pragma once

#include <cstdint>
#include <string>

#include "factlab/arith.hpp"

namespace factlab::fermat {

/// Outcome of a difference-of-squares search. When found, the solution of
/// 4N = x^2 - y^2 with x = p+q, y = q-p; `steps` counts every candidate
/// tested including the first. `trivial` marks the p = 1 solution.
struct FactorResult {
    bool found = false;
    bool trivial = false;
    Int p, q, x, y;
    std::uint64_t steps = 0;
    std::string method;
};

namespace detail {

inline void check_input(const Int& n) {
    if (n % 2 == 0) {
        if (n % 4 == 2)
            throw std::domain_error("no difference-of-squares representation: N = 4M +/- 2");
        throw std::domain_error("fermat: N must be odd");
    }
    if (n < 9) throw std::domain_error("fermat: N must be >= 9");
}

inline FactorResult finish(FactorResult r, const Int& x, const Int& y) {
    r.found = true;
    r.x = x;
    r.y = y;
    r.p = (x - y) / 2;
    r.q = (x + y) / 2;
    r.trivial = (r.p == 1);
    return r;
}

// Scan x = start, start+1, ... testing x^2 - 4N for squareness.
inline FactorResult scan(const Int& n, Int x, std::uint64_t max_steps, std::string method) {
    FactorResult r;
    r.method = std::move(method);
    const Int four_n = 4 * n;
    Int xsq = x * x;
    for (std::uint64_t k = 0; k < max_steps; ++k) {
        r.steps = k + 1;
        if (auto y = arith::is_perfect_square(xsq - four_n)) return finish(r, x, *y);
        xsq += 2 * x + 1;
        ++x;
    }
    return r;  // bounded-search failure
}

}  // namespace detail

/// Classic difference-of-squares scan from ceil(sqrt(4N)).
inline FactorResult fermat_factor(const Int& n, std::uint64_t max_steps = UINT64_MAX) {
    detail::check_input(n);
    return detail::scan(n, arith::ceil_sqrt(4 * n), max_steps, "fermat");
}

/// Triangular acceleration: candidates are x = m(m+1)/2, advanced by the
/// sum-of-cubes identity x_k^2 = x_{k-1}^2 + (m+k)^3. Succeeds only when
/// p+q is a triangular number.
inline FactorResult triangular_fermat(const Int& n, std::uint64_t max_steps = UINT64_MAX) {
    detail::check_input(n);
    FactorResult r;
    r.method = "triangular";
    const Int four_n = 4 * n;
    const Int s = arith::ceil_sqrt(four_n);

    // Smallest m with m(m+1)/2 >= ceil(sqrt(4N)).
    Int m = arith::isqrt(2 * s);
    while (m * (m + 1) / 2 < s) ++m;
    while (m > 1 && (m - 1) * m / 2 >= s) --m;

    Int x = m * (m + 1) / 2;
    Int xsq = x * x;
    for (std::uint64_t k = 0; k < max_steps; ++k) {
        r.steps = k + 1;
        if (auto y = arith::is_perfect_square(xsq - four_n)) return detail::finish(r, x, *y);
        Int next = m + Int(static_cast<unsigned long>(k)) + 1;
        xsq += next * next * next;
        x += next;
    }
    return r;
}

/// Difference-of-squares scan started at max(ceil(sqrt(4N)), ceil(2*gamma*sqrt(N))).
inline FactorResult shifted_fermat(const Int& n, const Rat& gamma,
                                   std::uint64_t max_steps = UINT64_MAX) {
    detail::check_input(n);
    if (!(gamma > 0)) throw std::domain_error("shifted_fermat: gamma must be positive");
    // ceil(2*gamma*sqrt(N)) = ceil(sqrt(4*gn^2*N / gd^2))
    const Int& gn = gamma.get_num();
    const Int& gd = gamma.get_den();
    Int shifted = arith::ceil_sqrt_rational(4 * gn * gn * n, gd * gd);
    Int start = arith::ceil_sqrt(4 * n);
    if (shifted > start) start = shifted;
    return detail::scan(n, start, max_steps, "shifted");
}

/// Number of pairs (x, y), x > y >= 0, with N = x^2 - y^2. Counted via
/// divisor pairs d*e = N, d <= e, d and e of equal parity.
inline std::uint64_t count_representations(const Int& n) {
    if (n < 1) throw std::domain_error("count_representations: N must be positive");
    std::uint64_t count = 0;
    Int bound = arith::isqrt(n);
    for (Int d = 1; d <= bound; ++d) {
        if (n % d != 0) continue;
        Int e = n / d;
        if ((d - e) % 2 == 0) ++count;
    }
    return count;
}

}  // namespace factlab::fermat
