#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace factlab {

using Int = mpz_class;
using Rat = mpq_class;

/// Parses a decimal integer, rejecting anything that is not [-]digits.
inline Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
    return Int(s);
}

/// Parses "a/b" or "a" into a canonical rational with positive denominator.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    Rat q;
    if (slash == std::string::npos) {
        q = Rat(parse_int(s));
    } else {
        Int num = parse_int(s.substr(0, slash));
        Int den = parse_int(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        q = Rat(num, den);
    }
    q.canonicalize();
    return q;
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline std::size_t bit_length(const Int& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

namespace arith {

/// Floor integer square root; the [x] convention of the candidate sequence.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative input");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

/// Smallest r with r*r >= n.
inline Int ceil_sqrt(const Int& n) {
    Int r = isqrt(n);
    if (r * r < n) ++r;
    return r;
}

inline std::optional<Int> is_perfect_square(const Int& n) {
    if (n < 0) throw std::domain_error("is_perfect_square: negative input");
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    return isqrt(n);
}

/// Floor k-th root.
inline Int iroot(const Int& n, unsigned long k) {
    if (n < 0) throw std::domain_error("iroot: negative input");
    if (k == 0) throw std::domain_error("iroot: zero index");
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

inline Int ceil_root(const Int& n, unsigned long k) {
    Int r = iroot(n, k);
    Int p;
    mpz_pow_ui(p.get_mpz_t(), r.get_mpz_t(), k);
    if (p < n) ++r;
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// Nearest integer to sqrt(num/den), half away from zero. num, den >= 0.
inline Int round_sqrt_rational(const Int& num, const Int& den) {
    if (num < 0 || den <= 0) throw std::domain_error("round_sqrt_rational: bad input");
    // r = round(sqrt(T)) iff (2r-1)^2 <= 4T < (2r+1)^2, with T = num/den.
    Int four_num = 4 * num;
    Int r = isqrt(num / den);
    while (true) {
        Int lo = (2 * r - 1) * (2 * r - 1) * den;
        Int hi = (2 * r + 1) * (2 * r + 1) * den;
        if (four_num < lo) { --r; continue; }
        if (four_num >= hi) { ++r; continue; }
        return r;
    }
}

/// Smallest integer t >= sqrt(num/den). num, den >= 0.
inline Int ceil_sqrt_rational(const Int& num, const Int& den) {
    if (num < 0 || den <= 0) throw std::domain_error("ceil_sqrt_rational: bad input");
    Int r = isqrt(num / den);
    while (r * r * den < num) ++r;
    while (r > 0 && (r - 1) * (r - 1) * den >= num) --r;
    return r;
}

namespace detail {

inline bool miller_rabin_witness(const Int& n, const Int& a, const Int& d, unsigned long s) {
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return false;  // not a witness
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // compositeness witness
}

}  // namespace detail

/// Miller-Rabin. Deterministic below 3.4e14 via the witness set {2,...,17},
/// probabilistic above with `rounds` extra bases (error <= 4^-rounds).
inline bool is_probable_prime(const Int& n, int rounds = 25) {
    if (n < 2) throw std::domain_error("is_probable_prime: n < 2");
    if (rounds < 1) throw std::invalid_argument("is_probable_prime: rounds < 1");
    for (int small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == small) return true;
        if (n % small == 0) return false;
    }
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    // Witnesses {2,3,5,7,11,13,17} decide n < 341550071728321 deterministically.
    static const Int determ_bound("341550071728321");
    for (int a : {2, 3, 5, 7, 11, 13, 17}) {
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    if (n < determ_bound) return true;

    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(Int("11400714819323198485") ^ (n % Int("18446744073709551616")));
    for (int i = 0; i < rounds; ++i) {
        Int a = rng.get_z_range(n - 3) + 2;
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

/// Next prime > n (search with is_probable_prime).
inline Int next_prime(Int n) {
    if (n < 2) return 2;
    ++n;
    if (n == 2) return 2;
    if (n % 2 == 0) ++n;
    while (!is_probable_prime(n)) n += 2;
    return n;
}

/// Deterministic big-integer source; every consumer seeds its own instance.
class Rng {
  public:
    explicit Rng(unsigned long seed) : state_(gmp_randinit_mt) { state_.seed(seed); }
    explicit Rng(const Int& seed) : state_(gmp_randinit_mt) { state_.seed(seed); }

    /// Uniform in [0, bound).
    Int below(const Int& bound) { return state_.get_z_range(bound); }

    /// Uniform in [lo, hi] inclusive.
    Int between(const Int& lo, const Int& hi) {
        if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
        return lo + state_.get_z_range(hi - lo + 1);
    }

    /// Uniform with exactly `bits` bits.
    Int bits(unsigned long n_bits) {
        Int lo = Int(1) << (n_bits - 1);
        return between(lo, (lo << 1) - 1);
    }

  private:
    gmp_randclass state_;
};

struct Semiprime {
    Int n;
    Int p;  // smaller prime factor
    Int q;  // larger prime factor
    Rat ratio_bound;
};

/// Validates n = p*q, both prime, p < q < c*p. Throws on violation.
inline Semiprime make_semiprime(const Int& p, const Int& q, const Rat& c) {
    if (!(c > 1)) throw std::domain_error("semiprime: ratio bound must exceed 1");
    if (!(p < q)) throw std::domain_error("semiprime: requires p < q");
    // q < c*p with c = num/den: q*den < num*p
    if (!(q * c.get_den() < c.get_num() * p))
        throw std::domain_error("semiprime: q >= c*p");
    if (!is_probable_prime(p) || !is_probable_prime(q))
        throw std::domain_error("semiprime: factor fails primality test");
    return Semiprime{p * q, p, q, c};
}

/// Balanced semiprime with n of `bits`(+-1) bits and p < q < c*p.
/// Deterministic for a fixed seed.
inline Semiprime gen_balanced_semiprime(unsigned bits, const Rat& c, const Int& seed) {
    if (bits < 16) throw std::domain_error("gen_balanced_semiprime: bits < 16");
    if (!(c > 1)) throw std::domain_error("gen_balanced_semiprime: c <= 1");
    Rng rng(seed);

    const Int n_lo = Int(1) << (bits - 1);
    const Int n_hi = (Int(1) << bits) - 1;
    const Int& cn = c.get_num();
    const Int& cd = c.get_den();

    for (int attempt = 0; attempt < 4096; ++attempt) {
        Int target = rng.between(n_lo, n_hi);
        // p in (sqrt(target/c), sqrt(target)): ensures a q-window exists.
        Int p_lo = ceil_sqrt_rational(target * cd, cn) + 1;
        Int p_hi = isqrt(target);
        if (p_hi - p_lo < 16) continue;

        Int p = rng.between(p_lo, p_hi) | 1;
        int tries = 0;
        while (!is_probable_prime(p) && tries++ < 64) p += 2;
        if (p < p_lo || p > p_hi || !is_probable_prime(p)) continue;

        // q in (p, c*p) and n = p*q within the bit window.
        Int q_lo = p + 1;
        Int q_hi = (cn * p - 1) / cd;
        Int q_bit_lo = (n_lo + p - 1) / p;
        Int q_bit_hi = n_hi / p;
        if (q_bit_lo > q_lo) q_lo = q_bit_lo;
        if (q_bit_hi < q_hi) q_hi = q_bit_hi;
        if (q_hi - q_lo < 16) continue;

        Int q = rng.between(q_lo, q_hi) | 1;
        tries = 0;
        while (!is_probable_prime(q) && tries++ < 64) q += 2;
        if (q < q_lo || q > q_hi || !is_probable_prime(q)) continue;

        Semiprime s = make_semiprime(p, q, c);
        std::size_t got = bit_length(s.n);
        if (got + 1 < bits || got > bits + 1) continue;
        return s;
    }
    throw std::runtime_error("gen_balanced_semiprime: no instance found for bits/ratio");
}

}  // namespace arith
}  // namespace factlab
