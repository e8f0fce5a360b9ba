#pragma once

#include <algorithm>
#include <vector>

#include "factlab/arith.hpp"
#include "factlab/mpoly.hpp"

namespace factlab::poly {

namespace detail {

// Dense univariate polynomial over Q, ascending degree, no leading zeros.
using QPoly = std::vector<Rat>;

inline void qtrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int qdeg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline QPoly qderiv(const QPoly& p) {
    QPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
    qtrim(d);
    return d;
}

inline Rat qeval(const QPoly& p, const Rat& t) {
    Rat v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    return v;
}

// Remainder of a by b over Q; scales to keep coefficients canonical.
inline QPoly qrem(QPoly a, const QPoly& b) {
    qtrim(a);
    while (qdeg(a) >= qdeg(b) && !a.empty()) {
        Rat factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
        a.pop_back();
        qtrim(a);
    }
    return a;
}

// Divides by |largest coefficient| to keep the chain small; sign preserved.
inline void qnormalize(QPoly& p) {
    Rat big = 0;
    for (const auto& c : p) {
        Rat a = abs(c);
        if (a > big) big = a;
    }
    if (big == 0) return;
    for (auto& c : p) c /= big;
}

inline QPoly qgcd(QPoly a, QPoly b) {
    qtrim(a);
    qtrim(b);
    while (!b.empty()) {
        QPoly r = qrem(a, b);
        qnormalize(r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline QPoly qdiv_exact(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (qdeg(a) >= qdeg(b) && !a.empty()) {
        Rat factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
        a.pop_back();
        qtrim(a);
    }
    return q;
}

struct Sturm {
    std::vector<QPoly> chain;

    explicit Sturm(QPoly f) {
        qtrim(f);
        chain.push_back(f);
        QPoly d = qderiv(f);
        if (!d.empty()) chain.push_back(d);
        while (chain.back().size() > 1) {
            QPoly r = qrem(chain[chain.size() - 2], chain.back());
            if (r.empty()) break;
            for (auto& c : r) c = -c;
            qnormalize(r);
            chain.push_back(std::move(r));
        }
    }

    int variations(const Rat& t) const {
        int v = 0, prev = 0;
        for (const auto& p : chain) {
            Rat val = qeval(p, t);
            int s = sgn(val);
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }
};

// All integer roots of squarefree f in (lo, hi], via Sturm bisection.
inline void isolate_integer_roots(const Sturm& st, const QPoly& f, Rat lo, Rat hi,
                                  std::vector<Int>& out) {
    int count = st.variations(lo) - st.variations(hi);
    if (count <= 0) return;
    if (hi - lo <= Rat(1, 2)) {
        // At most one integer in the interval.
        Int cand;
        mpz_fdiv_q(cand.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
        Rat c(cand);
        if (c > lo && c <= hi && qeval(f, c) == 0) out.push_back(cand);
        if (count == 1) return;
        // More roots may hide in the half-unit interval; keep bisecting.
        if (hi - lo < Rat(1, 1024)) return;
    }
    Rat mid = (lo + hi) / 2;
    isolate_integer_roots(st, f, lo, mid, out);
    isolate_integer_roots(st, f, mid, hi, out);
}

// Factorization of a word-sized magnitude via trial division + Pollard-Brent.
inline void factor_small(Int n, std::vector<std::pair<Int, unsigned>>& out) {
    for (Int p : {Int(2), Int(3), Int(5)}) {
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    }
    Int d = 7;
    const int wheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
    int wi = 0;
    while (d * d <= n && d < 100000) {
        unsigned e = 0;
        while (n % d == 0) { n /= d; ++e; }
        if (e) out.emplace_back(d, e);
        d += wheel[wi];
        wi = (wi + 1) % 8;
    }
    if (n == 1) return;
    if (arith::is_probable_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    // Pollard-Brent on the remaining <= 64-bit cofactor.
    std::vector<Int> stack{n};
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (arith::is_probable_prime(m)) {
            bool merged = false;
            for (auto& [p, e] : out)
                if (p == m) { ++e; merged = true; break; }
            if (!merged) out.emplace_back(m, 1);
            continue;
        }
        Int c = 1, factor = m;
        while (factor == m) {
            Int x = 2, y = 2, d2 = 1;
            while (d2 == 1) {
                x = (x * x + c) % m;
                y = (y * y + c) % m;
                y = (y * y + c) % m;
                Int diff = x > y ? x - y : y - x;
                mpz_gcd(d2.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
            }
            factor = d2;
            ++c;
        }
        stack.push_back(factor);
        stack.push_back(m / factor);
    }
}

inline void divisors_up_to(const std::vector<std::pair<Int, unsigned>>& fac, const Int& bound,
                           std::vector<Int>& out, std::size_t idx = 0, Int cur = 1) {
    if (cur > bound) return;
    if (idx == fac.size()) {
        out.push_back(cur);
        return;
    }
    Int v = cur;
    for (unsigned e = 0; e <= fac[idx].second; ++e) {
        divisors_up_to(fac, bound, out, idx + 1, v);
        v *= fac[idx].first;
        if (v > bound) break;
    }
}

inline Int eval_int(const std::vector<Int>& coeffs, const Int& x) {
    Int v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

inline Int eval_int_mod(const std::vector<Int>& coeffs, const Int& x, const Int& mod) {
    Int v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = (v * x + *it) % mod;
    return v;
}

/// Integer roots by Hensel lifting: pick a small prime keeping f squarefree
/// with full degree, lift each simple root past 2*bound, test exactly.
/// Returns false when no usable prime exists (caller falls back to Sturm).
inline bool hensel_integer_roots(const std::vector<Int>& body, const Int& bound,
                                 std::vector<Int>& out) {
    std::vector<Int> deriv;
    for (std::size_t i = 1; i < body.size(); ++i)
        deriv.push_back(body[i] * Int(static_cast<unsigned long>(i)));

    // F_p gcd of f and f' must be constant and the degree must survive.
    auto prime_is_good = [&](unsigned long p) {
        Int pz(p);
        if (body.back() % pz == 0) return false;
        auto reduce = [&](const std::vector<Int>& v) {
            std::vector<unsigned long> r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                Int m = v[i] % pz;
                if (m < 0) m += pz;
                r[i] = m.get_ui();
            }
            while (!r.empty() && r.back() == 0) r.pop_back();
            return r;
        };
        auto a = reduce(body), b = reduce(deriv);
        // Euclid in F_p[x]
        auto inv_mod = [&](unsigned long x) {
            Int r;
            Int xi(x);
            mpz_invert(r.get_mpz_t(), xi.get_mpz_t(), pz.get_mpz_t());
            return r.get_ui();
        };
        while (!b.empty()) {
            // a mod b
            while (a.size() >= b.size() && !a.empty()) {
                unsigned long f0 = a.back();
                unsigned long binv = inv_mod(b.back());
                unsigned long fac = Int(Int(f0) * binv % pz).get_ui();
                std::size_t shift = a.size() - b.size();
                for (std::size_t i = 0; i < b.size(); ++i) {
                    Int t = Int(a[i + shift]) - Int(fac) * Int(b[i]);
                    t %= pz;
                    if (t < 0) t += pz;
                    a[i + shift] = t.get_ui();
                }
                while (!a.empty() && a.back() == 0) a.pop_back();
            }
            std::swap(a, b);
        }
        return a.size() == 1;  // constant gcd
    };

    static const unsigned long primes[] = {3,   5,   7,   11,  13,  17,  19,  23,  29,  31,
                                           37,  41,  43,  47,  53,  59,  61,  67,  71,  73,
                                           79,  83,  89,  97,  101, 103, 107, 109, 113, 127,
                                           131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
                                           181, 191, 193, 197, 199, 211, 223, 227, 229, 233};
    unsigned long good = 0;
    for (unsigned long p : primes) {
        if (prime_is_good(p)) {
            good = p;
            break;
        }
    }
    if (good == 0) return false;

    const Int pz(good);
    // roots mod p
    std::vector<Int> residues;
    for (unsigned long r = 0; r < good; ++r)
        if (eval_int_mod(body, Int(r), pz) == 0) residues.emplace_back(r);
    if (residues.empty()) return true;

    // lift past 2*bound + 1 by repeated squaring of the modulus
    for (const Int& r0 : residues) {
        Int mod = pz;
        Int r = r0;
        while (mod <= 2 * bound + 1) {
            Int mod2 = mod * mod;
            Int fr = eval_int_mod(body, r, mod2);
            Int dr = eval_int_mod(deriv, r, mod2);
            Int inv;
            if (mpz_invert(inv.get_mpz_t(), dr.get_mpz_t(), mod2.get_mpz_t()) == 0) break;
            r = ((r - fr * inv) % mod2 + mod2) % mod2;
            mod = mod2;
        }
        if (mod <= 2 * bound + 1) continue;  // lift failed (cannot happen for simple roots)
        Int centered = r % mod;
        if (2 * centered > mod) centered -= mod;
        if (abs(centered) <= bound && eval_int(body, centered) == 0) out.push_back(centered);
    }
    return true;
}

}  // namespace detail

/// All integer roots r of a nonzero univariate polynomial with |r| <= bound,
/// each verified by exact evaluation. Divisor enumeration of the trailing
/// coefficient when it fits a word, Sturm-sequence isolation otherwise.
inline std::vector<Int> integer_roots_univariate(const MPoly& f, const Int& bound) {
    if (f.is_zero()) throw std::domain_error("integer_roots_univariate: zero polynomial");
    if (bound < 0) throw std::domain_error("integer_roots_univariate: negative bound");
    MPoly g = f.pruned();
    if (g.vars().size() > 1)
        throw std::domain_error("integer_roots_univariate: polynomial is not univariate");

    // Constant nonzero polynomial: no roots.
    if (g.vars().empty()) return {};
    const std::string var = g.vars()[0];
    unsigned deg = g.degree_in(var);

    std::vector<Int> coeffs(deg + 1, Int(0));
    for (const auto& [e, c] : g.terms()) coeffs[e[0]] = c;

    std::vector<Int> roots;
    // Strip x^k: root at 0.
    std::size_t low = 0;
    while (coeffs[low] == 0) ++low;
    if (low > 0) roots.push_back(0);
    std::vector<Int> body(coeffs.begin() + static_cast<long>(low), coeffs.end());

    if (body.size() == 1) {
        // nothing further
    } else if (body.size() == 2) {
        // linear: c0 + c1 x
        if (body[0] % body[1] == 0) {
            Int r = -body[0] / body[1];
            if (abs(r) <= bound) roots.push_back(r);
        }
    } else {
        Int trailing = abs(body[0]);
        static const Int word_limit = (Int(1) << 64) - 1;
        bool done = false;
        if (trailing <= word_limit) {
            std::vector<std::pair<Int, unsigned>> fac;
            detail::factor_small(trailing, fac);
            std::vector<Int> divs;
            detail::divisors_up_to(fac, bound, divs);
            if (divs.size() <= 200000) {
                for (const Int& d : divs) {
                    for (int s : {1, -1}) {
                        Int r = s * d;
                        Int val = 0;
                        for (auto it = body.rbegin(); it != body.rend(); ++it) val = val * r + *it;
                        if (val == 0) roots.push_back(r);
                    }
                }
                done = true;
            }
        }
        if (!done) done = detail::hensel_integer_roots(body, bound, roots);
        if (!done) {
            // No squarefree prime in range: Sturm-sequence isolation.
            detail::QPoly qf;
            for (const auto& c : body) qf.emplace_back(c);
            detail::qtrim(qf);
            detail::QPoly gcd = detail::qgcd(qf, detail::qderiv(qf));
            if (detail::qdeg(gcd) > 0) qf = detail::qdiv_exact(qf, gcd);
            detail::Sturm st(qf);
            Rat lo = -Rat(bound) - Rat(1, 2);
            Rat hi = Rat(bound) + Rat(1, 2);
            detail::isolate_integer_roots(st, qf, lo, hi, roots);
        }
    }

    // Verify against the original polynomial and canonicalize.
    std::vector<Int> verified;
    for (const Int& r : roots) {
        if (abs(r) > bound) continue;
        if (g.evaluate({r}) == 0) verified.push_back(r);
    }
    std::sort(verified.begin(), verified.end());
    verified.erase(std::unique(verified.begin(), verified.end()), verified.end());
    return verified;
}

}  // namespace factlab::poly
