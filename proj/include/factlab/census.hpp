#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "factlab/arith.hpp"

namespace factlab::census {

struct CensusRow {
    std::uint64_t x = 0;
    Rat c;
    std::uint64_t exact_count = 0;
    double model = 0.0;  // x / ln^2 x
    double ratio = 0.0;  // exact_count / model
};

namespace detail {

/// Primes up to `limit` inclusive. Segmented above the plain-sieve cutoff.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    if (limit > 4000000000ULL)
        throw std::runtime_error("census: sieve bound exceeds the memory budget");
    const std::uint64_t plain_cutoff = 100000000ULL;
    if (limit < 2) return {};

    if (limit <= plain_cutoff) {
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint64_t> primes;
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
        }
        return primes;
    }

    // Segmented sieve.
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
    auto base = primes_up_to(root);
    std::vector<std::uint64_t> primes = base;
    const std::uint64_t seg = 1 << 22;
    for (std::uint64_t lo = root + 1; lo <= limit; lo += seg) {
        std::uint64_t hi = std::min(limit, lo + seg - 1);
        std::vector<bool> composite(hi - lo + 1, false);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = ((lo + p - 1) / p) * p;
            if (start < p * p) start = p * p;
            for (std::uint64_t j = start; j <= hi; j += p) composite[j - lo] = true;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            if (!composite[i - lo]) primes.push_back(i);
    }
    return primes;
}

inline std::uint64_t sqrt_u64(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace detail

/// Exact count of semiprimes N = p*q <= x with p < q < c*p, against the
/// x/ln^2 x model. Sieve to sqrt(c*x), then one pass over p with a binary
/// search for the admissible q range.
inline CensusRow count_balanced(std::uint64_t x, const Rat& c) {
    if (x < 100) throw std::domain_error("count_balanced: x must be >= 100");
    if (!(c > 1)) throw std::domain_error("count_balanced: c must exceed 1");

    // q < c*p and q <= x/p imply q <= sqrt(c*x).
    Int cx = Int(static_cast<unsigned long>(x)) * c.get_num() / c.get_den();
    if (!cx.fits_ulong_p()) throw std::runtime_error("census: x out of range");
    std::uint64_t sieve_bound = detail::sqrt_u64(cx.get_ui()) + 1;
    auto primes = detail::primes_up_to(sieve_bound);

    const Int cn = c.get_num(), cd = c.get_den();
    std::uint64_t root_x = detail::sqrt_u64(x);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < primes.size() && primes[i] <= root_x; ++i) {
        std::uint64_t p = primes[i];
        // q in (p, min(ceil(c*p)-1, x/p)]
        Int qc = (cn * Int(static_cast<unsigned long>(p)) - 1) / cd;  // q <= (c*p*... strict
        std::uint64_t q_hi = qc.fits_ulong_p() ? qc.get_ui() : UINT64_MAX;
        if (x / p < q_hi) q_hi = x / p;
        if (q_hi <= p) continue;
        auto lo = std::upper_bound(primes.begin(), primes.end(), p);
        auto hi = std::upper_bound(primes.begin(), primes.end(), q_hi);
        count += static_cast<std::uint64_t>(hi - lo);
    }

    CensusRow row;
    row.x = x;
    row.c = c;
    row.exact_count = count;
    double lx = std::log(static_cast<double>(x));
    row.model = static_cast<double>(x) / (lx * lx);
    row.ratio = row.model > 0 ? static_cast<double>(count) / row.model : 0.0;
    return row;
}

inline std::string csv_header() { return "x,c,count,model,ratio"; }

inline std::string csv_row(const CensusRow& r) {
    std::ostringstream out;
    out << r.x << "," << r.c.get_str() << "," << r.exact_count << ",";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", r.model);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.6f", r.ratio);
    out << buf;
    return out.str();
}

}  // namespace factlab::census
