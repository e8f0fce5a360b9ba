#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "factlab/arith.hpp"

namespace factlab::lattice {

/// Row-generated integer lattice basis.
struct Basis {
    std::vector<std::vector<Int>> rows;

    std::size_t dim() const { return rows.size(); }
    std::size_t cols() const { return rows.empty() ? 0 : rows[0].size(); }
};

inline Basis make_basis(std::vector<std::vector<Int>> rows) {
    if (rows.empty()) throw std::domain_error("basis: no rows");
    std::size_t m = rows[0].size();
    if (m == 0) throw std::domain_error("basis: empty rows");
    for (const auto& r : rows)
        if (r.size() != m) throw std::domain_error("basis: ragged rows");
    if (rows.size() > m) throw std::domain_error("basis: more rows than columns");
    return Basis{std::move(rows)};
}

inline Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int norm_squared(const std::vector<Int>& v) { return dot(v, v); }

namespace detail {

/// Bareiss determinant of a square integer matrix (destructive).
inline Int int_det(std::vector<std::vector<Int>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

inline Int round_rat(const Rat& q) {
    // floor((2 num + den) / (2 den)): round half up
    Int r;
    Int num2 = 2 * q.get_num() + q.get_den();
    Int den2 = 2 * q.get_den();
    mpz_fdiv_q(r.get_mpz_t(), num2.get_mpz_t(), den2.get_mpz_t());
    return r;
}

}  // namespace detail

/// Gram determinant (= det(L)^2 for a full-rank row basis), exact.
inline Int gram_det_squared(const Basis& b) {
    const std::size_t n = b.dim();
    std::vector<std::vector<Int>> g(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = dot(b.rows[i], b.rows[j]);
    Int d = detail::int_det(g);
    if (d <= 0) throw std::domain_error("lattice: rows are linearly dependent");
    return d;
}

struct ReductionReport {
    std::vector<Int> vector_norms_squared;  // sorted ascending
    Int det_squared;
    Rat lovasz_delta;
    std::vector<bool> reduced_norm_bounds_ok;  // per-index norm bounds against sorted norms
    std::uint64_t swaps = 0;
    std::vector<std::vector<Int>> transform;  // unimodular: transform * input = output
};

/// True iff norms_sq[i-1] <= 2^(n(n-1)/(2(n+1-i))) * det_sq^(1/(n+1-i)),
/// checked exactly by clearing denominators.
inline bool reduced_norm_bound_ok(const Int& norm_sq, std::size_t n, std::size_t i,
                                  const Int& det_sq) {
    // (norm_sq)^(2e) <= 2^(n(n-1)) * det_sq^2, e = n+1-i
    unsigned long e = static_cast<unsigned long>(n + 1 - i);
    Int lhs = arith::pow_int(norm_sq, 2 * e);
    Int rhs = det_sq * det_sq;
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), n * (n - 1));
    return lhs <= rhs;
}

/// Exact-rational LLL at parameter delta in (1/4, 1). The output spans the
/// same lattice (report.transform is the unimodular change of basis); the
/// Lovasz condition holds at delta for every adjacent pair.
inline std::pair<Basis, ReductionReport> lll_reduce(const Basis& input, const Rat& delta = Rat(3, 4)) {
    if (!(delta > Rat(1, 4) && delta < 1))
        throw std::domain_error("lll_reduce: delta must lie in (1/4, 1)");
    Int det_sq = gram_det_squared(input);  // also certifies rank

    const std::size_t n = input.dim();
    std::vector<std::vector<Int>> b = input.rows;
    std::vector<std::vector<Int>> u(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

    // Exact Gram-Schmidt state: mu[i][j] (j < i) and B[i] = ||b*_i||^2.
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n, Rat(0));
    auto recompute_gs = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                Rat acc(dot(b[i], b[j]));
                for (std::size_t l = 0; l < j; ++l) acc -= mu[j][l] * mu[i][l] * B[l];
                mu[i][j] = acc / B[j];
            }
            Rat norm(dot(b[i], b[i]));
            for (std::size_t j = 0; j < i; ++j) norm -= mu[i][j] * mu[i][j] * B[j];
            B[i] = norm;
        }
    };
    recompute_gs();

    ReductionReport report;
    report.lovasz_delta = delta;

    auto size_reduce = [&](std::size_t k, std::size_t l) {
        Rat m = mu[k][l];
        if (2 * abs(m.get_num()) <= m.get_den()) return;
        Int q = detail::round_rat(m);
        for (std::size_t j = 0; j < b[k].size(); ++j) b[k][j] -= q * b[l][j];
        for (std::size_t j = 0; j < n; ++j) u[k][j] -= q * u[l][j];
        for (std::size_t j = 0; j < l; ++j) mu[k][j] -= Rat(q) * mu[l][j];
        mu[k][l] -= Rat(q);
    };

    std::size_t k = 1;
    while (k < n) {
        size_reduce(k, k - 1);
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            std::swap(b[k], b[k - 1]);
            std::swap(u[k], u[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
            Rat m = mu[k][k - 1];
            Rat Bp = B[k] + m * m * B[k - 1];
            mu[k][k - 1] = m * B[k - 1] / Bp;
            B[k] = B[k - 1] * B[k] / Bp;
            B[k - 1] = Bp;
            for (std::size_t i = k + 1; i < n; ++i) {
                Rat t = mu[i][k];
                mu[i][k] = mu[i][k - 1] - m * t;
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
            }
            ++report.swaps;
            k = (k > 1) ? k - 1 : 1;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
            ++k;
        }
    }

    Basis out{std::move(b)};
    report.det_squared = det_sq;
    report.transform = std::move(u);
    for (const auto& row : out.rows) report.vector_norms_squared.push_back(norm_squared(row));
    std::sort(report.vector_norms_squared.begin(), report.vector_norms_squared.end());
    for (std::size_t i = 1; i <= n; ++i)
        report.reduced_norm_bounds_ok.push_back(
            reduced_norm_bound_ok(report.vector_norms_squared[i - 1], n, i, det_sq));
    return {std::move(out), std::move(report)};
}

/// Row-style Hermite reduction of an overcomplete generating set. Each
/// column j carries a modulus m_j with m_j * e_j known to lie in the lattice,
/// so entries can be reduced mod m_j to stop coefficient growth. Returns a
/// full-rank basis of the generated lattice.
inline std::vector<std::vector<Int>> hermite_basis(std::vector<std::vector<Int>> rows,
                                                   const std::vector<Int>& column_moduli) {
    const std::size_t cols = column_moduli.size();
    for (const auto& r : rows)
        if (r.size() != cols) throw std::domain_error("hermite_basis: ragged rows");
    for (const auto& m : column_moduli)
        if (m <= 0) throw std::domain_error("hermite_basis: moduli must be positive");

    auto mod_reduce = [&](std::vector<Int>& row, std::size_t from) {
        for (std::size_t j = from; j < cols; ++j) {
            mpz_fdiv_r(row[j].get_mpz_t(), row[j].get_mpz_t(), column_moduli[j].get_mpz_t());
        }
    };

    std::size_t t = 0;  // next pivot row slot
    for (std::size_t j = 0; j < cols && t < rows.size(); ++j) {
        // gcd-combine entries of column j across rows t..end
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = t; i < rows.size(); ++i) {
                if (rows[i][j] == 0) continue;
                if (best == rows.size() || abs(rows[i][j]) < abs(rows[best][j])) best = i;
            }
            if (best == rows.size()) break;  // column is zero below t
            std::swap(rows[t], rows[best]);
            bool eliminated_all = true;
            for (std::size_t i = t + 1; i < rows.size(); ++i) {
                if (rows[i][j] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), rows[t][j].get_mpz_t());
                for (std::size_t k = j; k < cols; ++k) rows[i][k] -= q * rows[t][k];
                if (rows[i][j] != 0) eliminated_all = false;
                mod_reduce(rows[i], j + 1);
            }
            if (eliminated_all) {
                if (rows[t][j] < 0)
                    for (std::size_t k = j; k < cols; ++k) rows[t][k] = -rows[t][k];
                mod_reduce(rows[t], j + 1);
                ++t;
                break;
            }
        }
    }
    rows.resize(t);
    return rows;
}

/// Informational diagnostic: for each d, whether the product of the d
/// smallest norms stays under g^(d/2) det^(d/n), with the Hermite constant
/// replaced by the stand-in g = 1.5 * n / (e*pi). The exact constant is
/// unknown for general n, so failures here carry no verdict.
inline std::vector<bool> hermite_product_diagnostic(const ReductionReport& rep) {
    const std::size_t n = rep.vector_norms_squared.size();
    // e*pi as a rational approximation; 1.5n / (e*pi)
    const Int epi_num(8539734), epi_den(1000000);
    Int g_num = 3 * Int(static_cast<unsigned long>(n)) * epi_den;
    Int g_den = 2 * epi_num;
    std::vector<bool> ok;
    Int prod = 1;
    for (std::size_t d = 1; d <= n; ++d) {
        prod *= rep.vector_norms_squared[d - 1];
        // (prod)^n <= g^(dn) * det_sq^d, with g rational
        Int lhs = arith::pow_int(prod, static_cast<unsigned long>(n)) *
                  arith::pow_int(g_den, static_cast<unsigned long>(d * n));
        Int rhs = arith::pow_int(g_num, static_cast<unsigned long>(d * n)) *
                  arith::pow_int(rep.det_squared, static_cast<unsigned long>(d));
        ok.push_back(lhs <= rhs);
    }
    return ok;
}

/// True iff some basis vector meets the Minkowski bound ||V||^2n <= n^n det^2.
inline bool minkowski_check(const Basis& b) {
    Int det_sq = gram_det_squared(b);
    const std::size_t n = b.dim();
    Int rhs = arith::pow_int(Int(static_cast<unsigned long>(n)), static_cast<unsigned long>(n)) * det_sq;
    for (const auto& row : b.rows) {
        Int lhs = arith::pow_int(norm_squared(row), static_cast<unsigned long>(n));
        if (lhs <= rhs) return true;
    }
    return false;
}

/// Verifies size-reduction and the Lovasz condition from scratch (test hook).
inline bool is_lll_reduced(const Basis& basis, const Rat& delta) {
    const std::size_t n = basis.dim();
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rat acc(dot(basis.rows[i], basis.rows[j]));
            for (std::size_t l = 0; l < j; ++l) acc -= mu[j][l] * mu[i][l] * B[l];
            mu[i][j] = acc / B[j];
        }
        Rat norm(dot(basis.rows[i], basis.rows[i]));
        for (std::size_t j = 0; j < i; ++j) norm -= mu[i][j] * mu[i][j] * B[j];
        B[i] = norm;
        if (!(B[i] > 0)) return false;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (2 * abs(mu[i][j].get_num()) > mu[i][j].get_den()) return false;
    for (std::size_t k = 1; k < n; ++k)
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) return false;
    return true;
}

// --- text format: "n m" header, then one row of decimals per line ----------

inline void write_basis(std::ostream& out, const Basis& b) {
    out << b.dim() << " " << b.cols() << "\n";
    for (const auto& row : b.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << " ";
            out << row[j].get_str();
        }
        out << "\n";
    }
}

inline Basis read_basis(std::istream& in) {
    std::size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("basis: bad header");
    std::vector<std::vector<Int>> rows(n, std::vector<Int>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::runtime_error("basis: truncated matrix");
            rows[i][j] = parse_int(tok);
        }
    return make_basis(std::move(rows));
}

}  // namespace factlab::lattice
