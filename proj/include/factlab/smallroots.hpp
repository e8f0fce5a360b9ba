#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factlab/arith.hpp"
#include "factlab/lattice.hpp"
#include "factlab/mpoly.hpp"
#include "factlab/polyroots.hpp"

namespace factlab::smallroots {

using poly::ExpVec;
using poly::MPoly;

namespace detail {

inline Int monomial_scale(const ExpVec& e, const std::vector<Int>& bounds) {
    Int s = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) s *= arith::pow_int(bounds[i], e[i]);
    return s;
}

struct ShiftLatticeResult {
    std::vector<MPoly> candidates;            // gate-passing polynomials, shortest first
    std::vector<Int> candidate_norms_squared; // scaled norms of the candidates
    std::vector<Int> norms_squared;           // all reduced norms, sorted
    Int modulus;
    std::size_t dim = 0;
    std::size_t gate_passed = 0;
};

/// Builds the shift-polynomial lattice for f (pivot: nonzero constant term),
/// reduces it, and returns the reduced vectors passing the Howgrave-Graham
/// norm gate, converted back to polynomials. Any integer combination of the
/// rows vanishes mod M at every root of f; a vector v with
/// omega*||v||^2 < M^2 therefore vanishes exactly on roots inside the box.
inline ShiftLatticeResult shift_lattice_reduce(const MPoly& f, const std::vector<Int>& bounds,
                                               const std::vector<ExpVec>& shifts,
                                               std::size_t want_count, int margin_bits = 8,
                                               const Rat& delta = Rat(3, 4)) {
    const std::size_t nv = f.vars().size();
    if (bounds.size() != nv) throw std::domain_error("shift lattice: bound arity mismatch");
    for (const auto& b : bounds)
        if (b < 1) throw std::domain_error("shift lattice: bounds must be >= 1");
    Int pivot = f.coeff(ExpVec(nv, 0));
    if (pivot == 0) throw std::domain_error("shift lattice: zero constant term");
    if (shifts.size() < want_count)
        throw std::domain_error("shift lattice: fewer shifts than wanted vectors");

    // Column set: every monomial of every shifted copy of f.
    std::map<ExpVec, std::size_t, poly::GrlexLess> col_of;
    for (const auto& s : shifts) {
        for (const auto& [e, c] : f.terms()) {
            ExpVec m(nv);
            for (std::size_t i = 0; i < nv; ++i) m[i] = s[i] + e[i];
            col_of.emplace(m, 0);
        }
    }
    std::size_t idx = 0;
    for (auto& [m, i] : col_of) i = idx++;
    const std::size_t omega = col_of.size();

    std::vector<bool> is_shift_col(omega, false);
    for (const auto& s : shifts) {
        auto it = col_of.find(s);
        if (it == col_of.end() || is_shift_col[it->second])
            throw std::domain_error("shift lattice: duplicate or unplaced shift");
        is_shift_col[it->second] = true;
    }

    // Modulus selection. With s shift rows and pivot product P (the lattice
    // determinant sans the M factors), M^kappa > omega^ceil(e/2) *
    // 2^ceil(w(w-1)/4) * P guarantees `want_count` vectors under the gate,
    // where e = omega+1-want_count and kappa = s+1-want_count.
    Int pivot_product = 1;
    for (const auto& s : shifts) pivot_product *= abs(pivot) * monomial_scale(s, bounds);
    for (const auto& [m, i] : col_of)
        if (!is_shift_col[i]) pivot_product *= monomial_scale(m, bounds);

    const std::size_t e_idx = omega + 1 - want_count;
    const std::size_t kappa = shifts.size() + 1 - want_count;
    Int rhs = arith::pow_int(Int(static_cast<unsigned long>(omega)),
                             static_cast<unsigned long>((e_idx + 1) / 2));
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), (omega * (omega - 1) + 3) / 4);
    rhs *= pivot_product;
    Int modulus = arith::ceil_root(rhs, static_cast<unsigned long>(kappa)) + 1;
    mpz_mul_2exp(modulus.get_mpz_t(), modulus.get_mpz_t(), static_cast<unsigned long>(margin_bits));

    // Generating set: scaled shifted copies of f plus M * monomial for every
    // column (overcomplete; Hermite reduction restores independence). The
    // modulus rows on the pivot columns are what lets reduction mix the
    // f-shifts with fresh directions instead of returning only f-multiples.
    std::vector<std::vector<Int>> rows;
    std::vector<Int> column_moduli(omega);
    for (const auto& [m, i] : col_of) column_moduli[i] = modulus * monomial_scale(m, bounds);
    for (const auto& s : shifts) {
        std::vector<Int> row(omega, Int(0));
        for (const auto& [e, c] : f.terms()) {
            ExpVec m(nv);
            for (std::size_t i = 0; i < nv; ++i) m[i] = s[i] + e[i];
            row[col_of[m]] = c * monomial_scale(m, bounds);
        }
        rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < omega; ++i) {
        std::vector<Int> row(omega, Int(0));
        row[i] = column_moduli[i];
        rows.push_back(std::move(row));
    }

    auto basis_rows = lattice::hermite_basis(std::move(rows), column_moduli);
    auto [reduced, report] = lattice::lll_reduce(lattice::make_basis(std::move(basis_rows)), delta);

    // Sort reduced rows by norm, then unscale gate-passing ones.
    std::vector<std::pair<Int, std::size_t>> order;
    for (std::size_t i = 0; i < reduced.dim(); ++i)
        order.emplace_back(lattice::norm_squared(reduced.rows[i]), i);
    std::sort(order.begin(), order.end());

    ShiftLatticeResult out;
    out.modulus = modulus;
    out.dim = omega;
    const Int gate = modulus * modulus;
    for (const auto& [nsq, i] : order) {
        out.norms_squared.push_back(nsq);
        if (Int(static_cast<unsigned long>(omega)) * nsq >= gate) continue;
        ++out.gate_passed;
        MPoly g(f.vars());
        for (const auto& [m, col] : col_of) {
            const Int& v = reduced.rows[i][col];
            if (v == 0) continue;
            Int scale = monomial_scale(m, bounds);
            Int c = v / scale;
            if (c * scale != v)
                throw std::logic_error("shift lattice: non-integral unscaled coefficient");
            g.add_term(m, c);
        }
        if (!g.is_zero()) {
            out.candidates.push_back(std::move(g));
            out.candidate_norms_squared.push_back(nsq);
        }
    }
    return out;
}

}  // namespace detail

/// A bivariate integer small-root problem: find all roots of f with
/// |x0| <= X, |y0| <= Y (closed box). W is the height of f(xX, yY).
struct BivariateProblem {
    MPoly f;
    Int X, Y;
    Int W;
};

inline BivariateProblem make_problem(MPoly f, Int X, Int Y) {
    if (f.vars().size() != 2) throw std::domain_error("bivariate problem: need two variables");
    if (X < 1 || Y < 1) throw std::domain_error("bivariate problem: bounds must be >= 1");
    if (!poly::bilinear_irreducible(f))
        throw std::domain_error("bivariate problem: polynomial fails irreducibility test");
    Int W = poly::height(f, {X, Y});
    return BivariateProblem{std::move(f), std::move(X), std::move(Y), std::move(W)};
}

/// Root-bound gate: condition (i) XY < W^(2/(3d)) with d the max individual
/// degree, or condition (ii) XY < W^(1/d) with d the total degree.
inline bool root_bound_gate(const BivariateProblem& p) {
    Int xy = p.X * p.Y;
    unsigned d1 = p.f.max_individual_degree();
    unsigned dt = p.f.total_degree();
    bool cond_i = d1 > 0 && arith::pow_int(xy, 3UL * d1) < p.W * p.W;
    bool cond_ii = dt > 0 && arith::pow_int(xy, dt) < p.W;
    return cond_i || cond_ii;
}

struct SolveOptions {
    unsigned k_shift = 2;   // shift exponents 0 <= a,b < k_shift
    int margin_bits = 8;
    Rat delta = Rat(3, 4);
};

struct BivariateSolution {
    std::vector<std::array<Int, 2>> roots;
    bool usable_vector = false;  // false: heuristic failure, no independent g
    std::size_t lattice_dim = 0;
    std::size_t gate_passed = 0;
    Int modulus;
};

/// Lattice small-root solver: build the shift lattice, reduce, pick a short
/// vector g independent of f (certified by resultant(f, g, .) != 0),
/// eliminate, extract integer roots, back-substitute and verify exactly.
inline BivariateSolution solve_bivariate(const BivariateProblem& p, const SolveOptions& opt = {}) {
    if (!root_bound_gate(p))
        throw std::domain_error("solve_bivariate: XY exceeds the height bound");

    // A zero constant term means (0,0) is a root and the pivot degenerates;
    // translate x by 1 until the constant is nonzero.
    const std::string vx = p.f.vars()[0];
    const std::string vy = p.f.vars()[1];
    MPoly f = p.f;
    Int shift_x = 0;
    while (f.coeff({0, 0}) == 0 && shift_x < 4) {
        ++shift_x;
        MPoly x_shifted = MPoly::variable(vx) + MPoly::constant(1);
        MPoly g(f.vars());
        for (const auto& [e, c] : f.terms()) {
            MPoly t = MPoly::constant(c);
            for (unsigned i = 0; i < e[0]; ++i) t = t * x_shifted;
            if (e[1] > 0) t = t * MPoly::monomial(f.vars(), {0, e[1]}, 1);
            g = g + t;
        }
        f = g;
    }
    const Int X = p.X + shift_x;  // translated roots live in the widened box

    std::vector<ExpVec> shifts;
    for (unsigned a = 0; a < opt.k_shift; ++a)
        for (unsigned b = 0; b < opt.k_shift; ++b) shifts.push_back({a, b});

    auto lat = detail::shift_lattice_reduce(f, {X, p.Y}, shifts, 1, opt.margin_bits, opt.delta);

    BivariateSolution sol;
    sol.lattice_dim = lat.dim;
    sol.gate_passed = lat.gate_passed;
    sol.modulus = lat.modulus;

    for (const MPoly& g : lat.candidates) {
        // Independence certificate: a vanishing resultant means g shares a
        // factor with the irreducible f, i.e. g is a multiple of f.
        MPoly rx = poly::resultant(f, g, vy);
        std::string elim_var = vx, other_var = vy;
        Int elim_bound = X, other_bound = p.Y;
        if (rx.is_zero()) {
            rx = poly::resultant(f, g, vx);
            if (rx.is_zero()) continue;
            elim_var = vy;
            other_var = vx;
            elim_bound = p.Y;
            other_bound = X;
        }
        sol.usable_vector = true;

        for (const Int& r : poly::integer_roots_univariate(rx.pruned(), elim_bound)) {
            MPoly fr = f.specialize(elim_var, r);
            std::vector<Int> seconds;
            if (fr.is_zero()) {
                MPoly gr = g.specialize(elim_var, r);
                if (gr.is_zero()) continue;
                seconds = poly::integer_roots_univariate(gr.pruned(), other_bound);
            } else if (fr.total_degree() == 0) {
                continue;  // no solution along this slice
            } else {
                seconds = poly::integer_roots_univariate(fr.pruned(), other_bound);
            }
            for (const Int& s : seconds) {
                Int x0 = (elim_var == vx) ? r : s;
                Int y0 = (elim_var == vx) ? s : r;
                if (f.evaluate({x0, y0}) != 0) continue;
                Int orig_x = x0 + shift_x;  // f was translated by f(x+1, y)
                if (abs(orig_x) > p.X || abs(y0) > p.Y) continue;
                if (p.f.evaluate({orig_x, y0}) != 0) continue;
                sol.roots.push_back({orig_x, y0});
            }
        }
        if (sol.usable_vector) break;
    }

    std::sort(sol.roots.begin(), sol.roots.end());
    sol.roots.erase(std::unique(sol.roots.begin(), sol.roots.end()), sol.roots.end());
    return sol;
}

/// Result of a lattice-based factoring attempt. Every reported success has
/// been re-verified by multiplication.
struct FactorOutcome {
    bool found = false;
    bool usable_vector = false;
    bool gate_refused = false;  // the root-bound gate rejected the instance
    Int p, q;
    std::vector<std::array<Int, 2>> roots;
    MPoly f;  // the polynomial actually solved
};

namespace detail {

/// Runs the solver when the bound gate admits the problem; otherwise marks
/// the outcome as refused instead of throwing (the factor_* entry points
/// report outcomes, only solve_bivariate itself throws).
inline void solve_into(FactorOutcome& out, const BivariateProblem& p, const SolveOptions& opt) {
    if (!root_bound_gate(p)) {
        out.gate_refused = true;
        return;
    }
    auto sol = solve_bivariate(p, opt);
    out.usable_vector = sol.usable_vector;
    out.roots = sol.roots;
}

}  // namespace detail

/// Shifted-center factoring: centers a = round(sqrt(alpha*N)),
/// b = round(sqrt(beta*N)); solves f = xy - b*x - a*y + (a*b - N) and
/// returns p = a - x0, q = b - y0. The alpha = beta = 1 case degenerates to
/// the symmetric-center methods and is rejected.
inline FactorOutcome factor_shifted_center(const Int& N, const Rat& alpha, const Rat& beta,
                                           const Int& X, const Int& Y,
                                           const SolveOptions& opt = {}) {
    if (N < 9 || N % 2 == 0) throw std::domain_error("factor_shifted_center: N must be odd >= 9");
    if (!(alpha > 0) || !(beta > 0))
        throw std::domain_error("factor_shifted_center: alpha, beta must be positive");
    if (alpha == 1 && beta == 1)
        throw std::domain_error("factor_shifted_center: alpha = beta = 1 reduces to the "
                                "symmetric-center method");
    Int a = arith::round_sqrt_rational(alpha.get_num() * N, alpha.get_den());
    Int b = arith::round_sqrt_rational(beta.get_num() * N, beta.get_den());
    if (a * b == N) throw std::domain_error("factor_shifted_center: degenerate centers a*b = N");

    std::vector<std::string> xy{"x", "y"};
    MPoly f(xy);
    f.add_term({1, 1}, 1);
    f.add_term({1, 0}, -b);
    f.add_term({0, 1}, -a);
    f.add_term({0, 0}, a * b - N);

    FactorOutcome out;
    out.f = f;
    detail::solve_into(out, make_problem(f, X, Y), opt);
    for (const auto& [x0, y0] : out.roots) {
        Int pc = a - x0, qc = b - y0;
        if (pc > 1 && qc > 1 && pc * qc == N) {
            out.found = true;
            out.p = std::min(pc, qc);
            out.q = std::max(pc, qc);
            break;
        }
    }
    return out;
}

/// Known-low-bits factoring: given p_low = p mod 2^t, computes
/// q_low = N * p_low^-1 mod 2^t and solves
/// f = 2^t*xy + q_low*x + p_low*y + (p_low*q_low - N)/2^t for the unknown
/// halves; p = p_low + 2^t*x0, q = q_low + 2^t*y0.
inline FactorOutcome factor_known_low_bits(const Int& N, const Int& p_low, unsigned t,
                                           const SolveOptions& opt = {}) {
    if (N < 9 || N % 2 == 0) throw std::domain_error("factor_known_low_bits: N must be odd >= 9");
    if (t == 0) throw std::domain_error("factor_known_low_bits: t must be positive");
    const Int mod = Int(1) << t;
    if (p_low <= 0 || p_low >= mod || p_low % 2 == 0)
        throw std::domain_error("factor_known_low_bits: p_low not an odd residue mod 2^t");

    Int inv;
    if (mpz_invert(inv.get_mpz_t(), p_low.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::domain_error("factor_known_low_bits: p_low not invertible mod 2^t");
    Int q_low = (N * inv) % mod;

    FactorOutcome out;
    if (p_low * q_low == N) {  // full knowledge
        out.found = true;
        out.p = std::min(p_low, q_low);
        out.q = std::max(p_low, q_low);
        return out;
    }

    Int c0 = p_low * q_low - N;
    if (c0 % mod != 0) throw std::logic_error("factor_known_low_bits: congruence broke");
    std::vector<std::string> xy{"x", "y"};
    MPoly f(xy);
    f.add_term({1, 1}, mod);
    f.add_term({1, 0}, q_low);
    f.add_term({0, 1}, p_low);
    f.add_term({0, 0}, c0 / mod);
    out.f = f;

    // Unknown halves: p <= sqrt(N), q <= sqrt(2N) for balanced input.
    Int X = arith::isqrt(N) / mod + 2;
    Int Y = arith::isqrt(2 * N) / mod + 2;
    detail::solve_into(out, make_problem(f, X, Y), opt);
    for (const auto& [x0, y0] : out.roots) {
        Int pc = p_low + mod * x0, qc = q_low + mod * y0;
        if (pc > 1 && qc > 1 && pc * qc == N) {
            out.found = true;
            out.p = std::min(pc, qc);
            out.q = std::max(pc, qc);
            break;
        }
    }
    return out;
}

/// Known low base-D digit of p's offset from the center C = round(gamma*sqrtN),
/// D = ceil(N^(1/6)); gamma is passed squared (default 9/8, i.e. 3*sqrt2/4).
/// The matching digit of q comes from (C+x0)(C+y0) = N (mod D); the mid
/// digits (x, y) are the small roots of the resulting bivariate polynomial.
inline FactorOutcome factor_known_bits_sixth(const Int& N, const Int& x0_digit,
                                             const Rat& gamma_sq = Rat(9, 8),
                                             std::optional<Int> bound_override = std::nullopt,
                                             const SolveOptions& opt = {}) {
    if (N < 9 || N % 2 == 0) throw std::domain_error("factor_known_bits_sixth: N must be odd >= 9");
    if (!(gamma_sq > 1)) throw std::domain_error("factor_known_bits_sixth: gamma^2 must exceed 1");
    const Int D = arith::ceil_root(N, 6);
    if (x0_digit < 0 || x0_digit >= D)
        throw std::domain_error("factor_known_bits_sixth: digit out of range");
    const Int C = arith::round_sqrt_rational(gamma_sq.get_num() * N, gamma_sq.get_den());

    // y0 from (C + x0)(C + y0) = N (mod D).
    Int base = (C + x0_digit) % D;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), D.get_mpz_t()) == 0)
        throw std::domain_error("factor_known_bits_sixth: C + x0 not invertible mod D");
    Int y0_digit = ((N * inv - C) % D + D) % D;

    // p = C + x*D + x0, q = C + y*D + y0:
    // f = D^2*xy + D(C+y0)*x + D(C+x0)*y + (C^2 - N + C(x0+y0) + x0*y0).
    // The digit congruence makes every coefficient divisible by D; the
    // primitive part has the same roots and honest height.
    std::vector<std::string> xy{"x", "y"};
    MPoly f(xy);
    f.add_term({1, 1}, D * D);
    f.add_term({1, 0}, D * (C + y0_digit));
    f.add_term({0, 1}, D * (C + x0_digit));
    f.add_term({0, 0}, C * C - N + C * (x0_digit + y0_digit) + x0_digit * y0_digit);
    f = f.primitive_part();

    FactorOutcome out;
    out.f = f;
    Int B = bound_override ? *bound_override : arith::ceil_root(N, 3);
    detail::solve_into(out, make_problem(f, B, B), opt);
    for (const auto& [x0, y0] : out.roots) {
        Int pc = C + x0 * D + x0_digit, qc = C + y0 * D + y0_digit;
        if (pc > 1 && qc > 1 && pc * qc == N) {
            out.found = true;
            out.p = std::min(pc, qc);
            out.q = std::max(pc, qc);
            break;
        }
    }
    return out;
}

}  // namespace factlab::smallroots
