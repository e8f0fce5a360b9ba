#pragma once

#include <array>
#include <chrono>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <mpfr.h>

#include "factlab/arith.hpp"
#include "factlab/mpoly.hpp"
#include "factlab/polyroots.hpp"
#include "factlab/smallroots.hpp"

#include <json.hpp>

namespace factlab::trivariate {

using poly::ExpVec;
using poly::MPoly;

/// f0 = m0*xy + (r0 + m0*q0)*x + (r0 + m0*p0)*y - r0*z
///      + m0*p0*q0 + r0*(p0 + q0) - m0*N,
/// which vanishes at (p - p0, q - q0, p + q) whenever p*q = N.
inline MPoly build_f0(const Int& N, const Int& p0, const Int& q0, const Int& m0, const Int& r0) {
    if (r0 == 0) throw std::domain_error("build_f0: r0 must be nonzero");
    Int g;
    mpz_gcd(g.get_mpz_t(), m0.get_mpz_t(), r0.get_mpz_t());
    if (g != 1) throw std::domain_error("build_f0: gcd(m0, r0) != 1");
    MPoly f(std::vector<std::string>{"x", "y", "z"});
    f.add_term({1, 1, 0}, m0);
    f.add_term({1, 0, 0}, r0 + m0 * q0);
    f.add_term({0, 1, 0}, r0 + m0 * p0);
    f.add_term({0, 0, 1}, -r0);
    f.add_term({0, 0, 0}, m0 * p0 * q0 + r0 * (p0 + q0) - m0 * N);
    return f;
}

/// The linear relation x + y - z + p0 + q0, vanishing at the same root.
inline MPoly build_f4(const Int& p0, const Int& q0) {
    MPoly f(std::vector<std::string>{"x", "y", "z"});
    f.add_term({1, 0, 0}, 1);
    f.add_term({0, 1, 0}, 1);
    f.add_term({0, 0, 1}, -1);
    f.add_term({0, 0, 0}, p0 + q0);
    return f;
}

/// Exact evaluation of (3*tau^2/2 + 2*eps) / (2 + 3*tau - eps) < beta.
inline bool parameter_feasibility(const Rat& beta, const Rat& tau, const Rat& eps) {
    if (!(beta > 0) || !(eps > 0) || tau < 0) return false;
    Rat denom = 2 + 3 * tau - eps;
    if (!(denom > 0)) return false;
    Rat lhs = Rat(3, 2) * tau * tau + 2 * eps;
    return lhs < beta * denom;
}

/// Exact check of X^(3+3t) Y^(3+6t+3t^2) Z^(2+3t) < W^(2+3t-e) by clearing
/// the rational exponents to a common denominator.
inline bool ejm_bound_check(const Int& X, const Int& Y, const Int& Z, const Int& W,
                            const Rat& tau, const Rat& eps) {
    if (X < 1 || Y < 1 || Z < 1) throw std::domain_error("ejm_bound_check: bounds must be >= 1");
    if (W < 2) throw std::domain_error("ejm_bound_check: W must be >= 2");
    const Int b = tau.get_den(), d = eps.get_den();
    Int L = b * b * d;
    if (L > 2000000) throw std::domain_error("ejm_bound_check: exponent denominators too large");

    auto int_exp = [&](const Rat& e) {
        Rat scaled = e * Rat(L);
        if (scaled.get_den() != 1 || scaled < 0)
            throw std::logic_error("ejm_bound_check: exponent clearing failed");
        return scaled.get_num();
    };
    Int e1 = int_exp(3 + 3 * tau);
    Int e2 = int_exp(3 + 6 * tau + 3 * tau * tau);
    Int e3 = int_exp(2 + 3 * tau);
    Int e4 = int_exp(2 + 3 * tau - eps);

    Int g = e1;
    for (const Int* e : {&e2, &e3, &e4}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e->get_mpz_t());
    if (g > 1) { e1 /= g; e2 /= g; e3 /= g; e4 /= g; }
    if (!e1.fits_ulong_p() || !e2.fits_ulong_p() || !e3.fits_ulong_p() || !e4.fits_ulong_p())
        throw std::domain_error("ejm_bound_check: cleared exponents too large");

    Int lhs = arith::pow_int(X, e1.get_ui()) * arith::pow_int(Y, e2.get_ui()) *
              arith::pow_int(Z, e3.get_ui());
    Int rhs = arith::pow_int(W, e4.get_ui());
    return lhs < rhs;
}

/// Parameter pack for one trivariate run. The height floor is
/// enforced at the canonical bounds (ceil sqrt N, ceil sqrt N, 3 ceil sqrt N)
/// regardless of the search box X, Y, Z.
struct TrivariateInstance {
    Int N, p0, q0, m0, r0;
    Int X, Y, Z;
    Rat tau, beta, eps;
    MPoly f0;
};

inline Int canonical_height(const MPoly& f0, const Int& N) {
    Int s = arith::ceil_sqrt(N);
    return poly::height(f0, {s, s, 3 * s});
}

inline TrivariateInstance make_instance(Int N, Int p0, Int q0, Int m0, Int r0, Int X, Int Y,
                                        Int Z, Rat tau, Rat beta, Rat eps) {
    MPoly f0 = build_f0(N, p0, q0, m0, r0);
    if (canonical_height(f0, N) < m0 * N)
        throw std::domain_error("trivariate instance: height floor m0*N violated");
    return TrivariateInstance{std::move(N), std::move(p0),  std::move(q0), std::move(m0),
                              std::move(r0), std::move(X),  std::move(Y),  std::move(Z),
                              std::move(tau), std::move(beta), std::move(eps), std::move(f0)};
}

enum class EjmStatus { ok, bound_infeasible, no_short_vectors };

struct EjmReport {
    EjmStatus status = EjmStatus::ok;
    std::size_t lattice_dim = 0;
    Int modulus;
    std::vector<Int> norms_squared;            // all reduced norms, sorted
    std::vector<Int> candidate_norms_squared;  // gate-passing, shortest first
    std::size_t gate_passed = 0;
    std::size_t multiples_skipped = 0;  // gate-passers that were exact f0 multiples
};

struct EjmResult {
    MPoly f1, f2;
    EjmReport report;
};

struct EjmOptions {
    unsigned kx = 2, ky = 2;
    int margin_bits = 8;
    Rat delta = Rat(3, 4);
};

/// Builds the shift lattice for the shape c0*xy + c1*x + c2*y + c3*z + c4,
/// reduces it, and returns the two shortest gate-passing vectors as
/// polynomials sharing every box root of f0. tau adds z-shift depth.
inline EjmResult ejm_reduce(const TrivariateInstance& inst, const EjmOptions& opt = {}) {
    EjmResult out;
    if (!parameter_feasibility(inst.beta, inst.tau, inst.eps)) {
        out.report.status = EjmStatus::bound_infeasible;
        return out;
    }
    Int W = poly::height(inst.f0, {inst.X, inst.Y, inst.Z});
    if (W < 2 || !ejm_bound_check(inst.X, inst.Y, inst.Z, W, inst.tau, inst.eps)) {
        out.report.status = EjmStatus::bound_infeasible;
        return out;
    }

    // tau realized as extra z-shift depth on top of the base box.
    Rat tz = inst.tau * Rat(static_cast<long>(std::max(opt.kx, opt.ky) - 1));
    unsigned kz = 1 + static_cast<unsigned>(mpz_get_ui(Int(lattice::detail::round_rat(tz)).get_mpz_t()));
    std::vector<ExpVec> shifts;
    for (unsigned a = 0; a < opt.kx; ++a)
        for (unsigned b = 0; b < opt.ky; ++b)
            for (unsigned c = 0; c < kz; ++c) shifts.push_back({a, b, c});

    auto lat = smallroots::detail::shift_lattice_reduce(inst.f0, {inst.X, inst.Y, inst.Z}, shifts,
                                                        2, opt.margin_bits, opt.delta);
    out.report.lattice_dim = lat.dim;
    out.report.modulus = lat.modulus;
    out.report.norms_squared = lat.norms_squared;
    out.report.gate_passed = lat.gate_passed;

    // Exact multiples of f0 restate f0; prefer the shortest fresh vectors
    // and fall back to multiples only to fill the pair.
    std::vector<std::size_t> fresh, dull;
    for (std::size_t i = 0; i < lat.candidates.size(); ++i) {
        if (poly::is_multiple_of(lat.candidates[i], inst.f0)) dull.push_back(i);
        else fresh.push_back(i);
    }
    out.report.multiples_skipped = std::min<std::size_t>(dull.size(), 2);
    std::vector<std::size_t> chosen = fresh;
    for (std::size_t i : dull) chosen.push_back(i);
    if (chosen.size() < 2) {
        out.report.status = EjmStatus::no_short_vectors;
        return out;
    }
    if (lat.candidate_norms_squared[chosen[1]] < lat.candidate_norms_squared[chosen[0]])
        std::swap(chosen[0], chosen[1]);
    for (std::size_t k = 0; k < 2; ++k)
        out.report.candidate_norms_squared.push_back(lat.candidate_norms_squared[chosen[k]]);
    out.f1 = lat.candidates[chosen[0]];
    out.f2 = lat.candidates[chosen[1]];
    return out;
}

/// The elementary generating family in (X, Y, z): all vanish at
/// (p, q, p+q) when N = p*q.
inline std::vector<MPoly> build_u_family(const Int& N) {
    std::vector<std::string> v{"X", "Y", "z"};
    std::vector<MPoly> u(9, MPoly(v));
    u[0].add_term({1, 0, 0}, 1);
    u[0].add_term({0, 1, 0}, 1);
    u[0].add_term({0, 0, 1}, -1);

    u[1].add_term({2, 0, 0}, 1);
    u[1].add_term({1, 0, 1}, -1);
    u[1].add_term({0, 0, 0}, N);

    u[2].add_term({0, 2, 0}, 1);
    u[2].add_term({0, 1, 1}, -1);
    u[2].add_term({0, 0, 0}, N);

    u[3].add_term({4, 0, 0}, 1);
    u[3].add_term({2, 0, 2}, -1);
    u[3].add_term({2, 0, 0}, 2 * N);
    u[3].add_term({0, 0, 0}, N * N);

    u[4].add_term({0, 4, 0}, 1);
    u[4].add_term({0, 2, 2}, -1);
    u[4].add_term({0, 2, 0}, 2 * N);
    u[4].add_term({0, 0, 0}, N * N);

    u[5].add_term({6, 0, 0}, 1);
    u[5].add_term({3, 0, 3}, -1);
    u[5].add_term({3, 0, 1}, 3 * N);
    u[5].add_term({0, 0, 0}, N * N * N);

    u[6].add_term({0, 6, 0}, 1);
    u[6].add_term({0, 3, 3}, -1);
    u[6].add_term({0, 3, 1}, 3 * N);
    u[6].add_term({0, 0, 0}, N * N * N);

    u[7].add_term({8, 0, 0}, 1);
    u[7].add_term({4, 0, 4}, -1);
    u[7].add_term({4, 0, 2}, 4 * N);
    u[7].add_term({4, 0, 0}, -2 * N * N);
    u[7].add_term({0, 0, 0}, N * N * N * N);

    u[8].add_term({0, 8, 0}, 1);
    u[8].add_term({0, 4, 4}, -1);
    u[8].add_term({0, 4, 2}, 4 * N);
    u[8].add_term({0, 4, 0}, -2 * N * N);
    u[8].add_term({0, 0, 0}, N * N * N * N);
    return u;
}

struct FirstLevelEntry {
    std::size_t i, j;
    std::string var;
    bool zero;
};

struct SecondLevelEntry {
    std::array<std::size_t, 2> pair_a, pair_b;
    std::string first_var, second_var;
    bool zero;
};

struct IndependenceReport {
    std::vector<FirstLevelEntry> first_level;
    std::vector<SecondLevelEntry> second_level;
    bool structural_dependence = false;  // identical first-level resultants
    bool any_second_level_zero = false;
};

/// First-level resultants for every pair and variable, then second-level
/// resultants across pairs of first-level results in each remaining
/// variable. Identical first-level resultants are flagged as structural
/// dependence.
inline IndependenceReport independence_diagnostics(const std::vector<MPoly>& polys) {
    if (polys.size() < 2 || polys.size() > 4)
        throw std::domain_error("independence_diagnostics: need 2 to 4 polynomials");
    std::vector<std::string> vars;
    for (const auto& f : polys)
        for (const auto& v : f.vars())
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    if (vars.size() != 3) throw std::domain_error("independence_diagnostics: expect 3 variables");

    IndependenceReport rep;
    for (const auto& var : vars) {
        struct Entry {
            std::array<std::size_t, 2> pair;
            MPoly res;
        };
        std::vector<Entry> level;
        for (std::size_t i = 0; i < polys.size(); ++i) {
            for (std::size_t j = i + 1; j < polys.size(); ++j) {
                if (polys[i].degree_in(var) == 0 && polys[j].degree_in(var) == 0) continue;
                MPoly r = poly::resultant(polys[i], polys[j], var);
                rep.first_level.push_back({i, j, var, r.is_zero()});
                if (!r.is_zero()) level.push_back({{i, j}, r.primitive_part()});
            }
        }
        for (std::size_t a = 0; a < level.size(); ++a)
            for (std::size_t b = a + 1; b < level.size(); ++b)
                if (level[a].res == level[b].res) rep.structural_dependence = true;

        for (const auto& w : vars) {
            if (w == var) continue;
            for (std::size_t a = 0; a < level.size(); ++a) {
                for (std::size_t b = a + 1; b < level.size(); ++b) {
                    if (level[a].res.degree_in(w) == 0 && level[b].res.degree_in(w) == 0) continue;
                    MPoly r2 = poly::resultant(level[a].res, level[b].res, w);
                    bool z = r2.is_zero();
                    rep.second_level.push_back({level[a].pair, level[b].pair, var, w, z});
                    if (z) rep.any_second_level_zero = true;
                }
            }
        }
    }
    return rep;
}

struct SystemSolution {
    std::vector<std::array<Int, 3>> roots;  // in sorted-variable order
    bool dependent = false;                 // every elimination order collapsed
};

namespace detail {

/// Pair resultant with a cost guard: oversized Sylvester systems (a sign of
/// junk-factor blowup, not of solvable structure) are skipped rather than
/// ground through. Returns nullopt when skipped.
inline std::optional<MPoly> guarded_resultant(const MPoly& a, const MPoly& b,
                                              const std::string& var) {
    unsigned da = a.degree_in(var), db = b.degree_in(var);
    if (da + db > 8) return std::nullopt;
    if (a.term_count() + b.term_count() > 60) return std::nullopt;
    if (bit_length(poly::norms(a).sup) + bit_length(poly::norms(b).sup) > 50000)
        return std::nullopt;
    return poly::resultant(a, b, var);
}

inline void dedup_primitive(std::vector<MPoly>& polys) {
    std::vector<MPoly> out;
    for (auto& f : polys) {
        MPoly p = f.primitive_part();
        bool seen = false;
        for (const auto& g : out)
            if (g == p) { seen = true; break; }
        if (!seen) out.push_back(std::move(p));
    }
    polys = std::move(out);
}

}  // namespace detail

/// Resultant-elimination solver: eliminates two variables pairwise, extracts
/// integer roots of the surviving univariates, back-substitutes, and keeps
/// only exact common roots of every input. All elimination orders are tried
/// before a dependent-collapse verdict; a single surviving bivariate falls
/// back to the lattice small-root solver.
inline SystemSolution solve_system(const std::vector<MPoly>& polys_in, const Int& X, const Int& Y,
                                   const Int& Z) {
    if (polys_in.size() < 3) throw std::domain_error("solve_system: need at least 3 polynomials");
    std::vector<std::string> vars;
    for (const auto& f : polys_in)
        for (const auto& v : f.vars())
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    if (vars.size() != 3) throw std::domain_error("solve_system: expect 3 variables");

    std::vector<MPoly> polys;
    for (const auto& f : polys_in) polys.push_back(f.embedded(vars));

    auto bound_of = [&](const std::string& v) -> const Int& {
        if (v == vars[0]) return X;
        if (v == vars[1]) return Y;
        return Z;
    };

    auto full_check = [&](const Int& a, const Int& b, const Int& c) {
        for (const auto& f : polys)
            if (f.evaluate({a, b, c}) != 0) return false;
        return true;
    };

    // Elimination orders: (first eliminated, second eliminated, survivor).
    // z-first is the default; the rest are collapse fallbacks.
    std::vector<std::array<std::string, 3>> orders = {
        {vars[2], vars[1], vars[0]}, {vars[2], vars[0], vars[1]},
        {vars[1], vars[2], vars[0]}, {vars[1], vars[0], vars[2]},
        {vars[0], vars[2], vars[1]}, {vars[0], vars[1], vars[2]}};

    SystemSolution sol;
    auto emit = [&](const Int& a, const Int& b, const Int& c) {
        if (abs(a) > X || abs(b) > Y || abs(c) > Z) return;
        if (!full_check(a, b, c)) return;
        std::array<Int, 3> r{a, b, c};
        if (std::find(sol.roots.begin(), sol.roots.end(), r) == sol.roots.end())
            sol.roots.push_back(r);
    };

    auto var_pos = [&](const std::string& v) -> std::size_t {
        return v == vars[0] ? 0 : v == vars[1] ? 1 : 2;
    };

    // Recovers the remaining coordinates once `survivor` is pinned to s_val.
    auto back_substitute = [&](const std::string& survivor, const Int& s_val) {
        std::vector<std::string> rest;
        for (const auto& v : vars)
            if (v != survivor) rest.push_back(v);

        std::vector<MPoly> slice;
        for (const auto& f : polys) {
            MPoly g = f.specialize(survivor, s_val);
            if (!g.is_zero()) slice.push_back(g);
        }
        // Solve the two-variable slice: univariate members pin coordinates.
        std::vector<Int> first_cands, second_cands;
        bool have_first = false, have_second = false;
        for (const auto& g : slice) {
            bool d0 = g.degree_in(rest[0]) > 0, d1 = g.degree_in(rest[1]) > 0;
            if (d0 && !d1 && !have_first) {
                first_cands = poly::integer_roots_univariate(g.pruned(), bound_of(rest[0]));
                have_first = true;
            } else if (d1 && !d0 && !have_second) {
                second_cands = poly::integer_roots_univariate(g.pruned(), bound_of(rest[1]));
                have_second = true;
            }
        }
        if (!have_first || !have_second) {
            // Eliminate within the slice.
            for (std::size_t i = 0; i < slice.size() && !(have_first && have_second); ++i) {
                for (std::size_t j = i + 1; j < slice.size(); ++j) {
                    if (slice[i].degree_in(rest[1]) == 0 || slice[j].degree_in(rest[1]) == 0)
                        continue;
                    MPoly r = poly::resultant(slice[i], slice[j], rest[1]);
                    if (!r.is_zero() && r.degree_in(rest[0]) > 0 && !have_first) {
                        first_cands = poly::integer_roots_univariate(r.pruned(), bound_of(rest[0]));
                        have_first = true;
                    }
                    MPoly r2 = poly::resultant(slice[i], slice[j], rest[0]);
                    if (!r2.is_zero() && r2.degree_in(rest[1]) > 0 && !have_second) {
                        second_cands = poly::integer_roots_univariate(r2.pruned(), bound_of(rest[1]));
                        have_second = true;
                    }
                    if (have_first && have_second) break;
                }
            }
        }
        if (!have_first || !have_second) return;
        for (const Int& a : first_cands) {
            for (const Int& b : second_cands) {
                std::array<Int, 3> full;
                full[var_pos(survivor)] = s_val;
                full[var_pos(rest[0])] = a;
                full[var_pos(rest[1])] = b;
                emit(full[0], full[1], full[2]);
            }
        }
    };

    bool any_determinate = false;
    for (const auto& order : orders) {
        const std::string& e1 = order[0];
        const std::string& e2 = order[1];
        const std::string& survivor = order[2];

        // Stage 1: eliminate e1.
        std::vector<MPoly> s1;
        std::vector<MPoly> with_e1;
        for (const auto& f : polys) {
            if (f.degree_in(e1) == 0) s1.push_back(f);
            else with_e1.push_back(f);
        }
        for (std::size_t i = 0; i < with_e1.size(); ++i)
            for (std::size_t j = i + 1; j < with_e1.size(); ++j) {
                auto r = detail::guarded_resultant(with_e1[i], with_e1[j], e1);
                if (r && !r->is_zero()) s1.push_back(*r);
            }
        detail::dedup_primitive(s1);
        if (s1.empty()) continue;  // collapsed

        // A nonzero constant certifies an empty solution set.
        bool impossible = false;
        for (const auto& g : s1)
            if (g.total_degree() == 0 && !g.is_zero()) impossible = true;
        if (impossible) { any_determinate = true; continue; }

        // Stage 2: eliminate e2.
        std::vector<MPoly> s2;
        std::vector<MPoly> with_e2;
        for (const auto& g : s1) {
            if (g.degree_in(e2) == 0) s2.push_back(g);
            else with_e2.push_back(g);
        }
        for (std::size_t i = 0; i < with_e2.size(); ++i)
            for (std::size_t j = i + 1; j < with_e2.size(); ++j) {
                auto r = detail::guarded_resultant(with_e2[i], with_e2[j], e2);
                if (r && !r->is_zero()) s2.push_back(*r);
            }
        detail::dedup_primitive(s2);

        std::vector<MPoly> univariates;
        for (const auto& g : s2)
            if (g.degree_in(survivor) > 0) univariates.push_back(g);

        if (univariates.empty()) {
            // Elimination collapsed to bivariates only; try the lattice
            // small-root solver on each survivor of the product shape.
            // Larger survivors are multiples of the same relation dressed in
            // junk factors and only inflate the lattice.
            for (const auto& cand : s1) {
                const MPoly g = cand.pruned();
                if (g.vars().size() != 2) continue;
                if (g.max_individual_degree() > 2 || g.term_count() > 8) continue;
                try {
                    auto prob = smallroots::make_problem(g, bound_of(g.vars()[0]),
                                                         bound_of(g.vars()[1]));
                    if (!smallroots::root_bound_gate(prob)) continue;
                    // Deeper shift sets rescue thin height margins; a usable
                    // vector at any depth already captures every box root.
                    smallroots::BivariateSolution bsol;
                    for (unsigned k = 2; k <= 4 && !bsol.usable_vector; ++k) {
                        smallroots::SolveOptions opt;
                        opt.k_shift = k;
                        bsol = smallroots::solve_bivariate(prob, opt);
                    }
                    if (!bsol.usable_vector) continue;
                    any_determinate = true;
                    for (const auto& [r0, r1] : bsol.roots) {
                        // Recover the remaining coordinate from the originals.
                        for (const auto& f : polys) {
                            MPoly h = f.specialize(g.vars()[0], r0).specialize(g.vars()[1], r1);
                            MPoly hp = h.pruned();
                            if (hp.vars().size() != 1) continue;
                            for (const Int& m :
                                 poly::integer_roots_univariate(hp, bound_of(hp.vars()[0]))) {
                                std::array<Int, 3> full;
                                std::size_t gi0 = var_pos(g.vars()[0]);
                                std::size_t gi1 = var_pos(g.vars()[1]);
                                full[gi0] = r0;
                                full[gi1] = r1;
                                full[3 - gi0 - gi1] = m;
                                emit(full[0], full[1], full[2]);
                            }
                            break;
                        }
                    }
                    if (!sol.roots.empty()) break;
                } catch (const std::domain_error&) {
                    // gate or irreducibility refused this survivor
                }
            }
            if (!sol.roots.empty()) break;
            continue;
        }

        any_determinate = true;
        // Roots of the lowest-degree univariate, then back-substitution.
        std::size_t best = 0;
        for (std::size_t i = 1; i < univariates.size(); ++i)
            if (univariates[i].degree_in(survivor) < univariates[best].degree_in(survivor))
                best = i;
        for (const Int& s_val :
             poly::integer_roots_univariate(univariates[best].pruned(), bound_of(survivor)))
            back_substitute(survivor, s_val);
        if (!sol.roots.empty()) break;
    }

    if (!any_determinate && sol.roots.empty()) sol.dependent = true;
    std::sort(sol.roots.begin(), sol.roots.end());
    return sol;
}

enum class Outcome { factors_found, dependent_polynomials, no_short_vectors, bound_infeasible };

inline std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::factors_found: return "factors_found";
        case Outcome::dependent_polynomials: return "dependent_polynomials";
        case Outcome::no_short_vectors: return "no_short_vectors";
        case Outcome::bound_infeasible: return "bound_infeasible";
    }
    return "unknown";
}

struct AlgoConfig {
    enum class Preset { exact, scaled, explicit_params };
    Preset preset = Preset::scaled;
    std::optional<Int> p0, q0, m0, r0;
    std::optional<Int> X, Y, Z;
    Rat tau = Rat(0);
    Rat beta = Rat(1);
    Rat eps = Rat(1, 100);
    bool use_f3 = true;
    bool use_f4 = true;
    EjmOptions ejm;
};

struct ExperimentRecord {
    Int n, p0, q0, m0, r0;
    Rat tau, beta, eps;
    Int X, Y, Z;
    std::size_t lattice_dim = 0;
    std::vector<Int> norms_squared;
    bool diag_structural_dependence = false;
    bool diag_second_level_zero = false;
    std::optional<bool> cert_f1_vs_f3, cert_f2_vs_f3;
    Outcome outcome = Outcome::bound_infeasible;
    std::optional<Int> p, q;
    std::string solved_via;
    long long wall_ms = 0;

    std::string to_jsonl() const {
        nlohmann::ordered_json j;
        j["n"] = n.get_str();
        j["p0"] = p0.get_str();
        j["q0"] = q0.get_str();
        j["m0"] = m0.get_str();
        j["r0"] = r0.get_str();
        j["tau"] = tau.get_str();
        j["beta"] = beta.get_str();
        j["eps"] = eps.get_str();
        j["lattice_dim"] = lattice_dim;
        nlohmann::ordered_json norms = nlohmann::ordered_json::array();
        for (const auto& v : norms_squared) norms.push_back(v.get_str());
        j["norms"] = norms;
        j["outcome"] = outcome_name(outcome);
        if (p) j["p"] = p->get_str(); else j["p"] = nullptr;
        if (q) j["q"] = q->get_str(); else j["q"] = nullptr;
        j["wall_ms"] = wall_ms;
        return j.dump();
    }
};

namespace detail {

/// floor(c * N^e) with decimal constants, via MPFR at generous precision.
inline Int floor_scaled_power(const Int& N, const char* coeff, const char* exponent) {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(bit_length(N) + 256);
    mpfr_t n, e, c, r;
    mpfr_init2(n, prec);
    mpfr_init2(e, prec);
    mpfr_init2(c, prec);
    mpfr_init2(r, prec);
    mpfr_set_z(n, N.get_mpz_t(), MPFR_RNDN);
    mpfr_set_str(e, exponent, 10, MPFR_RNDN);
    mpfr_set_str(c, coeff, 10, MPFR_RNDN);
    mpfr_pow(r, n, e, MPFR_RNDN);
    mpfr_mul(r, r, c, MPFR_RNDN);
    mpfr_floor(r, r);
    Int out;
    mpfr_get_z(out.get_mpz_t(), r, MPFR_RNDZ);
    mpfr_clears(n, e, c, r, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace detail

/// Stock parameter selection; the decimal constants enter as fractional
/// powers of N.
inline void preset_parameters(const Int& N, AlgoConfig::Preset preset, Int& p0, Int& q0, Int& m0,
                              Int& r0) {
    p0 = 2 * detail::floor_scaled_power(N, "0.492343", "0.378549") + 1;
    q0 = 2 * detail::floor_scaled_power(N, "0.649287", "0.487532") + 1;
    if (preset == AlgoConfig::Preset::exact) {
        m0 = 2 * ((Int(841013799) * N * N) / 1000000) + 1;
    } else {
        m0 = 1682 * N * N + 1;
    }
    r0 = 1;
}

/// The full pipeline: parameter selection, f0 construction, lattice
/// reduction, independence diagnostics, certificates, system solving, and
/// factor verification. Every branch yields a complete record; factors are
/// only reported after p*q = N re-verification.
inline ExperimentRecord run_pipeline(const Int& N, const AlgoConfig& cfg = {}) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.n = N;
    rec.tau = cfg.tau;
    rec.beta = cfg.beta;
    rec.eps = cfg.eps;

    Int p0, q0, m0, r0;
    if (cfg.preset == AlgoConfig::Preset::explicit_params) {
        if (!cfg.p0 || !cfg.q0 || !cfg.m0 || !cfg.r0)
            throw std::domain_error("run_pipeline: explicit preset needs p0,q0,m0,r0");
        p0 = *cfg.p0; q0 = *cfg.q0; m0 = *cfg.m0; r0 = *cfg.r0;
    } else {
        preset_parameters(N, cfg.preset, p0, q0, m0, r0);
        if (cfg.p0) p0 = *cfg.p0;
        if (cfg.q0) q0 = *cfg.q0;
        if (cfg.m0) m0 = *cfg.m0;
        if (cfg.r0) r0 = *cfg.r0;
    }
    rec.p0 = p0; rec.q0 = q0; rec.m0 = m0; rec.r0 = r0;

    Int s = arith::ceil_sqrt(N);
    rec.X = cfg.X ? *cfg.X : s;
    rec.Y = cfg.Y ? *cfg.Y : s;
    rec.Z = cfg.Z ? *cfg.Z : 3 * s;

    auto finish = [&](Outcome o) {
        rec.outcome = o;
        rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return rec;
    };

    TrivariateInstance inst;
    try {
        inst = make_instance(N, p0, q0, m0, r0, rec.X, rec.Y, rec.Z, cfg.tau, cfg.beta, cfg.eps);
    } catch (const std::domain_error&) {
        return finish(Outcome::bound_infeasible);
    }

    auto ejm = ejm_reduce(inst, cfg.ejm);
    rec.lattice_dim = ejm.report.lattice_dim;
    rec.norms_squared = ejm.report.norms_squared;
    if (ejm.report.status == EjmStatus::bound_infeasible)
        return finish(Outcome::bound_infeasible);
    if (ejm.report.status == EjmStatus::no_short_vectors)
        return finish(Outcome::no_short_vectors);

    std::vector<MPoly> system{inst.f0, ejm.f1, ejm.f2};
    auto diag = independence_diagnostics(system);
    rec.diag_structural_dependence = diag.structural_dependence;
    rec.diag_second_level_zero = diag.any_second_level_zero;

    if (cfg.use_f3) {
        Int m1 = m0 + 2;
        Int r1 = r0 + (r0 % 2 == 0 ? 1 : 2);
        auto gcd4 = [&]() {
            Int g;
            mpz_gcd(g.get_mpz_t(), m0.get_mpz_t(), m1.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r0.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r1.get_mpz_t());
            return g;
        };
        int guard = 0;
        while (gcd4() != 1 && guard++ < 64) r1 += 1;
        Int gm;
        mpz_gcd(gm.get_mpz_t(), m1.get_mpz_t(), r1.get_mpz_t());
        if (gcd4() == 1 && gm == 1 && r1 != 0) {
            MPoly f3 = build_f0(N, p0, q0, m1, r1);
            rec.cert_f1_vs_f3 = poly::not_multiple_certificate(ejm.f1, f3);
            rec.cert_f2_vs_f3 = poly::not_multiple_certificate(ejm.f2, f3);
            system.push_back(std::move(f3));
        }
    }
    if (cfg.use_f4) system.push_back(build_f4(p0, q0));

    auto ssol = solve_system(system, rec.X, rec.Y, rec.Z);
    if (ssol.dependent) return finish(Outcome::dependent_polynomials);

    for (const auto& [x0, y0, z0] : ssol.roots) {
        Int pc = p0 + x0, qc = q0 + y0;
        if (pc > 1 && qc > 1 && pc * qc == N) {
            rec.p = std::min(pc, qc);
            rec.q = std::max(pc, qc);
            rec.solved_via = "resultant_elimination";
            return finish(Outcome::factors_found);
        }
    }
    return finish(Outcome::dependent_polynomials);
}

}  // namespace factlab::trivariate
