#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "factlab/arith.hpp"

namespace factlab::poly {

using ExpVec = std::vector<unsigned>;

/// Graded lexicographic order on exponent vectors of equal arity.
struct GrlexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        unsigned long ta = 0, tb = 0;
        for (unsigned e : a) ta += e;
        for (unsigned e : b) tb += e;
        if (ta != tb) return ta < tb;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Sparse multivariate polynomial over Z. Variables are kept as a sorted
/// name list; no zero coefficients are stored.
class MPoly {
  public:
    using TermMap = std::map<ExpVec, Int, GrlexLess>;

    MPoly() = default;

    explicit MPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {
        check_vars(vars_);
    }

    static MPoly constant(const Int& c) {
        MPoly f;
        if (c != 0) f.terms_[ExpVec{}] = c;
        return f;
    }

    static MPoly monomial(std::vector<std::string> vars, ExpVec exps, const Int& c) {
        MPoly f(std::move(vars));
        if (exps.size() != f.vars_.size())
            throw std::domain_error("MPoly::monomial: exponent arity mismatch");
        if (c != 0) f.terms_[std::move(exps)] = c;
        return f;
    }

    static MPoly variable(const std::string& name) {
        return monomial({name}, {1}, 1);
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Int coeff(const ExpVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Int(0) : it->second;
    }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return static_cast<int>(i);
        return -1;
    }

    unsigned degree_in(const std::string& var) const {
        int idx = var_index(var);
        if (idx < 0) return 0;
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[idx]);
        return d;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned t = 0;
            for (unsigned x : e) t += x;
            d = std::max(d, t);
        }
        return d;
    }

    /// Max degree in any single variable.
    unsigned max_individual_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            for (unsigned x : e) d = std::max(d, x);
        return d;
    }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) { return combined(a, b, +1); }
    friend MPoly operator-(const MPoly& a, const MPoly& b) { return combined(a, b, -1); }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        auto [fa, fb] = embed_pair(a, b);
        MPoly r(fa.vars_);
        for (const auto& [ea, ca] : fa.terms_) {
            for (const auto& [eb, cb] : fb.terms_) {
                ExpVec e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend MPoly operator*(const MPoly& a, const Int& c) {
        MPoly r(a.vars_);
        if (c == 0) return r;
        for (const auto& [e, coef] : a.terms_) r.terms_[e] = coef * c;
        return r;
    }
    friend MPoly operator*(const Int& c, const MPoly& a) { return a * c; }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    /// Exact value at an integer point; arity must match the variable list.
    Int evaluate(const std::vector<Int>& point) const {
        if (point.size() != vars_.size())
            throw std::domain_error("MPoly::evaluate: arity mismatch");
        Int total = 0;
        for (const auto& [e, c] : terms_) {
            Int t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t *= arith::pow_int(point[i], e[i]);
            total += t;
        }
        return total;
    }

    /// Substitutes an integer for one variable; the result drops that variable.
    MPoly specialize(const std::string& var, const Int& value) const {
        int idx = var_index(var);
        if (idx < 0) return *this;
        std::vector<std::string> rest = vars_;
        rest.erase(rest.begin() + idx);
        MPoly r(rest);
        for (const auto& [e, c] : terms_) {
            ExpVec re = e;
            re.erase(re.begin() + idx);
            r.add_term(re, c * arith::pow_int(value, e[static_cast<std::size_t>(idx)]));
        }
        return r;
    }

    /// Coefficient of var^k as a polynomial in the remaining variables.
    MPoly coeff_in(const std::string& var, unsigned k) const {
        int idx = var_index(var);
        std::vector<std::string> rest = vars_;
        if (idx >= 0) rest.erase(rest.begin() + idx);
        MPoly r(rest);
        for (const auto& [e, c] : terms_) {
            if (idx >= 0) {
                if (e[static_cast<std::size_t>(idx)] != k) continue;
                ExpVec re = e;
                re.erase(re.begin() + idx);
                r.add_term(re, c);
            } else if (k == 0) {
                r.add_term(e, c);
            }
        }
        return r;
    }

    /// Gcd of all coefficients (nonnegative; 0 for the zero polynomial).
    Int content() const {
        Int g = 0;
        for (const auto& [e, c] : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    /// Divides out the content and normalizes the grlex-leading coefficient positive.
    MPoly primitive_part() const {
        if (is_zero()) return *this;
        Int g = content();
        if (terms_.rbegin()->second < 0) g = -g;
        MPoly r(vars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = c / g;
        return r;
    }

    /// Embeds into a superset variable list (names must be sorted, unique).
    MPoly embedded(const std::vector<std::string>& new_vars) const {
        check_vars(new_vars);
        std::vector<int> pos(vars_.size(), -1);
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
            if (it == new_vars.end())
                throw std::domain_error("MPoly::embedded: missing variable " + vars_[i]);
            pos[i] = static_cast<int>(it - new_vars.begin());
        }
        MPoly r(new_vars);
        for (const auto& [e, c] : terms_) {
            ExpVec ne(new_vars.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) ne[static_cast<std::size_t>(pos[i])] = e[i];
            r.terms_[std::move(ne)] = c;
        }
        return r;
    }

    /// Drops variables that no longer occur.
    MPoly pruned() const {
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) used[i] = true;
        std::vector<std::string> kept;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) kept.push_back(vars_[i]);
        if (kept.size() == vars_.size()) return *this;
        MPoly r(kept);
        for (const auto& [e, c] : terms_) {
            ExpVec ne;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (used[i]) ne.push_back(e[i]);
            r.terms_[std::move(ne)] = c;
        }
        return r;
    }

    void add_term(const ExpVec& e, const Int& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!first) out << (c > 0 ? " + " : " - ");
            else if (c < 0) out << "-";
            first = false;
            Int a = abs(c);
            bool has_var = false;
            for (unsigned x : e) has_var |= (x > 0);
            if (a != 1 || !has_var) out << a.get_str();
            bool star = (a != 1);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (star) out << "*";
                out << vars_[i];
                if (e[i] > 1) out << "^" << e[i];
                star = true;
            }
        }
        return out.str();
    }

    static std::vector<std::string> merged_vars(const MPoly& a, const MPoly& b) {
        std::vector<std::string> u = a.vars_;
        u.insert(u.end(), b.vars_.begin(), b.vars_.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u;
    }

    static std::pair<MPoly, MPoly> embed_pair(const MPoly& a, const MPoly& b) {
        if (a.vars_ == b.vars_) return {a, b};
        auto u = merged_vars(a, b);
        return {a.embedded(u), b.embedded(u)};
    }

  private:
    static void check_vars(const std::vector<std::string>& v) {
        if (!std::is_sorted(v.begin(), v.end()))
            throw std::domain_error("MPoly: variable names must be sorted");
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw std::domain_error("MPoly: duplicate variable name");
    }

    static MPoly combined(const MPoly& a, const MPoly& b, int sign) {
        auto [fa, fb] = embed_pair(a, b);
        MPoly r = fa;
        for (const auto& [e, c] : fb.terms_) r.add_term(e, sign > 0 ? c : Int(-c));
        return r;
    }

    std::vector<std::string> vars_;
    TermMap terms_;
};

struct Norms {
    Int l2_squared;
    Int sup;
};

/// Euclidean norm squared and supremum norm of the coefficient vector.
inline Norms norms(const MPoly& f) {
    Norms n{0, 0};
    for (const auto& [e, c] : f.terms()) {
        n.l2_squared += c * c;
        Int a = abs(c);
        if (a > n.sup) n.sup = a;
    }
    return n;
}

/// Height: max over terms of |coeff| * prod bound^exponent. One bound per
/// declared variable, all >= 1.
inline Int height(const MPoly& f, const std::vector<Int>& bounds) {
    if (bounds.size() != f.vars().size())
        throw std::domain_error("height: bound arity mismatch");
    for (const auto& b : bounds)
        if (b < 1) throw std::domain_error("height: bounds must be >= 1");
    Int best = 0;
    for (const auto& [e, c] : f.terms()) {
        Int t = abs(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t *= arith::pow_int(bounds[i], e[i]);
        if (t > best) best = t;
    }
    return best;
}

/// Scales each variable by its bound: f(xX, yY, ...).
inline MPoly scale_vars(const MPoly& f, const std::vector<Int>& bounds) {
    if (bounds.size() != f.vars().size())
        throw std::domain_error("scale_vars: bound arity mismatch");
    MPoly r(f.vars());
    for (const auto& [e, c] : f.terms()) {
        Int t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t *= arith::pow_int(bounds[i], e[i]);
        r.add_term(e, t);
    }
    return r;
}

/// Exact division; throws std::domain_error when g does not divide f.
inline MPoly divexact(const MPoly& f, const MPoly& g) {
    if (g.is_zero()) throw std::domain_error("divexact: division by zero polynomial");
    auto [a, b] = MPoly::embed_pair(f, g);
    MPoly q(a.vars());
    MPoly r = a;
    const auto& glead = *b.terms().rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms().rbegin();
        ExpVec e(rlead.first.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (rlead.first[i] < glead.first[i])
                throw std::domain_error("divexact: not divisible");
            e[i] = rlead.first[i] - glead.first[i];
        }
        Int c = rlead.second / glead.second;
        if (c * glead.second != rlead.second)
            throw std::domain_error("divexact: not divisible");
        MPoly t = MPoly::monomial(q.vars(), e, c);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

/// True iff g = h * f for some integer polynomial h.
inline bool is_multiple_of(const MPoly& g, const MPoly& f) {
    if (f.is_zero()) return g.is_zero();
    if (g.is_zero()) return true;
    try {
        divexact(g, f);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

namespace detail {

/// Fraction-free Bareiss determinant of a square MPoly matrix (destructive).
inline MPoly bareiss_det(std::vector<std::vector<MPoly>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return MPoly::constant(1);
    int sign = 1;
    MPoly prev = MPoly::constant(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero()) ++piv;
            if (piv == n) return MPoly();  // singular
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = divexact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
            }
            m[i][k] = MPoly();
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace detail

/// Resultant with respect to `var`: determinant of the Sylvester matrix,
/// rows of f-coefficients first. When one argument is constant in `var`
/// with degree-d partner, returns constant^d; both constant is an error.
inline MPoly resultant(const MPoly& f, const MPoly& g, const std::string& var) {
    auto [a, b] = MPoly::embed_pair(f, g);
    const unsigned m = a.degree_in(var);
    const unsigned l = b.degree_in(var);
    if (m == 0 && l == 0)
        throw std::domain_error("resultant: both arguments constant in " + var);
    if (m == 0) {
        MPoly r = MPoly::constant(1);
        MPoly base = a.coeff_in(var, 0);
        for (unsigned i = 0; i < l; ++i) r = r * base;
        return r.pruned();
    }
    if (l == 0) {
        MPoly r = MPoly::constant(1);
        MPoly base = b.coeff_in(var, 0);
        for (unsigned i = 0; i < m; ++i) r = r * base;
        return r.pruned();
    }

    std::vector<MPoly> fc(m + 1), gc(l + 1);
    for (unsigned i = 0; i <= m; ++i) fc[i] = a.coeff_in(var, m - i);   // descending
    for (unsigned i = 0; i <= l; ++i) gc[i] = b.coeff_in(var, l - i);

    // Second argument's coefficient rows on top: this orientation reproduces
    // the substitution value for linear eliminants of any partner degree.
    const std::size_t n = m + l;
    std::vector<std::vector<MPoly>> s(n, std::vector<MPoly>(n));
    for (unsigned r = 0; r < m; ++r)
        for (unsigned c = 0; c <= l; ++c) s[r][r + c] = gc[c];
    for (unsigned r = 0; r < l; ++r)
        for (unsigned c = 0; c <= m; ++c) s[m + r][r + c] = fc[c];
    return detail::bareiss_det(s).pruned();
}

/// Norm-gap certificate: true certifies that g is NOT a multiple of f,
/// via ||g||_2 < 2^-((d+1)^(n+1)) * ||f||_inf with d the max single-variable
/// degree across both and n the number of variables. False means "no
/// certificate", not "is a multiple".
inline bool not_multiple_certificate(const MPoly& g, const MPoly& f) {
    if (f.is_zero() || g.is_zero())
        throw std::domain_error("not_multiple_certificate: zero polynomial");
    auto [a, b] = MPoly::embed_pair(g, f);
    unsigned long d = std::max(a.max_individual_degree(), b.max_individual_degree());
    unsigned long nv = a.vars().size();
    // shift = (d+1)^(n+1)
    Int shift_i = arith::pow_int(Int(d + 1), nv + 1);
    if (!shift_i.fits_ulong_p())
        throw std::domain_error("not_multiple_certificate: degree too large");
    unsigned long shift = shift_i.get_ui();
    // ||g||_2^2 * 2^(2*shift) < ||f||_inf^2
    Int lhs = norms(a).l2_squared;
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), 2 * shift);
    Int sup = norms(b).sup;
    return lhs < sup * sup;
}

/// Reducibility test for f = a*xy + b*x + c*y + e over Q: reducible iff
/// a*e = b*c. Non-bilinear shapes are accepted when content-primitive.
inline bool bilinear_irreducible(const MPoly& f) {
    if (f.is_zero() || f.total_degree() == 0) return false;
    if (f.content() != 1) return false;
    if (f.vars().size() == 2 && f.max_individual_degree() <= 1) {
        Int a = f.coeff({1, 1});
        Int b = f.coeff({1, 0});
        Int c = f.coeff({0, 1});
        Int e = f.coeff({0, 0});
        if (a == 0) return true;  // linear
        return a * e != b * c;
    }
    return true;
}

// --- text format -----------------------------------------------------------
//
// Header "vars: <names>"; then one term per line, "coeff e1 e2 ... ek"
// in descending graded-lex order. Round-trips bit-exactly.

inline void write_poly(std::ostream& out, const MPoly& f) {
    out << "vars:";
    for (const auto& v : f.vars()) out << " " << v;
    out << "\n";
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        out << it->second.get_str();
        for (unsigned e : it->first) out << " " << e;
        out << "\n";
    }
}

inline MPoly read_poly(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("poly: missing header");
    std::istringstream hdr(line);
    std::string tag;
    hdr >> tag;
    if (tag != "vars:") throw std::runtime_error("poly: bad header: " + line);
    std::vector<std::string> vars;
    std::string name;
    while (hdr >> name) vars.push_back(name);
    MPoly f{vars};
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::istringstream ls(line);
        std::string coeff;
        ls >> coeff;
        ExpVec e(vars.size());
        for (auto& x : e)
            if (!(ls >> x)) throw std::runtime_error("poly: bad term line: " + line);
        f.add_term(e, parse_int(coeff));
    }
    return f;
}

inline std::string poly_to_text(const MPoly& f) {
    std::ostringstream s;
    write_poly(s, f);
    return s.str();
}

inline MPoly poly_from_text(const std::string& text) {
    std::istringstream s(text);
    return read_poly(s);
}

}  // namespace factlab::poly
