#ifndef TORICMIRROR_ALGEBRA_HPP
#define TORICMIRROR_ALGEBRA_HPP

#include <toricmirror/multipoly.hpp>
#include <toricmirror/rational.hpp>

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

// Finite-dimensional commutative graded Q-algebra given by a basis and
// structure constants. Basis element 0 is the unit and is the only element of
// degree 0, so every other basis element is nilpotent. Degrees are half the
// cohomological degree.
class Algebra
{
public:
    struct Term {
        std::size_t index;
        Rational coeff;
    };
    using Table = std::vector<std::vector<std::vector<Term>>>;

    Algebra(std::vector<std::string> names, std::vector<int> degrees, Table table)
        : names_(std::move(names)), degrees_(std::move(degrees)), table_(std::move(table))
    {
        check();
    }

    std::size_t dim() const { return names_.size(); }
    const std::string &name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string> &names() const { return names_; }
    int degree(std::size_t i) const { return degrees_.at(i); }
    const std::vector<Term> &product(std::size_t i, std::size_t j) const { return table_[i][j]; }

    int top_degree() const
    {
        int t = 0;
        for (int d : degrees_) t = std::max(t, d);
        return t;
    }

    std::size_t index_of(const std::string &n) const
    {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == n) return i;
        }
        throw input_error("unknown basis element \"" + n + "\"");
    }

    static std::shared_ptr<const Algebra> point()
    {
        return std::make_shared<const Algebra>(std::vector<std::string>{"1"}, std::vector<int>{0},
                                               Table{{{Term{0, 1}}}});
    }

    // Q[h]/h^{m+1}.
    static std::shared_ptr<const Algebra> truncated_polynomial(int m, const std::string &var = "h")
    {
        std::vector<std::string> names;
        std::vector<int> degrees;
        for (int k = 0; k <= m; ++k) {
            names.push_back(k == 0 ? "1" : (k == 1 ? var : var + "^" + std::to_string(k)));
            degrees.push_back(k);
        }
        const auto n = static_cast<std::size_t>(m + 1);
        Table t(n, std::vector<std::vector<Term>>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i + j < n) t[i][j].push_back(Term{i + j, 1});
            }
        }
        return std::make_shared<const Algebra>(std::move(names), std::move(degrees), std::move(t));
    }

    static std::shared_ptr<const Algebra> tensor(const Algebra &a, const Algebra &b)
    {
        std::vector<std::string> names;
        std::vector<int> degrees;
        const std::size_t na = a.dim(), nb = b.dim();
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nb; ++j) {
                if (i == 0) names.push_back(b.name(j));
                else if (j == 0) names.push_back(a.name(i));
                else names.push_back(a.name(i) + "*" + b.name(j));
                degrees.push_back(a.degree(i) + b.degree(j));
            }
        }
        Table t(na * nb, std::vector<std::vector<Term>>(na * nb));
        for (std::size_t i1 = 0; i1 < na; ++i1) {
            for (std::size_t j1 = 0; j1 < nb; ++j1) {
                for (std::size_t i2 = 0; i2 < na; ++i2) {
                    for (std::size_t j2 = 0; j2 < nb; ++j2) {
                        auto &cell = t[i1 * nb + j1][i2 * nb + j2];
                        for (const auto &ta : a.product(i1, i2)) {
                            for (const auto &tb : b.product(j1, j2)) {
                                cell.push_back(Term{ta.index * nb + tb.index, ta.coeff * tb.coeff});
                            }
                        }
                    }
                }
            }
        }
        return std::make_shared<const Algebra>(std::move(names), std::move(degrees), std::move(t));
    }

    // Same algebra with every non-unit basis name suffixed.
    std::shared_ptr<const Algebra> renamed(const std::string &suffix) const
    {
        auto names = names_;
        for (std::size_t i = 1; i < names.size(); ++i) names[i] += suffix;
        return std::make_shared<const Algebra>(std::move(names), degrees_, table_);
    }

private:
    void check() const
    {
        const std::size_t n = names_.size();
        if (n == 0 || degrees_.size() != n || table_.size() != n) throw input_error("algebra: inconsistent sizes");
        if (degrees_[0] != 0) throw input_error("algebra: basis element 0 must be the unit in degree 0");
        for (std::size_t i = 1; i < n; ++i) {
            if (degrees_[i] <= 0) throw input_error("algebra: only the unit may have degree 0");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (table_[i].size() != n) throw input_error("algebra: table row has wrong length");
        }
        auto same = [](std::vector<Term> a, std::vector<Term> b) {
            auto norm = [](std::vector<Term> &v) {
                std::vector<Rational> dense;
                for (const auto &t : v) {
                    if (t.index >= dense.size()) dense.resize(t.index + 1, Rational(0));
                    dense[t.index] += t.coeff;
                }
                while (!dense.empty() && dense.back() == 0) dense.pop_back();
                return dense;
            };
            return norm(a) == norm(b);
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (!same(table_[0][i], {Term{i, 1}})) throw input_error("algebra: basis element 0 is not a unit");
            for (std::size_t j = 0; j < n; ++j) {
                if (!same(table_[i][j], table_[j][i])) throw input_error("algebra: multiplication is not commutative");
                for (const auto &t : table_[i][j]) {
                    if (t.index >= n) throw input_error("algebra: product index out of range");
                    if (t.coeff != 0 && degrees_[t.index] != degrees_[i] + degrees_[j]) {
                        throw input_error("algebra: multiplication is not degree additive");
                    }
                }
            }
        }
        // Associativity spot checks on random triples (all triples when small).
        std::mt19937 rng(12345);
        const std::size_t trials = n <= 12 ? n * n * n : 2000;
        for (std::size_t t = 0; t < trials; ++t) {
            std::size_t a, b, c;
            if (n <= 12) {
                a = t / (n * n);
                b = (t / n) % n;
                c = t % n;
            } else {
                a = rng() % n;
                b = rng() % n;
                c = rng() % n;
            }
            std::vector<Rational> left(n, Rational(0)), right(n, Rational(0));
            for (const auto &x : table_[a][b]) {
                for (const auto &y : table_[x.index][c]) left[y.index] += x.coeff * y.coeff;
            }
            for (const auto &x : table_[b][c]) {
                for (const auto &y : table_[a][x.index]) right[y.index] += x.coeff * y.coeff;
            }
            if (left != right) throw input_error("algebra: multiplication is not associative");
        }
    }

    std::vector<std::string> names_;
    std::vector<int> degrees_;
    Table table_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline bool coeff_is_zero(const Rational &c) { return c == 0; }
inline bool coeff_is_zero(const MultiPoly &c) { return c.is_zero(); }

// Element of an Algebra with coefficients in C (Rational or MultiPoly).
template <class C>
class Element
{
public:
    Element() = default;
    explicit Element(AlgebraPtr alg) : alg_(std::move(alg)), c_(alg_->dim(), C(Rational(0))) {}
    Element(AlgebraPtr alg, std::vector<C> coeffs) : alg_(std::move(alg)), c_(std::move(coeffs))
    {
        if (c_.size() != alg_->dim()) throw internal_error("element has wrong dimension");
    }

    static Element scalar(AlgebraPtr alg, const C &s)
    {
        Element e(std::move(alg));
        e.c_[0] = s;
        return e;
    }
    static Element one(AlgebraPtr alg) { return scalar(std::move(alg), C(Rational(1))); }
    static Element basis(AlgebraPtr alg, std::size_t i, const C &s = C(Rational(1)))
    {
        Element e(std::move(alg));
        e.c_.at(i) = s;
        return e;
    }

    const AlgebraPtr &algebra() const { return alg_; }
    const std::vector<C> &coeffs() const { return c_; }
    const C &coeff(std::size_t i) const { return c_.at(i); }
    C &coeff(std::size_t i) { return c_.at(i); }
    std::size_t dim() const { return c_.size(); }

    const C &scalar_part() const { return c_[0]; }
    Element nilpotent_part() const
    {
        Element e = *this;
        e.c_[0] = C(Rational(0));
        return e;
    }

    bool is_zero() const
    {
        for (const auto &x : c_) {
            if (!coeff_is_zero(x)) return false;
        }
        return true;
    }

    Element &operator+=(const Element &o)
    {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Element &operator-=(const Element &o)
    {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Element &operator*=(const C &s)
    {
        for (auto &x : c_) x *= s;
        return *this;
    }
    friend Element operator+(Element a, const Element &b) { return a += b; }
    friend Element operator-(Element a, const Element &b) { return a -= b; }
    friend Element operator-(Element a)
    {
        for (auto &x : a.c_) x = -x;
        return a;
    }
    friend Element operator*(Element a, const C &s) { return a *= s; }
    friend Element operator*(const C &s, Element a) { return a *= s; }

    friend Element operator*(const Element &a, const Element &b)
    {
        a.same(b);
        Element r(a.alg_);
        const std::size_t n = a.c_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (coeff_is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (coeff_is_zero(b.c_[j])) continue;
                const C ab = a.c_[i] * b.c_[j];
                for (const auto &t : a.alg_->product(i, j)) r.c_[t.index] += ab * C(t.coeff);
            }
        }
        return r;
    }
    Element &operator*=(const Element &o) { return *this = *this * o; }

    friend bool operator==(const Element &a, const Element &b) { return a.alg_ == b.alg_ && a.c_ == b.c_; }
    friend bool operator!=(const Element &a, const Element &b) { return !(a == b); }

    Element pow(unsigned e) const
    {
        Element r = one(alg_);
        for (unsigned k = 0; k < e; ++k) r *= *this;
        return r;
    }

    std::string str(const std::vector<std::string> &var_names = {}) const
    {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (coeff_is_zero(c_[i])) continue;
            if (!out.empty()) out += " + ";
            std::string cs;
            if constexpr (std::is_same_v<C, Rational>) cs = c_[i].get_str();
            else cs = "(" + c_[i].str(var_names) + ")";
            out += i == 0 ? cs : cs + "*" + alg_->name(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    void same(const Element &o) const
    {
        if (alg_ != o.alg_) throw internal_error("elements of different algebras combined");
    }

    AlgebraPtr alg_;
    std::vector<C> c_;
};

using Elem = Element<Rational>;
using PolyElem = Element<MultiPoly>;

// Inverse of s + n with s a nonzero rational and n nilpotent: s^{-1} sum (-n/s)^j.
inline Elem inverse(const Elem &x)
{
    const Rational s = x.scalar_part();
    if (s == 0) throw pole_collision_error("inverting an element with zero scalar part");
    const Elem n = x.nilpotent_part() * Rational(-1 / s);
    Elem term = Elem::one(x.algebra()) * Rational(1 / s);
    Elem acc = term;
    for (int j = 0; j <= x.algebra()->top_degree(); ++j) {
        term = term * n;
        if (term.is_zero()) break;
        acc += term;
    }
    return acc;
}

// Embed a rational element into polynomial coefficients.
inline PolyElem to_poly(const Elem &x)
{
    std::vector<MultiPoly> c;
    for (const auto &q : x.coeffs()) c.emplace_back(q);
    return PolyElem(x.algebra(), std::move(c));
}

// Base ring: an algebra plus the degree-1 basis elements dual to the chosen
// basis of curve classes (Novikov coordinates).
struct BaseRing {
    AlgebraPtr algebra;
    std::vector<std::size_t> curve_duals;
    std::string description;

    std::size_t novikov_rank() const { return curve_duals.size(); }

    // Pairing of a degree-1 class with a curve class d.
    long pairing(const Elem &c, const std::vector<long> &d) const
    {
        Rational s = 0;
        for (std::size_t j = 0; j < curve_duals.size(); ++j) s += c.coeff(curve_duals[j]) * d.at(j);
        if (s.get_den() != 1) throw precondition_error("pairing of a class with a curve is not integral");
        return s.get_num().get_si();
    }
};

inline BaseRing base_point()
{
    return BaseRing{Algebra::point(), {}, "point"};
}

inline BaseRing base_projective(int m)
{
    if (m < 0) throw input_error("projective base needs m >= 0");
    if (m == 0) return BaseRing{Algebra::point(), {}, "point"};
    return BaseRing{Algebra::truncated_polynomial(m), {1}, "P^" + std::to_string(m)};
}

inline BaseRing base_product(const BaseRing &a, const BaseRing &b)
{
    BaseRing r;
    r.algebra = Algebra::tensor(*a.algebra->renamed("_1"), *b.algebra->renamed("_2"));
    const std::size_t nb = b.algebra->dim();
    for (std::size_t i : a.curve_duals) r.curve_duals.push_back(i * nb);
    for (std::size_t j : b.curve_duals) r.curve_duals.push_back(j);
    r.description = a.description + " x " + b.description;
    return r;
}

} // namespace toricmirror

#endif
