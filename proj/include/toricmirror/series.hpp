#ifndef TORICMIRROR_SERIES_HPP
#define TORICMIRROR_SERIES_HPP

#include <toricmirror/algebra.hpp>
#include <toricmirror/toric_data.hpp>

#include <json.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

// Polynomials in z with coefficients in a ring algebra, ascending powers.
using ZPoly = std::vector<Elem>;

namespace zpoly
{

inline void trim(ZPoly &p)
{
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline ZPoly add(const ZPoly &a, const ZPoly &b)
{
    ZPoly r = a.size() >= b.size() ? a : b;
    const ZPoly &s = a.size() >= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i) r[i] += s[i];
    trim(r);
    return r;
}

inline ZPoly scale(ZPoly p, const Elem &c)
{
    for (auto &x : p) x = x * c;
    trim(p);
    return p;
}

inline ZPoly scale(ZPoly p, const Rational &c)
{
    for (auto &x : p) x *= c;
    trim(p);
    return p;
}

inline ZPoly mul(const ZPoly &a, const ZPoly &b)
{
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Elem(a[0].algebra()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

// Multiply by (z - a).
inline ZPoly mul_linear(const ZPoly &p, const Rational &a)
{
    if (p.empty()) return {};
    ZPoly r(p.size() + 1, Elem(p[0].algebra()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + 1] += p[i];
        r[i] -= p[i] * a;
    }
    trim(r);
    return r;
}

// p = (z - a) q + rem.
inline std::pair<ZPoly, Elem> div_linear(const ZPoly &p, const Rational &a, const AlgebraPtr &alg)
{
    if (p.empty()) return {{}, Elem(alg)};
    ZPoly q(p.size() - 1, Elem(alg));
    Elem carry(alg);
    for (std::size_t i = p.size(); i-- > 0;) {
        Elem cur = p[i] + carry * a;
        if (i == 0) return {q, cur};
        q[i - 1] = cur;
        carry = cur;
    }
    return {q, carry};
}

inline Elem evaluate(const ZPoly &p, const Elem &v, const AlgebraPtr &alg)
{
    Elem acc(alg);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * v + p[i];
    return acc;
}

// Coefficients of p(a + t) in t.
inline ZPoly taylor_shift(const ZPoly &p, const Rational &a)
{
    ZPoly r = p;
    const std::size_t n = r.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) r[i - 1] += r[i] * a;
    }
    return r;
}

} // namespace zpoly

// P(z) / prod_s (z - a_s)^{m_s} with P over a ring algebra and rational a_s.
// Poles at z = 0 are ordinary factors with a_s = 0. Kept reduced: no (z - a)
// divides P when a is a pole, which makes the representation canonical.
class ZRational
{
public:
    using Poles = std::map<Rational, int>;

    ZRational() = default;
    explicit ZRational(AlgebraPtr alg) : alg_(std::move(alg)) {}
    ZRational(AlgebraPtr alg, ZPoly num, Poles poles) : alg_(std::move(alg)), num_(std::move(num)), poles_(std::move(poles))
    {
        normalize();
    }

    static ZRational constant(const Elem &c) { return ZRational(c.algebra(), ZPoly{c}, {}); }
    static ZRational one(const AlgebraPtr &alg) { return constant(Elem::one(alg)); }

    // z^e for any integer e.
    static ZRational z_power(const AlgebraPtr &alg, int e)
    {
        if (e >= 0) {
            ZPoly p(static_cast<std::size_t>(e) + 1, Elem(alg));
            p.back() = Elem::one(alg);
            return ZRational(alg, std::move(p), {});
        }
        return ZRational(alg, ZPoly{Elem::one(alg)}, Poles{{Rational(0), -e}});
    }

    // c0 + c1 z.
    static ZRational linear(const Elem &c0, const Elem &c1) { return ZRational(c0.algebra(), ZPoly{c0, c1}, {}); }

    // 1 / (k z + c) with c = s + n, s rational, n nilpotent:
    // sum_j (-n)^j / (k z + s)^{j+1}.
    static ZRational inverse_linear(const Rational &k, const Elem &c)
    {
        if (k == 0) throw internal_error("inverse_linear needs k != 0");
        const AlgebraPtr &alg = c.algebra();
        const Rational root = -c.scalar_part() / k;
        const Elem n = c.nilpotent_part();
        ZRational acc(alg);
        Elem np = Elem::one(alg);
        Rational kp = 1 / k;
        for (int j = 0; j <= alg->top_degree(); ++j) {
            if (np.is_zero()) break;
            acc += ZRational(alg, ZPoly{np * kp}, Poles{{root, j + 1}});
            np = np * (-n);
            kp /= k;
        }
        return acc;
    }

    const AlgebraPtr &algebra() const { return alg_; }
    const ZPoly &numerator() const { return num_; }
    const Poles &poles() const { return poles_; }
    bool is_zero() const { return num_.empty(); }
    bool is_polynomial() const { return poles_.empty(); }

    ZRational &operator+=(const ZRational &o)
    {
        same(o);
        Poles d = poles_;
        for (const auto &[a, m] : o.poles_) d[a] = std::max(d[a], m);
        ZPoly x = num_, y = o.num_;
        for (const auto &[a, m] : d) {
            for (int t = pole_order(a); t < m; ++t) x = zpoly::mul_linear(x, a);
            for (int t = o.pole_order(a); t < m; ++t) y = zpoly::mul_linear(y, a);
        }
        num_ = zpoly::add(x, y);
        poles_ = std::move(d);
        normalize();
        return *this;
    }
    ZRational &operator-=(const ZRational &o) { return *this += -o; }
    friend ZRational operator+(ZRational a, const ZRational &b) { return a += b; }
    friend ZRational operator-(ZRational a, const ZRational &b) { return a -= b; }
    friend ZRational operator-(ZRational a)
    {
        for (auto &x : a.num_) x = -x;
        return a;
    }
    friend ZRational operator*(const ZRational &a, const ZRational &b)
    {
        a.same(b);
        Poles d = a.poles_;
        for (const auto &[p, m] : b.poles_) d[p] += m;
        return ZRational(a.alg_, zpoly::mul(a.num_, b.num_), std::move(d));
    }
    ZRational &operator*=(const ZRational &o) { return *this = *this * o; }
    friend ZRational operator*(ZRational a, const Elem &c)
    {
        a.num_ = zpoly::scale(std::move(a.num_), c);
        a.normalize();
        return a;
    }
    friend ZRational operator*(ZRational a, const Rational &c)
    {
        a.num_ = zpoly::scale(std::move(a.num_), c);
        a.normalize();
        return a;
    }
    friend bool operator==(const ZRational &a, const ZRational &b)
    {
        return a.alg_ == b.alg_ && a.num_ == b.num_ && a.poles_ == b.poles_;
    }
    friend bool operator!=(const ZRational &a, const ZRational &b) { return !(a == b); }

    ZRational pow(unsigned e) const
    {
        ZRational r = one(alg_);
        for (unsigned k = 0; k < e; ++k) r *= *this;
        return r;
    }

    // Apply a module map to every numerator coefficient (pullback, pushforward, projection).
    ZRational map(const AlgebraPtr &target, const std::function<Elem(const Elem &)> &f) const
    {
        ZPoly p;
        for (const auto &x : num_) p.push_back(f(x));
        return ZRational(target, std::move(p), poles_);
    }

    // Basis component k as a rational function over Q (the point algebra).
    ZRational component(std::size_t k, const AlgebraPtr &point) const
    {
        return map(point, [&](const Elem &x) { return Elem::one(point) * x.coeff(k); });
    }

    // Substitute z by a ring element v = s + n (n nilpotent). The inverse of
    // (v - a) is a finite geometric series; s = a is a pole collision.
    Elem evaluate(const Elem &v) const
    {
        if (v.algebra() != alg_) throw internal_error("evaluate: value is in another ring");
        Elem acc = zpoly::evaluate(num_, v, alg_);
        for (const auto &[a, m] : poles_) {
            if (v.scalar_part() == a) {
                throw pole_collision_error("substituting z = " + v.str() + " hits the pole factor (z - (" + a.get_str() + "))");
            }
            const Elem inv = inverse(v - Elem::one(alg_) * a);
            for (int t = 0; t < m; ++t) acc = acc * inv;
        }
        return acc;
    }

    // Principal part at z = a: sum_{j=1}^{m} c_j / (z - a)^j.
    ZRational principal_part(const Rational &a) const
    {
        const auto it = poles_.find(a);
        if (it == poles_.end()) return ZRational(alg_);
        const auto coeffs = laurent_at(a);
        const std::size_t m = static_cast<std::size_t>(it->second);
        // Numerator sum_i g_i (z - a)^i over (z - a)^m.
        ZPoly num;
        ZPoly basis{Elem::one(alg_)};
        for (std::size_t i = 0; i < m; ++i) {
            num = zpoly::add(num, zpoly::scale(basis, coeffs[i]));
            basis = zpoly::mul_linear(basis, a);
        }
        return ZRational(alg_, std::move(num), Poles{{a, static_cast<int>(m)}});
    }

    struct PartialFractions {
        ZPoly polynomial;
        // principal[a][j - 1] is the coefficient of (z - a)^{-j}.
        std::map<Rational, std::vector<Elem>> principal;
    };

    // Exact decomposition; the reassembly is asserted.
    PartialFractions partial_fractions() const
    {
        PartialFractions out;
        ZRational rest = *this;
        for (const auto &[a, m] : poles_) {
            const auto g = laurent_at(a);
            std::vector<Elem> c;
            for (int j = 1; j <= m; ++j) c.push_back(g[static_cast<std::size_t>(m - j)]);
            out.principal[a] = c;
            rest -= principal_part(a);
        }
        if (!rest.is_polynomial()) throw internal_error("partial fractions: remainder still has poles");
        out.polynomial = rest.num_;
        if (reassemble(alg_, out) != *this) throw internal_error("partial fractions do not reassemble to the input");
        return out;
    }

    static ZRational reassemble(const AlgebraPtr &alg, const PartialFractions &pf)
    {
        ZRational r(alg, pf.polynomial, {});
        for (const auto &[a, c] : pf.principal) {
            for (std::size_t j = 0; j < c.size(); ++j) r += ZRational(alg, ZPoly{c[j]}, Poles{{a, static_cast<int>(j + 1)}});
        }
        return r;
    }

    // Laurent-style rendering, e.g. "(1/2 + h*z) / ((z - 3)^2 * z)".
    std::string str() const
    {
        if (num_.empty()) return "0";
        std::string n;
        for (std::size_t i = 0; i < num_.size(); ++i) {
            if (num_[i].is_zero()) continue;
            if (!n.empty()) n += " + ";
            std::string c = num_[i].str();
            if (c.rfind("1*", 0) == 0 && c.find(" + ") == std::string::npos) c = c.substr(2);
            if (c.find(" + ") != std::string::npos && i > 0) c = "(" + c + ")";
            n += i == 0 ? c : (c == "1" ? "" : c + "*") + (i == 1 ? std::string("z") : "z^" + std::to_string(i));
        }
        if (poles_.empty()) return n;
        std::string d;
        for (auto it = poles_.rbegin(); it != poles_.rend(); ++it) {
            if (!d.empty()) d += " * ";
            const Rational &a = it->first;
            std::string f = a == 0 ? "z" : (a > 0 ? "(z - " + a.get_str() + ")" : "(z + " + Rational(-a).get_str() + ")");
            if (it->second > 1) f += "^" + std::to_string(it->second);
            d += f;
        }
        return "(" + n + ") / (" + d + ")";
    }

private:
    int pole_order(const Rational &a) const
    {
        const auto it = poles_.find(a);
        return it == poles_.end() ? 0 : it->second;
    }

    void same(const ZRational &o) const
    {
        if (alg_ != o.alg_) throw internal_error("z-rational functions over different rings combined");
    }

    void normalize()
    {
        zpoly::trim(num_);
        if (num_.empty()) {
            poles_.clear();
            return;
        }
        for (auto it = poles_.begin(); it != poles_.end();) {
            while (it->second > 0) {
                auto [q, rem] = zpoly::div_linear(num_, it->first, alg_);
                if (!rem.is_zero()) break;
                num_ = std::move(q);
                --it->second;
            }
            it = it->second == 0 ? poles_.erase(it) : std::next(it);
        }
        for (const auto &[a, m] : poles_) {
            if (m < 0) throw internal_error("negative pole order");
        }
    }

    // Taylor coefficients g_0..g_{m-1} at t = z - a of (z - a)^m f(z), m the pole order at a.
    std::vector<Elem> laurent_at(const Rational &a) const
    {
        const std::size_t m = static_cast<std::size_t>(pole_order(a));
        ZPoly p = zpoly::taylor_shift(num_, a);
        p.resize(std::max(p.size(), m), Elem(alg_));
        p.resize(m, Elem(alg_));
        // Series of prod_{b != a} ((a - b) + t)^{-m_b} truncated at t^m.
        std::vector<Rational> s(m, Rational(0));
        if (m > 0) s[0] = 1;
        for (const auto &[b, mb] : poles_) {
            if (b == a) continue;
            const Rational d = a - b;
            std::vector<Rational> inv(m);
            Rational pw = 1 / d;
            for (std::size_t j = 0; j < m; ++j) {
                inv[j] = (j % 2 == 0) ? pw : Rational(-pw);
                pw /= d;
            }
            for (int rep = 0; rep < mb; ++rep) {
                std::vector<Rational> t(m, Rational(0));
                for (std::size_t i = 0; i < m; ++i) {
                    if (s[i] == 0) continue;
                    for (std::size_t j = 0; i + j < m; ++j) t[i + j] += s[i] * inv[j];
                }
                s = std::move(t);
            }
        }
        std::vector<Elem> g(m, Elem(alg_));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; i + j < m; ++j) {
                if (s[j] != 0) g[i + j] += p[i] * s[j];
            }
        }
        return g;
    }

    AlgebraPtr alg_;
    ZPoly num_;
    Poles poles_;
};

// 1 / P(z) where the scalar part of P factors as lead * prod (z - a)^m over Q
// and the rest N = P - scalar(P) is nilpotent: sum_j (-N)^j / S^{j+1}.
inline ZRational invert_with_scalar_roots(const ZPoly &p, const Rational &lead, const ZRational::Poles &roots,
                                          const AlgebraPtr &alg)
{
    if (lead == 0) throw pole_collision_error("inverting a polynomial whose scalar part vanishes identically");
    ZPoly s{Elem::one(alg) * lead};
    for (const auto &[a, m] : roots) {
        for (int t = 0; t < m; ++t) s = zpoly::mul_linear(s, a);
    }
    ZPoly scalar_of_p;
    for (const auto &x : p) scalar_of_p.push_back(Elem::one(alg) * x.scalar_part());
    zpoly::trim(scalar_of_p);
    if (scalar_of_p != s) throw internal_error("invert_with_scalar_roots: scalar part does not match the given roots");
    ZPoly n = zpoly::add(p, zpoly::scale(s, Rational(-1)));
    const ZRational inv_s(alg, ZPoly{Elem::one(alg) * Rational(1 / lead)}, roots);
    const ZRational minus_n_over_s = ZRational(alg, zpoly::scale(n, Rational(-1)), {}) * inv_s;
    ZRational acc = inv_s, term = inv_s;
    for (int j = 0; j <= alg->top_degree() + 1; ++j) {
        term = term * minus_n_over_s;
        if (term.is_zero()) return acc;
        acc += term;
    }
    throw internal_error("invert_with_scalar_roots: nilpotent part did not vanish");
}

// Novikov index: base curve class, fiber class ell, and t-jet (0 = t-free part,
// j = coefficient of t_j).
struct SeriesKey {
    std::vector<long> d;
    IntVec ell;
    int jet = 0;

    auto operator<=>(const SeriesKey &) const = default;
};

inline std::string format_key(const SeriesKey &k)
{
    std::string s = "(d=" + format_vector(k.d) + ", l=" + format_vector(k.ell);
    if (k.jet) s += ", t" + std::to_string(k.jet);
    return s + ")";
}

// Truncated series at a fixed point: class -> coefficient.
struct NovikovSeries {
    std::size_t alpha = 0;
    AlgebraPtr algebra;
    std::map<SeriesKey, ZRational> terms;

    ZRational coefficient(const SeriesKey &k) const
    {
        const auto it = terms.find(k);
        return it == terms.end() ? ZRational(algebra) : it->second;
    }

    void add(const SeriesKey &k, const ZRational &f)
    {
        if (f.is_zero()) return;
        auto [it, inserted] = terms.try_emplace(k, f);
        if (!inserted) {
            it->second += f;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    friend bool operator==(const NovikovSeries &a, const NovikovSeries &b) { return a.terms == b.terms; }
};

inline NovikovSeries operator+(NovikovSeries a, const NovikovSeries &b)
{
    for (const auto &[k, f] : b.terms) a.add(k, f);
    return a;
}

inline NovikovSeries prin_at(const NovikovSeries &f, const Rational &a)
{
    NovikovSeries out{f.alpha, f.algebra, {}};
    for (const auto &[k, c] : f.terms) out.add(k, c.principal_part(a));
    return out;
}

// Assignment lambda_i -> rational, with the genericity certificate below.
struct Specialization {
    std::vector<Rational> lambda;
    std::uint64_t seed = 0;
    int k_max = 1;
};

// Checks that every pole and evaluation point used by C1/C2 up to k_max is
// separated. Returns a description of the first degeneracy, or nothing.
//  - per alpha, the values w_i(alpha)/c (i not in alpha, 1 <= c <= k_max) are
//    nonzero and pairwise distinct; these are the Euler-class weights and,
//    for i = i_ab, the candidate poles -lambda_ab/c;
//  - -lambda_ab/k is not a pole -w_i(beta)/c of the beta-restriction;
//  - the scalar parts of the factors of C_ab(k)^{-1} are nonzero.
inline std::optional<std::string> certify(const Atlas &atlas, const std::vector<Rational> &lambda, int k_max)
{
    const auto &data = atlas.data();
    if (lambda.size() != static_cast<std::size_t>(data.N())) throw internal_error("specialization has wrong length");
    auto weight = [&](std::size_t a, int i) { return restriction_weight(data, atlas.point(a), i).evaluate(lambda); };
    for (std::size_t a = 0; a < atlas.points().size(); ++a) {
        std::map<Rational, std::pair<int, int>> seen;
        for (int i = 0; i < data.N(); ++i) {
            if (atlas.point(a).contains(i)) continue;
            const Rational w = weight(a, i);
            if (w == 0) {
                return "weight of u" + std::to_string(i + 1) + " at " + atlas.point(a).name() + " vanishes";
            }
            for (int c = 1; c <= k_max; ++c) {
                const Rational v = w / c;
                const auto [it, inserted] = seen.try_emplace(v, i, c);
                if (!inserted) {
                    return "at " + atlas.point(a).name() + ": w" + std::to_string(i + 1) + "/" + std::to_string(c) + " = w"
                           + std::to_string(it->second.first + 1) + "/" + std::to_string(it->second.second) + " = " + v.get_str();
                }
            }
        }
        for (const auto &rec : atlas.adjacency(a)) {
            const Rational lab = rec.lambda_ab.evaluate(lambda);
            for (int k = 1; k <= k_max; ++k) {
                const Rational point = -lab / k;
                for (int i = 0; i < data.N(); ++i) {
                    if (atlas.point(rec.beta).contains(i)) continue;
                    for (int c = 1; c <= k_max; ++c) {
                        if (point == -weight(rec.beta, i) / c) {
                            return "evaluation point -l(" + atlas.point(a).name() + "," + atlas.point(rec.beta).name() + ")/"
                                   + std::to_string(k) + " is a pole of the restriction to " + atlas.point(rec.beta).name();
                        }
                    }
                }
                for (int i = 0; i < data.N(); ++i) {
                    if (atlas.point(rec.beta).contains(i) && i != rec.i_ab) continue;
                    const long top = i == rec.i_ab ? k - 1 : k * data.pairing(i, rec.d_ab);
                    for (long c = 1; c <= std::max(top, -top); ++c) {
                        const long cc = top >= 0 ? c : 1 - c;
                        if (weight(a, i) - Rational(cc) / k * lab == 0) {
                            return "C(" + atlas.point(a).name() + "," + atlas.point(rec.beta).name() + "," + std::to_string(k)
                                   + ") has a vanishing factor";
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

inline Specialization specialization_from_values(const Atlas &atlas, std::vector<Rational> lambda, int k_max)
{
    if (auto why = certify(atlas, lambda, k_max)) throw precondition_error("specialization is not generic: " + *why);
    return Specialization{std::move(lambda), 0, k_max};
}

// Deterministic pseudo-random integer values in [-range, range], redrawn until certified.
inline Specialization certify_specialization(const Atlas &atlas, int k_max, std::uint64_t seed, long range = 1L << 20,
                                             int max_tries = 64)
{
    if (k_max < 1) throw precondition_error("k_max must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-range, range);
    for (int t = 0; t < max_tries; ++t) {
        std::vector<Rational> lambda;
        for (int i = 0; i < atlas.data().N(); ++i) lambda.emplace_back(dist(rng));
        if (!certify(atlas, lambda, k_max)) return Specialization{std::move(lambda), seed, k_max};
    }
    throw precondition_error("no generic specialization found after " + std::to_string(max_tries)
                             + " draws; use a larger value range");
}

// JSON layout of a coefficient: numerator as ascending z-powers, each a map from
// basis names to exact rational strings; poles as (at, order) pairs.
inline nlohmann::ordered_json to_json(const Elem &x)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < x.dim(); ++k) {
        if (x.coeff(k) != 0) j[x.algebra()->name(k)] = x.coeff(k).get_str();
    }
    return j;
}

inline nlohmann::ordered_json to_json(const ZRational &f)
{
    nlohmann::ordered_json num = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.numerator().size(); ++i) {
        if (f.numerator()[i].is_zero()) continue;
        num.push_back({{"z", i}, {"coeff", to_json(f.numerator()[i])}});
    }
    nlohmann::ordered_json poles = nlohmann::ordered_json::array();
    for (const auto &[a, m] : f.poles()) poles.push_back({{"at", a.get_str()}, {"order", m}});
    return {{"numerator", num}, {"poles", poles}};
}

inline nlohmann::ordered_json to_json(const NovikovSeries &s, const std::string &alpha_name)
{
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto &[k, f] : s.terms) {
        terms.push_back({{"d_base", k.d}, {"ell", k.ell}, {"jet", k.jet}, {"value", to_json(f)}});
    }
    return {{"fixed_point", alpha_name}, {"terms", terms}};
}

} // namespace toricmirror

#endif
