#ifndef TORICMIRROR_COHOMOLOGY_HPP
#define TORICMIRROR_COHOMOLOGY_HPP

#include <toricmirror/algebra.hpp>
#include <toricmirror/rational.hpp>
#include <toricmirror/toric_data.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace toricmirror
{

struct BundleData {
    std::string name;
    int rank = 1;
    std::vector<Elem> chern; // c_1..c_rank
    // Degrees a_j when the bundle is a sum of line bundles O(a_j) on P^m.
    std::optional<std::vector<long>> split_degrees;

    const AlgebraPtr &algebra() const { return chern.front().algebra(); }

    Elem c(int j) const
    {
        if (j == 0) return Elem::one(algebra());
        if (j < 0 || j > rank) return Elem(algebra());
        return chern.at(static_cast<std::size_t>(j - 1));
    }

    void check() const
    {
        if (rank < 1) throw input_error("bundle " + name + ": rank must be positive");
        if (chern.size() != static_cast<std::size_t>(rank)) throw input_error("bundle " + name + ": need rank Chern classes");
        const auto &alg = *algebra();
        for (int j = 1; j <= rank; ++j) {
            const Elem &cj = chern[static_cast<std::size_t>(j - 1)];
            for (std::size_t b = 0; b < alg.dim(); ++b) {
                if (cj.coeff(b) != 0 && alg.degree(b) != j) {
                    throw input_error("bundle " + name + ": c_" + std::to_string(j) + " is not homogeneous of degree "
                                      + std::to_string(j));
                }
            }
        }
    }
};

inline BundleData trivial_bundle(const BaseRing &base, int rank = 1)
{
    BundleData v;
    v.name = rank == 1 ? "O" : "O^" + std::to_string(rank);
    v.rank = rank;
    v.chern.assign(static_cast<std::size_t>(rank), Elem(base.algebra));
    if (base.novikov_rank() <= 1) v.split_degrees = std::vector<long>(static_cast<std::size_t>(rank), 0);
    return v;
}

// Sum of line bundles O(a_j) on P^m (hyperplane class is curve dual 0).
inline BundleData split_bundle_projective(const BaseRing &base, const std::vector<long> &degrees)
{
    if (degrees.empty()) throw input_error("split bundle needs at least one summand");
    if (base.novikov_rank() != 1 && base.algebra->dim() != 1) {
        throw input_error("split bundles by degree are only defined on a projective space base");
    }
    BundleData v;
    v.rank = static_cast<int>(degrees.size());
    v.split_degrees = degrees;
    v.name = "";
    for (std::size_t j = 0; j < degrees.size(); ++j) {
        v.name += (j ? "+" : "") + std::string("O(") + std::to_string(degrees[j]) + ")";
    }
    // Total Chern class prod (1 + a_j h).
    std::vector<Elem> e(degrees.size() + 1, Elem(base.algebra));
    e[0] = Elem::one(base.algebra);
    for (long a : degrees) {
        Elem ah(base.algebra);
        if (base.novikov_rank() == 1) ah = Elem::basis(base.algebra, base.curve_duals[0], Rational(a));
        for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += e[j - 1] * ah;
    }
    v.chern.assign(e.begin() + 1, e.end());
    return v;
}

inline BundleData direct_sum(const BundleData &a, const BundleData &b)
{
    BundleData v;
    v.name = a.name + "+" + b.name;
    v.rank = a.rank + b.rank;
    for (int j = 1; j <= v.rank; ++j) {
        Elem cj(a.algebra());
        for (int i = 0; i <= j; ++i) cj += a.c(i) * b.c(j - i);
        v.chern.push_back(cj);
    }
    if (a.split_degrees && b.split_degrees) {
        auto d = *a.split_degrees;
        d.insert(d.end(), b.split_degrees->begin(), b.split_degrees->end());
        v.split_degrees = d;
    }
    return v;
}

// Coefficients of R_V(w) = w^r + c_1 w^{r-1} + ... + c_r, listed from w^r down.
inline std::vector<Elem> chern_poly(const BundleData &v)
{
    std::vector<Elem> out;
    for (int j = 0; j <= v.rank; ++j) out.push_back(v.c(j));
    return out;
}

inline std::vector<Elem> segre_classes(const BundleData &v, int n_max)
{
    std::vector<Elem> s;
    s.push_back(Elem::one(v.algebra()));
    for (int n = 1; n <= n_max; ++n) {
        Elem sn(v.algebra());
        for (int j = 1; j <= std::min(n, v.rank); ++j) sn -= v.c(j) * s[static_cast<std::size_t>(n - j)];
        s.push_back(sn);
    }
    // (sum s_i)(sum c_j) = 1 through order n_max.
    for (int n = 1; n <= n_max; ++n) {
        Elem t(v.algebra());
        for (int j = 0; j <= std::min(n, v.rank); ++j) t += v.c(j) * s[static_cast<std::size_t>(n - j)];
        if (!t.is_zero()) throw internal_error("Segre-Chern duality failed");
    }
    return s;
}

inline Elem segre_class(const BundleData &v, int n)
{
    if (n < 0) return Elem(v.algebra());
    return segre_classes(v, n).back();
}

inline std::vector<Elem> chern_character(const BundleData &v, int l_max)
{
    // Newton identities: p_k = (-1)^{k-1} k e_k + sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i}.
    std::vector<Elem> p(static_cast<std::size_t>(l_max) + 1, Elem(v.algebra()));
    std::vector<Elem> ch;
    ch.push_back(Elem::one(v.algebra()) * Rational(v.rank));
    Rational fact = 1;
    for (int k = 1; k <= l_max; ++k) {
        Elem pk = v.c(k) * Rational((k % 2 == 1 ? 1 : -1) * k);
        for (int i = 1; i < k; ++i) pk += v.c(i) * p[static_cast<std::size_t>(k - i)] * Rational(i % 2 == 1 ? 1 : -1);
        p[static_cast<std::size_t>(k)] = pk;
        fact *= k;
        ch.push_back(pk * Rational(1 / fact));
    }
    return ch;
}

// B_0..B_{m_max} in the convention sum B_m x^m/m! = x/(e^x - 1).
inline std::vector<Rational> bernoulli(int m_max)
{
    std::vector<Rational> b(static_cast<std::size_t>(m_max) + 1);
    b[0] = 1;
    for (int m = 1; m <= m_max; ++m) {
        Rational s = 0;
        Integer binom = 1; // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            s += Rational(binom) * b[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[static_cast<std::size_t>(m)] = -s / (m + 1);
    }
    return b;
}

inline Rational factorial(int n)
{
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Truncated series in z (Laurent) and y = chi^{-1}, coefficients in the base ring.
class ChiSeries
{
public:
    using Key = std::pair<int, int>; // (z power, y power)

    ChiSeries(AlgebraPtr alg, int z_order) : alg_(std::move(alg)), order_(z_order) {}

    static ChiSeries one(AlgebraPtr alg, int z_order)
    {
        ChiSeries s(alg, z_order);
        s.add({0, 0}, Elem::one(alg));
        return s;
    }

    int order() const { return order_; }
    const std::map<Key, Elem> &terms() const { return terms_; }
    const AlgebraPtr &algebra() const { return alg_; }

    void add(const Key &k, const Elem &e)
    {
        if (k.first > order_ || e.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, e);
        } else {
            it->second += e;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Elem coefficient(int zpow, int ypow) const
    {
        auto it = terms_.find({zpow, ypow});
        return it == terms_.end() ? Elem(alg_) : it->second;
    }

    friend ChiSeries operator+(ChiSeries a, const ChiSeries &b)
    {
        for (const auto &[k, e] : b.terms_) a.add(k, e);
        return a;
    }

    friend ChiSeries multiply(const ChiSeries &a, const ChiSeries &b, int order)
    {
        ChiSeries r(a.alg_, order);
        for (const auto &[ka, ea] : a.terms_) {
            for (const auto &[kb, eb] : b.terms_) {
                r.add({ka.first + kb.first, ka.second + kb.second}, ea * eb);
            }
        }
        return r;
    }

    friend bool operator==(const ChiSeries &a, const ChiSeries &b) { return a.terms_ == b.terms_; }

    int min_z() const
    {
        int m = 0;
        for (const auto &[k, e] : terms_) m = std::min(m, k.first);
        return m;
    }

private:
    AlgebraPtr alg_;
    int order_;
    std::map<Key, Elem> terms_;
};

// log of the quantum Riemann-Roch operator for (V, e~^{sign}) with
// s_k = sign (-1)^{k-1} (k-1)! chi^{-k} for k >= 1 and s_0 = s_{-1} = 0.
inline ChiSeries qrr_log_delta(const BundleData &v, int sign, int z_order)
{
    const AlgebraPtr &alg = v.algebra();
    const int top = alg->top_degree();
    const auto ch = chern_character(v, top + 1);
    if (!ch[static_cast<std::size_t>(top + 1)].is_zero()) throw internal_error("ch_l nonzero above the top degree");
    const auto B = bernoulli(z_order + 1);
    ChiSeries log_delta(alg, z_order);
    for (int l = 0; l <= top; ++l) {
        for (int m = 0; m <= z_order + 1; ++m) {
            const int k = l + m - 1;
            if (k < 1) continue;
            const Rational s = Rational(sign * ((k - 1) % 2 == 0 ? 1 : -1)) * factorial(k - 1);
            const Rational coef = s * B[static_cast<std::size_t>(m)] / factorial(m);
            if (coef == 0) continue;
            log_delta.add({m - 1, k}, ch[static_cast<std::size_t>(l)] * coef);
        }
    }
    for (const auto &[key, e] : log_delta.terms()) {
        if (key.first < -1) throw internal_error("log Delta has a z-power below -1");
    }
    return log_delta;
}

// Delta_{(V, e~^{sign})}, exact in every z-power <= z_order.
inline ChiSeries qrr_delta(const BundleData &v, const EquivariantScalar &chi, int sign, int z_order)
{
    if (chi.is_zero() || !chi.is_pure_form()) throw precondition_error("QRR needs chi to be a nonzero pure lambda-form");
    if (sign != 1 && sign != -1) throw precondition_error("QRR sign must be +1 or -1");
    const int top = v.algebra()->top_degree();
    // Terms with z^{-1} are nilpotent, at most `top` of them survive in a product.
    const int inner = z_order + top;
    const ChiSeries x = qrr_log_delta(v, sign, inner);
    ChiSeries result = ChiSeries::one(v.algebra(), inner);
    ChiSeries power = ChiSeries::one(v.algebra(), inner);
    for (int n = 1; n <= z_order + 2 * top + 1; ++n) {
        power = multiply(power, x, inner);
        ChiSeries scaled(v.algebra(), inner);
        for (const auto &[k, e] : power.terms()) scaled.add(k, e * Rational(1 / factorial(n)));
        result = result + scaled;
    }
    ChiSeries truncated(v.algebra(), z_order);
    for (const auto &[k, e] : result.terms()) truncated.add(k, e);
    return truncated;
}

// Delta+ * Delta- == 1 through z_order.
inline bool check_qrr_inverse(const BundleData &v, const EquivariantScalar &chi, int z_order)
{
    const int top = v.algebra()->top_degree();
    const auto plus = qrr_delta(v, chi, 1, z_order + top);
    const auto minus = qrr_delta(v, chi, -1, z_order + top);
    return multiply(plus, minus, z_order) == ChiSeries::one(v.algebra(), z_order);
}

// Series additionally graded by a base curve class d.
using NovikovChiSeries = std::map<std::vector<long>, ChiSeries>;

// The re-grading Q^d -> Q^d chi^{-d.c_1(W)}; chi^{-1} is the y variable.
inline NovikovChiSeries novikov_regrade(const BaseRing &base, const Elem &c1_w, const NovikovChiSeries &f)
{
    NovikovChiSeries out;
    for (const auto &[d, s] : f) {
        const long shift = base.pairing(c1_w, d);
        ChiSeries t(s.algebra(), s.order());
        for (const auto &[k, e] : s.terms()) t.add({k.first, k.second + static_cast<int>(shift)}, e);
        out.emplace(d, std::move(t));
    }
    return out;
}

// Multiply every Novikov coefficient by Delta_{(W, e~^{sign})} and re-grade.
inline NovikovChiSeries modified_qrr(const BaseRing &base, const BundleData &w, const EquivariantScalar &chi, int sign,
                                     const NovikovChiSeries &f, int z_order)
{
    const auto delta = qrr_delta(w, chi, sign, z_order + base.algebra->top_degree());
    NovikovChiSeries prod;
    for (const auto &[d, s] : f) prod.emplace(d, multiply(delta, s, z_order));
    return novikov_regrade(base, w.c(1), prod);
}

// Polynomial in log(lambda) with coefficients z^a lambda^b, truncated at z-order.
class LogLaurentSeries
{
public:
    using Key = std::tuple<int, int, int>; // (z power, lambda power, log power)

    explicit LogLaurentSeries(int z_order) : order_(z_order) {}

    int order() const { return order_; }
    const std::map<Key, Rational> &terms() const { return terms_; }

    void add(int zp, int lp, int logp, const Rational &c)
    {
        if (zp > order_ || c == 0) return;
        Rational &slot = terms_[{zp, lp, logp}];
        slot += c;
        if (slot == 0) terms_.erase({zp, lp, logp});
    }

    friend LogLaurentSeries operator+(LogLaurentSeries a, const LogLaurentSeries &b)
    {
        for (const auto &[k, c] : b.terms_) a.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        return a;
    }
    friend LogLaurentSeries operator-(LogLaurentSeries a, const LogLaurentSeries &b)
    {
        for (const auto &[k, c] : b.terms_) a.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), -c);
        return a;
    }
    friend LogLaurentSeries operator*(const LogLaurentSeries &a, const LogLaurentSeries &b)
    {
        LogLaurentSeries r(std::min(a.order_, b.order_));
        for (const auto &[ka, ca] : a.terms_) {
            for (const auto &[kb, cb] : b.terms_) {
                r.add(std::get<0>(ka) + std::get<0>(kb), std::get<1>(ka) + std::get<1>(kb),
                      std::get<2>(ka) + std::get<2>(kb), ca * cb);
            }
        }
        return r;
    }
    friend bool operator==(const LogLaurentSeries &a, const LogLaurentSeries &b) { return a.terms_ == b.terms_; }

    // Multiply by z^s; the truncation order moves with it.
    LogLaurentSeries shift_z(int s) const
    {
        LogLaurentSeries r(order_ + s);
        for (const auto &[k, c] : terms_) r.add(std::get<0>(k) + s, std::get<1>(k), std::get<2>(k), c);
        return r;
    }

    std::string str() const
    {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto &[k, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += c.get_str();
            if (std::get<0>(k)) out += "*z^" + std::to_string(std::get<0>(k));
            if (std::get<1>(k)) out += "*l^" + std::to_string(std::get<1>(k));
            if (std::get<2>(k)) out += "*log(l)^" + std::to_string(std::get<2>(k));
        }
        return out;
    }

private:
    int order_;
    std::map<Key, Rational> terms_;
};

// log(lambda + a z) = log(lambda) + sum_{n>=1} (-1)^{n+1} a^n z^n lambda^{-n} / n.
inline LogLaurentSeries log_shifted(const Rational &a, int z_order)
{
    LogLaurentSeries s(z_order);
    s.add(0, 0, 1, 1);
    Rational an = 1;
    for (int n = 1; n <= z_order; ++n) {
        an *= a;
        s.add(n, -n, 0, Rational(n % 2 == 1 ? 1 : -1) * an / n);
    }
    return s;
}

// (lambda + a z)^{-p} for p >= 0.
inline LogLaurentSeries inverse_power_shifted(const Rational &a, int p, int z_order)
{
    LogLaurentSeries s(z_order);
    Rational binom = 1; // (-1)^n C(p+n-1, n)
    Rational an = 1;
    for (int n = 0; n <= z_order; ++n) {
        s.add(n, -p - n, 0, binom * an);
        binom = binom * Rational(-(p + n)) / (n + 1);
        an *= a;
    }
    return s;
}

// G(lambda + a z) = (lambda + a z) log(lambda + a z) - (lambda + a z) + (z/2) log(lambda + a z)
//                   + sum_{m>=2} B_m / (m(m-1)) z^m (lambda + a z)^{1-m}.
inline LogLaurentSeries G_function_shifted(const Rational &a, int z_order)
{
    const auto B = bernoulli(z_order + 1);
    const auto L = log_shifted(a, z_order);
    LogLaurentSeries linear(z_order);
    linear.add(0, 1, 0, 1);
    linear.add(1, 0, 0, a);
    LogLaurentSeries g = linear * L - linear;
    LogLaurentSeries out(z_order);
    out = out + g;
    for (const auto &[k, v] : L.terms()) out.add(std::get<0>(k) + 1, std::get<1>(k), std::get<2>(k), v / 2);
    for (int m = 2; m <= z_order; ++m) {
        const Rational c = B[static_cast<std::size_t>(m)] / (m * (m - 1));
        if (c == 0) continue;
        LogLaurentSeries t = inverse_power_shifted(a, m - 1, z_order - m).shift_z(m);
        for (const auto &[k, v] : t.terms()) out.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), c * v);
    }
    return out;
}

// (G(lambda + k z) - G(lambda)) / z against sum_{c=1}^k log(lambda + c z), through z_order.
inline bool check_G_telescoping(int k, int z_order, std::string *witness = nullptr)
{
    if (k < 0 || z_order < 0) throw precondition_error("G telescoping needs k >= 0 and z_order >= 0");
    const LogLaurentSeries lhs = (G_function_shifted(Rational(k), z_order + 1) - G_function_shifted(0, z_order + 1))
                                     .shift_z(-1);
    LogLaurentSeries rhs(z_order);
    for (int c = 1; c <= k; ++c) rhs = rhs + log_shifted(Rational(c), z_order);
    LogLaurentSeries lhs_t(z_order);
    lhs_t = lhs_t + lhs;
    const bool ok = lhs_t == rhs;
    if (!ok && witness) *witness = "lhs = " + lhs_t.str() + "; rhs = " + rhs.str();
    return ok;
}

} // namespace toricmirror

#endif
