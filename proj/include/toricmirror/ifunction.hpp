#ifndef TORICMIRROR_IFUNCTION_HPP
#define TORICMIRROR_IFUNCTION_HPP

#include <toricmirror/fixed_loci.hpp>
#include <toricmirror/series.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

inline long base_degree(const std::vector<long> &d)
{
    long s = 0;
    for (long x : d) s += x;
    return s;
}

// Effective base classes: nonnegative vectors in the Novikov coordinates with
// total degree <= cutoff, sorted by (degree, lexicographic).
inline std::vector<std::vector<long>> base_classes(const BaseRing &base, long cutoff)
{
    std::vector<std::vector<long>> out;
    if (cutoff < 0) return out;
    std::vector<long> d(base.novikov_rank(), 0);
    while (true) {
        if (base_degree(d) <= cutoff) out.push_back(d);
        std::size_t j = 0;
        while (j < d.size() && d[j] == cutoff) {
            d[j] = 0;
            ++j;
        }
        if (j == d.size()) break;
        ++d[j];
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        if (base_degree(a) != base_degree(b)) return base_degree(a) < base_degree(b);
        return a < b;
    });
    return out;
}

inline Rational class_degree(const SeriesKey &k, const DegreeFunctional &phi)
{
    return Rational(base_degree(k.d)) + phi(k.ell);
}

// Seed I-function: for each base class d, an element of H*(B) with coefficients
// polynomial in l_1..l_N (variables 0..N-1) and Laurent in z (variable N).
struct SeedIFunction {
    std::string name;
    BaseRing base;
    int n_lambda = 0;
    long cutoff = 0;
    std::map<std::vector<long>, PolyElem> coefficients;

    std::size_t z_var() const { return static_cast<std::size_t>(n_lambda); }

    const PolyElem &coefficient(const std::vector<long> &d) const
    {
        const auto it = coefficients.find(d);
        if (it == coefficients.end()) throw precondition_error("seed " + name + " has no coefficient at d = " + format_vector(d));
        return it->second;
    }

    std::vector<std::string> variable_names() const
    {
        std::vector<std::string> n;
        for (int i = 0; i < n_lambda; ++i) n.push_back("l" + std::to_string(i + 1));
        n.push_back("z");
        return n;
    }

    // Structural checks: polynomial in lambda, every class up to the cutoff present.
    void check() const
    {
        for (const auto &[d, c] : coefficients) {
            if (d.size() != base.novikov_rank()) throw input_error("seed " + name + ": class " + format_vector(d) + " has wrong length");
            if (c.dim() != base.algebra->dim()) throw input_error("seed " + name + ": coefficient is not over the base ring");
            for (const auto &p : c.coeffs()) {
                for (const auto &[e, q] : p.terms()) {
                    if (e.size() > z_var() + 1) throw input_error("seed " + name + ": unknown variable in coefficient");
                    for (std::size_t i = 0; i < e.size() && i < z_var(); ++i) {
                        if (e[i] < 0) {
                            throw input_error("seed " + name + ": coefficient at d = " + format_vector(d)
                                              + " is not polynomial in l" + std::to_string(i + 1));
                        }
                    }
                }
            }
        }
        for (const auto &d : base_classes(base, cutoff)) {
            if (!coefficients.count(d)) throw input_error("seed " + name + ": missing coefficient at d = " + format_vector(d));
        }
    }

    int lambda_degree() const
    {
        int m = 0;
        for (const auto &[d, c] : coefficients) {
            for (const auto &p : c.coeffs()) {
                for (const auto &[e, q] : p.terms()) {
                    int s = 0;
                    for (std::size_t i = 0; i < e.size() && i < z_var(); ++i) s += e[i];
                    m = std::max(m, s);
                }
            }
        }
        return m;
    }
};

// I = 1 over a base with no curve classes.
inline SeedIFunction seed_constant(const BaseRing &base, int n_lambda, const std::string &name = "constant")
{
    if (base.novikov_rank() != 0) throw precondition_error("constant seed needs a base without curve classes");
    SeedIFunction s{name, base, n_lambda, 0, {}};
    s.coefficients[{}] = PolyElem::one(base.algebra);
    return s;
}

inline SeedIFunction seed_trivial(const BaseRing &base, int n_lambda)
{
    if (base.algebra->dim() != 1 || base.novikov_rank() != 0) {
        throw precondition_error("the trivial seed is only defined over the point base");
    }
    return seed_constant(base, n_lambda, "trivial");
}

// Inverse-Euler twisted hypergeometric seed on B = P^m for V_i = sum_j O(-a_ij), a_ij >= 0:
// Q^d coefficient prod_{c=1}^d (h + cz)^{-(m+1)} * prod_{i,j} prod_{c=0}^{d a_ij - 1} (l_i - a_ij h - cz).
inline SeedIFunction seed_split_twisted(const BaseRing &base, const std::vector<BundleData> &bundles, long cutoff)
{
    if (base.algebra->dim() == 1 && base.novikov_rank() == 0) return seed_constant(base, static_cast<int>(bundles.size()), "split twisted");
    if (base.novikov_rank() != 1 || base.curve_duals[0] != 1) {
        throw precondition_error("the split twisted seed needs a projective space base");
    }
    for (const auto &v : bundles) {
        if (!v.split_degrees) throw input_error("bundle " + v.name + " is not split; supply a seed document instead");
        for (long a : *v.split_degrees) {
            if (a > 0) throw input_error("bundle " + v.name + " has a summand of positive degree; supply a seed document instead");
        }
    }
    const auto &alg = base.algebra;
    const int m = alg->top_degree();
    const int n = static_cast<int>(bundles.size());
    const auto zv = static_cast<std::size_t>(n);
    const PolyElem h = PolyElem::basis(alg, 1);
    SeedIFunction s{"split twisted", base, n, cutoff, {}};
    for (long d = 0; d <= cutoff; ++d) {
        PolyElem acc = PolyElem::one(alg);
        for (long c = 1; c <= d; ++c) {
            // 1/(h + cz) = sum_{j=0}^{m} (-h)^j (cz)^{-j-1}.
            PolyElem inv(alg);
            for (int j = 0; j <= m; ++j) {
                Rational coef = (j % 2 ? Rational(-1) : Rational(1));
                for (int t = 0; t <= j; ++t) coef /= c;
                inv += PolyElem::basis(alg, static_cast<std::size_t>(j), MultiPoly::variable(zv, -j - 1) * coef);
            }
            for (int t = 0; t <= m; ++t) acc = acc * inv;
        }
        for (int i = 0; i < n; ++i) {
            for (long deg : *bundles[static_cast<std::size_t>(i)].split_degrees) {
                const long a = -deg;
                for (long c = 0; c < d * a; ++c) {
                    PolyElem f = PolyElem::scalar(alg, MultiPoly::variable(static_cast<std::size_t>(i)) - MultiPoly::variable(zv) * Rational(c));
                    f -= h * MultiPoly(Rational(a));
                    acc = acc * f;
                }
            }
        }
        s.coefficients[{d}] = acc;
    }
    s.check();
    return s;
}

// Seed document layout:
// {"name", "n_lambda", "base_cutoff", "coefficients": [{"d": [...], "terms": [{"basis", "coeff", "lambda": [...], "z"}]}]}
inline SeedIFunction seed_from_json(const nlohmann::json &j, const BaseRing &base)
{
    SeedIFunction s;
    try {
        s.name = j.value("name", std::string("user"));
        s.base = base;
        s.n_lambda = j.at("n_lambda").get<int>();
        s.cutoff = j.at("base_cutoff").get<long>();
        if (s.n_lambda < 1) throw input_error("seed: n_lambda must be positive");
        for (const auto &cj : j.at("coefficients")) {
            const auto d = cj.at("d").get<std::vector<long>>();
            PolyElem c(base.algebra);
            for (const auto &tj : cj.at("terms")) {
                const std::size_t b = base.algebra->index_of(tj.at("basis").get<std::string>());
                const Rational q = parse_rational(tj.at("coeff").get<std::string>());
                auto e = tj.at("lambda").get<std::vector<int>>();
                if (e.size() != static_cast<std::size_t>(s.n_lambda)) throw input_error("seed: lambda exponent vector has wrong length");
                for (std::size_t i = 0; i < e.size(); ++i) {
                    if (e[i] < 0) {
                        throw input_error("seed: coefficient at d = " + format_vector(d) + " is rational in l" + std::to_string(i + 1)
                                          + "; seeds must be polynomial in the equivariant parameters");
                    }
                }
                e.push_back(tj.value("z", 0));
                c.coeff(b) += MultiPoly::monomial(e, q);
            }
            if (!s.coefficients.emplace(d, c).second) throw input_error("seed: duplicate coefficient at d = " + format_vector(d));
        }
    } catch (const nlohmann::json::exception &e) {
        throw input_error(std::string("seed document: ") + e.what());
    }
    s.check();
    return s;
}

inline nlohmann::ordered_json to_json(const SeedIFunction &s)
{
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto &[d, c] : s.coefficients) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (std::size_t b = 0; b < c.dim(); ++b) {
            for (const auto &[e, q] : c.coeff(b).terms()) {
                std::vector<int> lam(static_cast<std::size_t>(s.n_lambda), 0);
                for (std::size_t i = 0; i < e.size() && i < s.z_var(); ++i) lam[i] = e[i];
                const int zp = e.size() > s.z_var() ? e[s.z_var()] : 0;
                terms.push_back({{"basis", s.base.algebra->name(b)}, {"coeff", q.get_str()}, {"lambda", lam}, {"z", zp}});
            }
        }
        coeffs.push_back({{"d", d}, {"terms", terms}});
    }
    return {{"name", s.name}, {"n_lambda", s.n_lambda}, {"base_cutoff", s.cutoff}, {"coefficients", coeffs}};
}

// Pseudo-random seed: for each base class up to the cutoff, total lambda-degree
// <= max_degree, z-powers in {-1, 0, 1}, small integer coefficients.
inline SeedIFunction random_polynomial_seed(const BaseRing &base, int n_lambda, std::uint64_t seed, int max_degree = 2,
                                            long cutoff = 0)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5), var(0, n_lambda - 1), deg(0, max_degree), zp(-1, 1), count(1, 5);
    SeedIFunction s{"random " + std::to_string(seed), base, n_lambda, cutoff, {}};
    for (const auto &d : base_classes(base, cutoff)) {
        PolyElem c = base_degree(d) == 0 ? PolyElem::one(base.algebra) : PolyElem(base.algebra);
        const int terms = count(rng);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> e(static_cast<std::size_t>(n_lambda) + 1, 0);
            const int dg = deg(rng);
            for (int k = 0; k < dg; ++k) ++e[static_cast<std::size_t>(var(rng))];
            e.back() = zp(rng);
            const std::size_t b = static_cast<std::size_t>(rng() % base.algebra->dim());
            c.coeff(b) += MultiPoly::monomial(e, Rational(coef(rng)));
        }
        s.coefficients[d] = c;
    }
    s.check();
    return s;
}

// Values of lambda_1..lambda_N as elements of the base ring (scalars, or with
// nilpotent parts when the base ring carries extra equivariant directions).
using LambdaValues = std::vector<Elem>;

inline LambdaValues scalar_lambda(const BaseRing &base, const std::vector<Rational> &values)
{
    LambdaValues out;
    for (const auto &v : values) out.push_back(Elem::one(base.algebra) * v);
    return out;
}

inline std::vector<Rational> scalar_parts(const LambdaValues &l)
{
    std::vector<Rational> out;
    for (const auto &x : l) out.push_back(x.scalar_part());
    return out;
}

struct IhatOptions {
    long cutoff = 0;
    DegreeFunctional phi;
    int jets = 0; // 0: t-free part only; 1: also the coefficients of t_1..t_N
    // Negative control: omit the factor R_{V_i}(u_i + cz) at one fixed point and class.
    struct DroppedFactor {
        std::size_t alpha = 0;
        std::vector<long> d;
        IntVec ell;
        int i = 0;
        long c = 1;
    };
    std::optional<DroppedFactor> drop;
};

// (d, ell) pairs with total degree <= cutoff in (degree, lexicographic) order.
inline std::vector<std::pair<std::vector<long>, IntVec>> enumerate_classes(const Atlas &atlas, const BaseRing &base,
                                                                            const IhatOptions &opt)
{
    std::vector<std::pair<std::vector<long>, IntVec>> out;
    for (const auto &d : base_classes(base, opt.cutoff)) {
        for (const auto &ell : enumerate_Leff(atlas, opt.phi, opt.cutoff - base_degree(d))) out.emplace_back(d, ell);
    }
    std::stable_sort(out.begin(), out.end(), [&](const auto &a, const auto &b) {
        return Rational(base_degree(a.first)) + opt.phi(a.second) < Rational(base_degree(b.first)) + opt.phi(b.second);
    });
    return out;
}

// R_{V_i}(w + cz) over the ring of a fixed locus, as a polynomial in z.
inline ZRational chern_poly_shifted(const FixedLocusRing &ring, int i, const Elem &w, long c)
{
    const auto &v = ring.bundles().at(static_cast<std::size_t>(i));
    const AlgebraPtr &alg = ring.algebra();
    const ZRational x = ZRational::linear(w, Elem::one(alg) * Rational(c));
    ZRational acc(alg), xp = ZRational::one(alg);
    for (int j = v.rank; j >= 0; --j) {
        acc += xp * ring.from_base(v.c(j));
        xp = xp * x;
    }
    return acc;
}

// 1 / R_{V_i}(w + cz) for c != 0: the scalar part is (s + cz)^r with s the scalar part of w.
inline ZRational chern_poly_shifted_inverse(const FixedLocusRing &ring, int i, const Elem &w, long c)
{
    if (c == 0) throw pole_collision_error("R_V(u" + std::to_string(i + 1) + ") has no z-dependence to invert");
    const int r = ring.bundles().at(static_cast<std::size_t>(i)).rank;
    const ZRational p = chern_poly_shifted(ring, i, w, c);
    Rational lead = 1;
    for (int t = 0; t < r; ++t) lead *= c;
    Rational root = -w.scalar_part() / c;
    root.canonicalize();
    return invert_with_scalar_roots(p.numerator(), lead, {{root, r}}, ring.algebra());
}

// Per-fixed-point data shared by both constructions.
class FixedPointContext
{
public:
    FixedPointContext(const FixedLociModel &model, std::size_t a, const LambdaValues &lambda) : model_(&model), a_(a)
    {
        const auto &ring = model.vertex(a);
        for (const auto &l : lambda) lambda_.push_back(ring.from_base(l));
        for (int i = 0; i < model.atlas().data().N(); ++i) u_.push_back(model.restrict<Rational>(a, i, lambda_));
    }

    const FixedLocusRing &ring() const { return model_->vertex(a_); }
    const AlgebraPtr &algebra() const { return ring().algebra(); }
    const Elem &u(int i) const { return u_.at(static_cast<std::size_t>(i)); }
    const std::vector<Elem> &lambda() const { return lambda_; }
    std::size_t alpha() const { return a_; }
    const ToricData &data() const { return model_->atlas().data(); }
    const FixedLociModel &model() const { return *model_; }

    // R_{V_i}(u_i + cz)^e, e of either sign; inverses are cached.
    ZRational factor(int i, long c, int e, const IntVec &ell) const
    {
        ZRational acc = ZRational::one(algebra());
        if (e == 0) return acc;
        ZRational base;
        if (e > 0) {
            base = chern_poly_shifted(ring(), i, u(i), c);
        } else {
            const auto key = std::make_pair(i, c);
            auto it = inverse_cache_.find(key);
            if (it == inverse_cache_.end()) {
                try {
                    it = inverse_cache_.emplace(key, chern_poly_shifted_inverse(ring(), i, u(i), c)).first;
                } catch (const pole_collision_error &err) {
                    throw pole_collision_error("inverting R_V(u" + std::to_string(i + 1) + " + " + std::to_string(c) + "z) at "
                                               + model_->atlas().point(a_).name() + " for l = " + format_vector(ell) + ": "
                                               + err.what());
                }
            }
            base = it->second;
        }
        for (int t = 0; t < std::abs(e); ++t) acc = acc * base;
        return acc;
    }

    // Image of a base-ring element with MultiPoly coefficients under
    // l_i -> value(i) and z -> z.
    template <class ValueFn>
    ZRational substitute(const PolyElem &x, std::size_t z_var, ValueFn &&value) const
    {
        const std::size_t balg_dim = x.dim();
        ZRational acc(algebra());
        std::map<std::pair<std::size_t, int>, ZRational> powers;
        auto power = [&](std::size_t v, int e) -> ZRational {
            const auto key = std::make_pair(v, e);
            auto it = powers.find(key);
            if (it != powers.end()) return it->second;
            ZRational p;
            if (v == z_var) {
                p = ZRational::z_power(algebra(), e);
            } else if (v < z_var) {
                if (e < 0) throw internal_error("negative lambda exponent reached substitution");
                p = value(static_cast<int>(v)).pow(static_cast<unsigned>(e));
            } else {
                throw internal_error("unknown variable in seed coefficient");
            }
            return powers.emplace(key, p).first->second;
        };
        for (std::size_t b = 0; b < balg_dim; ++b) {
            if (x.coeff(b).is_zero()) continue;
            const ZRational v = x.coeff(b).substitute<ZRational>(ZRational(algebra()), ZRational::one(algebra()), power);
            Elem basis_b(model_->base().algebra);
            basis_b.coeff(b) = 1;
            acc += v * ring().from_base(basis_b);
        }
        return acc;
    }

private:
    const FixedLociModel *model_;
    std::size_t a_;
    std::vector<Elem> lambda_;
    std::vector<Elem> u_;
    mutable std::map<std::pair<int, long>, ZRational> inverse_cache_;
};

// Coefficient of q^ell Q^d t^jet in the restriction of the hatted I-function:
// seed_d(l_i -> u_i + D_i(ell) z) / prod_i prod_{c=1}^{D_i(ell)} R_{V_i}(u_i + cz),
// with prod_{c=1}^{m} F(c) = prod_{c=m+1}^{0} F(c)^{-1} for m < 0.
inline ZRational ihat_term(const FixedPointContext &ctx, const SeedIFunction &seed, const std::vector<long> &d, const IntVec &ell,
                           const IhatOptions &opt)
{
    const ToricData &td = ctx.data();
    ZRational out = ctx.substitute(seed.coefficient(d), seed.z_var(), [&](int i) {
        return ZRational::linear(ctx.u(i), Elem::one(ctx.algebra()) * Rational(td.pairing(i, ell)));
    });
    for (int i = 0; i < td.N(); ++i) {
        const long m = td.pairing(i, ell);
        if (m > 0) {
            for (long c = 1; c <= m; ++c) {
                if (opt.drop && opt.drop->alpha == ctx.alpha() && opt.drop->d == d && opt.drop->ell == ell && opt.drop->i == i
                    && opt.drop->c == c) {
                    continue;
                }
                out = out * ctx.factor(i, c, -1, ell);
            }
        } else {
            for (long c = m + 1; c <= 0; ++c) out = out * ctx.factor(i, c, 1, ell);
        }
        if (out.is_zero()) break;
    }
    return out;
}

// t-jets: the coefficient of t_j in e^{sum t_i u_i / z} e^{D(ell) t} is (u_j / z + D_j(ell)).
inline ZRational jet_factor(const FixedPointContext &ctx, int j, const IntVec &ell)
{
    return ZRational::constant(ctx.u(j)) * ZRational::z_power(ctx.algebra(), -1)
           + ZRational::one(ctx.algebra()) * Rational(ctx.data().pairing(j, ell));
}

inline void check_seed_against(const FixedLociModel &model, const SeedIFunction &seed, const IhatOptions &opt)
{
    if (seed.n_lambda != model.atlas().data().N()) throw precondition_error("seed has the wrong number of equivariant parameters");
    if (seed.base.algebra->dim() != model.base().algebra->dim() || seed.base.novikov_rank() != model.base().novikov_rank()) {
        throw precondition_error("seed is not over the base ring of the model");
    }
    if (seed.base.novikov_rank() > 0 && seed.cutoff < opt.cutoff) {
        throw precondition_error("seed cutoff " + std::to_string(seed.cutoff) + " is below the requested cutoff "
                                 + std::to_string(opt.cutoff));
    }
    if (opt.jets < 0 || opt.jets > 1) throw precondition_error("t-jet order must be 0 or 1");
}

// Restriction of the hatted I-function to the fixed locus alpha, by direct substitution.
inline NovikovSeries build_Ihat_restriction(const FixedLociModel &model, std::size_t a, const SeedIFunction &seed,
                                            const LambdaValues &lambda, const IhatOptions &opt)
{
    check_seed_against(model, seed, opt);
    const FixedPointContext ctx(model, a, lambda);
    NovikovSeries out{a, ctx.algebra(), {}};
    for (const auto &[d, ell] : enumerate_classes(model.atlas(), model.base(), opt)) {
        const ZRational f = ihat_term(ctx, seed, d, ell, opt);
        out.add({d, ell, 0}, f);
        if (opt.jets) {
            for (int j = 0; j < ctx.data().N(); ++j) out.add({d, ell, j + 1}, f * jet_factor(ctx, j, ell));
        }
    }
    return out;
}

// Shift-operator data: numerator * prod_{(i,c)} R_{V_i}(l_i + cz)^{e}, the
// numerator over the base ring in l_1..l_N and z.
struct ShiftedSeed {
    PolyElem numerator;
    std::map<std::pair<int, long>, int> factors;

    friend bool operator==(const ShiftedSeed &a, const ShiftedSeed &b)
    {
        return a.numerator == b.numerator && a.factors == b.factors;
    }
};

// S^ell: f(l, z) |-> f(l - D(ell) z, z) / prod_i prod_{c=1}^{-D_i(ell)} R_{V_i}(l_i + cz).
inline ShiftedSeed fourier_shift(const ShiftedSeed &f, const ToricData &data, const IntVec &ell)
{
    const std::size_t zv = static_cast<std::size_t>(data.N());
    auto power = [&](std::size_t v, int e) {
        if (v == zv) return MultiPoly::variable(zv, e);
        if (e < 0) throw internal_error("negative lambda exponent in a shifted seed");
        const MultiPoly s = MultiPoly::variable(v) - MultiPoly::variable(zv) * Rational(data.pairing(static_cast<int>(v), ell));
        MultiPoly p(1);
        for (int t = 0; t < e; ++t) p *= s;
        return p;
    };
    ShiftedSeed out;
    std::vector<MultiPoly> coeffs;
    for (const auto &c : f.numerator.coeffs()) coeffs.push_back(c.substitute<MultiPoly>(MultiPoly(), MultiPoly(1), power));
    out.numerator = PolyElem(f.numerator.algebra(), std::move(coeffs));
    auto bump = [&](int i, long c, int e) {
        int &slot = out.factors[{i, c}];
        slot += e;
        if (slot == 0) out.factors.erase({i, c});
    };
    for (const auto &[key, e] : f.factors) bump(key.first, key.second - data.pairing(key.first, ell), e);
    for (int i = 0; i < data.N(); ++i) {
        const long m = -data.pairing(i, ell);
        if (m > 0) {
            for (long c = 1; c <= m; ++c) bump(i, c, -1);
        } else {
            for (long c = m + 1; c <= 0; ++c) bump(i, c, 1);
        }
    }
    return out;
}

// S^ell as a composition of unit shifts S^{+-e_j}.
inline ShiftedSeed fourier_shift_stepwise(ShiftedSeed f, const ToricData &data, const IntVec &ell)
{
    for (std::size_t j = 0; j < ell.size(); ++j) {
        IntVec unit(ell.size(), 0);
        unit[j] = ell[j] > 0 ? 1 : -1;
        for (long t = 0; t < std::abs(ell[j]); ++t) f = fourier_shift(f, data, unit);
    }
    return f;
}

// Restriction of the hatted I-function built as sum_ell kappa(S^{-ell} e^{t l / z} I) q^ell,
// with kappa: l_i -> u_i, restricted to alpha.
inline NovikovSeries build_Ihat_via_fourier(const FixedLociModel &model, std::size_t a, const SeedIFunction &seed,
                                            const LambdaValues &lambda, const IhatOptions &opt)
{
    check_seed_against(model, seed, opt);
    const FixedPointContext ctx(model, a, lambda);
    const ToricData &data = model.atlas().data();
    const std::size_t zv = seed.z_var();
    NovikovSeries out{a, ctx.algebra(), {}};
    auto kappa = [&](const ShiftedSeed &s, const IntVec &ell) {
        ZRational v = ctx.substitute(s.numerator, zv, [&](int i) { return ZRational::constant(ctx.u(i)); });
        for (const auto &[key, e] : s.factors) {
            if (v.is_zero()) break;
            v = v * ctx.factor(key.first, key.second, e, ell);
        }
        return v;
    };
    for (const auto &[d, ell] : enumerate_classes(model.atlas(), model.base(), opt)) {
        IntVec minus(ell.size());
        for (std::size_t j = 0; j < ell.size(); ++j) minus[j] = -ell[j];
        const PolyElem &c = seed.coefficient(d);
        out.add({d, ell, 0}, kappa(fourier_shift_stepwise(ShiftedSeed{c, {}}, data, minus), ell));
        if (opt.jets) {
            for (int j = 0; j < data.N(); ++j) {
                const PolyElem jet = c * (MultiPoly::variable(static_cast<std::size_t>(j)) * MultiPoly::variable(zv, -1));
                out.add({d, ell, j + 1}, kappa(fourier_shift_stepwise(ShiftedSeed{jet, {}}, data, minus), ell));
            }
        }
    }
    return out;
}

inline bool check_normalization(const NovikovSeries &s, std::size_t base_novikov_rank, std::size_t K)
{
    const SeriesKey zero{std::vector<long>(base_novikov_rank, 0), IntVec(K, 0), 0};
    return s.coefficient(zero) == ZRational::one(s.algebra);
}

inline std::string latex_rational(const Rational &q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    const bool neg = q < 0;
    return std::string(neg ? "-" : "") + "\\frac{" + Integer(abs(q.get_num())).get_str() + "}{" + q.get_den().get_str() + "}";
}

inline std::string latex_elem(const Elem &x)
{
    std::string out;
    for (std::size_t k = 0; k < x.dim(); ++k) {
        const Rational &c = x.coeff(k);
        if (c == 0) continue;
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        const std::string name = x.algebra()->name(k);
        if (k == 0) out += latex_rational(a);
        else out += (a == 1 ? "" : latex_rational(a) + " ") + name;
    }
    return out.empty() ? "0" : out;
}

// Renders numerator / prod (z - a)^m for visual comparison with displayed formulas.
inline std::string to_latex(const ZRational &f)
{
    std::string num;
    for (std::size_t k = 0; k < f.numerator().size(); ++k) {
        if (f.numerator()[k].is_zero()) continue;
        if (!num.empty()) num += " + ";
        const std::string c = latex_elem(f.numerator()[k]);
        const std::string zp = k == 0 ? "" : (k == 1 ? "z" : "z^{" + std::to_string(k) + "}");
        const std::string wrapped = c.find(' ') == std::string::npos ? c : "(" + c + ")";
        if (zp.empty()) num += wrapped;
        else num += (c == "1" ? "" : wrapped + " ") + zp;
    }
    if (num.empty()) return "0";
    std::string den;
    for (const auto &[a, m] : f.poles()) {
        std::string lin = a == 0 ? "z" : "(z " + std::string(a < 0 ? "+ " : "- ") + latex_rational(Rational(abs(a))) + ")";
        den += lin + (m == 1 ? "" : "^{" + std::to_string(m) + "}");
    }
    return den.empty() ? num : "\\frac{" + num + "}{" + den + "}";
}

} // namespace toricmirror

#endif
