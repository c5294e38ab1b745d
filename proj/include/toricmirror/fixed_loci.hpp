#ifndef TORICMIRROR_FIXED_LOCI_HPP
#define TORICMIRROR_FIXED_LOCI_HPP

#include <toricmirror/algebra.hpp>
#include <toricmirror/cohomology.hpp>
#include <toricmirror/toric_data.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

// H*(X_S) = H*(B)[u_i, i in S] / (R_{V_i}(u_i)), as an Algebra with basis
// b * prod u_i^{e_i}, 0 <= e_i < rank V_i. For S a fixed point this is the
// fixed locus ring; for S = alpha u beta it is the edge ring.
class FixedLocusRing
{
public:
    FixedLocusRing(const BaseRing &base, const std::vector<BundleData> &bundles, IndexSet vars)
        : base_(base), bundles_(bundles), vars_(std::move(vars))
    {
        build();
    }

    const AlgebraPtr &algebra() const { return alg_; }
    const BaseRing &base() const { return base_; }
    const IndexSet &vars() const { return vars_; }
    const std::vector<BundleData> &bundles() const { return bundles_; }
    bool has_var(int i) const { return std::binary_search(vars_.begin(), vars_.end(), i); }
    std::size_t var_position(int i) const
    {
        return static_cast<std::size_t>(std::lower_bound(vars_.begin(), vars_.end(), i) - vars_.begin());
    }

    // Basis index of b * u^e.
    std::size_t index(std::size_t b, const std::vector<int> &e) const { return index_.at({b, e}); }
    const std::pair<std::size_t, std::vector<int>> &basis_data(std::size_t k) const { return basis_.at(k); }

    template <class C = Rational>
    Element<C> from_base(const Elem &x) const
    {
        Element<C> r(alg_);
        const std::vector<int> zero(vars_.size(), 0);
        for (std::size_t b = 0; b < x.dim(); ++b) {
            if (x.coeff(b) != 0) r.coeff(index(b, zero)) = C(x.coeff(b));
        }
        return r;
    }

    // Normal form of u_i for i in vars.
    template <class C = Rational>
    Element<C> u(int i) const
    {
        const std::size_t p = var_position(i);
        if (p >= vars_.size() || vars_[p] != i) throw internal_error("u_" + std::to_string(i + 1) + " is not a variable");
        std::map<Key, Rational> t;
        std::vector<int> e(vars_.size(), 0);
        e[p] = 1;
        t[{0, e}] = 1;
        reduce(t);
        Element<C> r(alg_);
        for (const auto &[k, c] : t) r.coeff(index(k.first, k.second)) = C(c);
        return r;
    }

    // R_V(w) for the i-th bundle.
    template <class C>
    Element<C> chern_poly_at(int i, const Element<C> &w) const
    {
        const auto &v = bundles_.at(static_cast<std::size_t>(i));
        Element<C> acc(alg_);
        Element<C> wp = Element<C>::one(alg_);
        for (int j = v.rank; j >= 0; --j) {
            acc += from_base<C>(v.c(j)) * wp;
            wp = wp * w;
        }
        return acc;
    }

    std::string describe() const
    {
        std::string out = "H*(" + base_.description + ")[";
        for (std::size_t p = 0; p < vars_.size(); ++p) out += (p ? "," : "") + std::string("u") + std::to_string(vars_[p] + 1);
        out += "] / (";
        for (std::size_t p = 0; p < vars_.size(); ++p) {
            out += (p ? ", " : "") + std::string("R_") + bundles_[static_cast<std::size_t>(vars_[p])].name + "(u"
                   + std::to_string(vars_[p] + 1) + ")";
        }
        return out + "), dim " + std::to_string(alg_->dim());
    }

private:
    using Key = std::pair<std::size_t, std::vector<int>>;

    int rank_of_var(std::size_t p) const { return bundles_.at(static_cast<std::size_t>(vars_[p])).rank; }

    // Rewrite u_i^{r_i} = -sum_{j>=1} c_j u_i^{r_i - j} until all exponents are reduced.
    void reduce(std::map<Key, Rational> &t) const
    {
        const auto &balg = *base_.algebra;
        while (true) {
            auto it = t.begin();
            std::size_t p = 0;
            for (; it != t.end(); ++it) {
                for (p = 0; p < vars_.size(); ++p) {
                    if (it->first.second[p] >= rank_of_var(p)) break;
                }
                if (p < vars_.size()) break;
            }
            if (it == t.end()) return;
            const Key key = it->first;
            const Rational coef = it->second;
            t.erase(it);
            const auto &v = bundles_[static_cast<std::size_t>(vars_[p])];
            for (int j = 1; j <= v.rank; ++j) {
                const Elem cj = v.c(j);
                std::vector<int> e = key.second;
                e[p] -= j;
                for (std::size_t b2 = 0; b2 < cj.dim(); ++b2) {
                    if (cj.coeff(b2) == 0) continue;
                    for (const auto &term : balg.product(key.first, b2)) {
                        Rational &slot = t[{term.index, e}];
                        slot -= coef * cj.coeff(b2) * term.coeff;
                        if (slot == 0) t.erase({term.index, e});
                    }
                }
            }
        }
    }

    void build()
    {
        for (int i : vars_) {
            if (i < 0 || static_cast<std::size_t>(i) >= bundles_.size()) throw internal_error("variable out of range");
        }
        const auto &balg = *base_.algebra;
        // Exponent vectors in mixed radix, unit first.
        std::vector<std::vector<int>> exps{std::vector<int>(vars_.size(), 0)};
        for (std::size_t p = 0; p < vars_.size(); ++p) {
            std::vector<std::vector<int>> next;
            for (const auto &e : exps) {
                for (int k = 0; k < rank_of_var(p); ++k) {
                    auto f = e;
                    f[p] = k;
                    next.push_back(f);
                }
            }
            exps = std::move(next);
        }
        std::vector<std::string> names;
        std::vector<int> degrees;
        for (const auto &e : exps) {
            int edeg = 0;
            for (int x : e) edeg += x;
            for (std::size_t b = 0; b < balg.dim(); ++b) {
                index_[{b, e}] = basis_.size();
                basis_.push_back({b, e});
                std::string n = b == 0 ? "" : balg.name(b);
                for (std::size_t p = 0; p < vars_.size(); ++p) {
                    if (e[p] == 0) continue;
                    if (!n.empty()) n += "*";
                    n += "u" + std::to_string(vars_[p] + 1);
                    if (e[p] > 1) n += "^" + std::to_string(e[p]);
                }
                names.push_back(n.empty() ? "1" : n);
                degrees.push_back(balg.degree(b) + edeg);
            }
        }
        const std::size_t n = basis_.size();
        Algebra::Table table(n, std::vector<std::vector<Algebra::Term>>(n));
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = x; y < n; ++y) {
                std::map<Key, Rational> t;
                std::vector<int> e(vars_.size());
                for (std::size_t p = 0; p < vars_.size(); ++p) e[p] = basis_[x].second[p] + basis_[y].second[p];
                for (const auto &term : balg.product(basis_[x].first, basis_[y].first)) t[{term.index, e}] += term.coeff;
                reduce(t);
                for (const auto &[k, c] : t) {
                    if (c != 0) table[x][y].push_back(Algebra::Term{index_.at(k), c});
                }
                table[y][x] = table[x][y];
            }
        }
        alg_ = std::make_shared<const Algebra>(std::move(names), std::move(degrees), std::move(table));
    }

    BaseRing base_;
    std::vector<BundleData> bundles_;
    IndexSet vars_;
    AlgebraPtr alg_;
    std::vector<Key> basis_;
    std::map<Key, std::size_t> index_;
};

// Inclusion of the ring on S into the ring on S' (S a subset of S').
template <class C>
Element<C> pullback(const FixedLocusRing &from, const FixedLocusRing &to, const Element<C> &x)
{
    if (x.algebra() != from.algebra()) throw internal_error("pullback: element is not in the source ring");
    Element<C> r(to.algebra());
    for (std::size_t k = 0; k < x.dim(); ++k) {
        if (coeff_is_zero(x.coeff(k))) continue;
        const auto &[b, e] = from.basis_data(k);
        std::vector<int> f(to.vars().size(), 0);
        for (std::size_t p = 0; p < from.vars().size(); ++p) {
            const int i = from.vars()[p];
            if (!to.has_var(i)) throw internal_error("pullback: target ring lacks a source variable");
            f[to.var_position(i)] = e[p];
        }
        r.coeff(to.index(b, f)) = x.coeff(k);
    }
    return r;
}

// Projective bundle pushforward along the edge ring -> vertex ring, where the
// edge ring has exactly one extra variable j: u_j^n |-> s_{n - r + 1}(V_j).
template <class C>
Element<C> pushforward(const FixedLocusRing &edge, const FixedLocusRing &vertex, const Element<C> &x)
{
    if (x.algebra() != edge.algebra()) throw internal_error("pushforward: element is not in the edge ring");
    int extra = -1;
    for (int i : edge.vars()) {
        if (!vertex.has_var(i)) {
            if (extra >= 0) throw internal_error("pushforward: edge ring has more than one extra variable");
            extra = i;
        }
    }
    if (extra < 0 || vertex.vars().size() + 1 != edge.vars().size()) throw internal_error("pushforward: bad rings");
    const auto &v = edge.bundles().at(static_cast<std::size_t>(extra));
    const auto segre = segre_classes(v, v.rank + vertex.algebra()->top_degree());
    const std::size_t pe = edge.var_position(extra);
    Element<C> r(vertex.algebra());
    for (std::size_t k = 0; k < x.dim(); ++k) {
        if (coeff_is_zero(x.coeff(k))) continue;
        const auto &[b, e] = edge.basis_data(k);
        const int n = e[pe] - v.rank + 1;
        if (n < 0) continue;
        std::vector<int> f;
        for (std::size_t p = 0; p < e.size(); ++p) {
            if (p != pe) f.push_back(e[p]);
        }
        Element<C> mono = Element<C>::basis(vertex.algebra(), vertex.index(b, f), x.coeff(k));
        r += mono * vertex.template from_base<C>(segre.at(static_cast<std::size_t>(n)));
    }
    return r;
}

// Restriction of u_i to the fixed locus of alpha:
// u_i for i in alpha, otherwise -lambda_i + sum_{j in alpha} D_i(D^vee_{alpha,j}) (u_j + lambda_j).
// `lambda[i]` is the image of lambda_i in the ring.
template <class C>
Element<C> restrict_u(const Atlas &atlas, const FixedPoint &fp, const FixedLocusRing &ring, int i,
                      const std::vector<Element<C>> &lambda)
{
    if (fp.contains(i)) return ring.template u<C>(i);
    Element<C> r = -lambda.at(static_cast<std::size_t>(i));
    for (int j : fp.alpha) {
        const long a = restriction_coefficient(atlas.data(), fp, i, j);
        if (a == 0) continue;
        r += (ring.template u<C>(j) + lambda.at(static_cast<std::size_t>(j))) * C(Rational(a));
    }
    return r;
}

// lambda_i as polynomial variables.
inline std::vector<PolyElem> symbolic_lambda(const FixedLocusRing &ring, int n)
{
    std::vector<PolyElem> out;
    for (int i = 0; i < n; ++i) out.push_back(PolyElem::scalar(ring.algebra(), MultiPoly::variable(static_cast<std::size_t>(i))));
    return out;
}

// Rings and restriction data for one toric bundle.
class FixedLociModel
{
public:
    FixedLociModel(std::shared_ptr<const Atlas> atlas, BaseRing base, std::vector<BundleData> bundles)
        : atlas_(std::move(atlas)), base_(std::move(base)), bundles_(std::move(bundles))
    {
        if (bundles_.size() != static_cast<std::size_t>(atlas_->data().N())) {
            throw input_error("need exactly one bundle per divisor vector");
        }
        for (const auto &v : bundles_) {
            if (v.algebra() != base_.algebra) throw input_error("bundle " + v.name + " is not over the base ring");
            v.check();
        }
        for (const auto &fp : atlas_->points()) vertex_.push_back(std::make_shared<FixedLocusRing>(base_, bundles_, fp.alpha));
        for (std::size_t a = 0; a < atlas_->points().size(); ++a) {
            for (const auto &rec : atlas_->adjacency(a)) {
                const auto key = edge_key(a, rec.beta);
                if (edge_.count(key)) continue;
                IndexSet s = atlas_->point(a).alpha;
                s.push_back(rec.i_ab);
                std::sort(s.begin(), s.end());
                edge_[key] = std::make_shared<FixedLocusRing>(base_, bundles_, s);
            }
        }
    }

    const Atlas &atlas() const { return *atlas_; }
    const std::shared_ptr<const Atlas> &atlas_ptr() const { return atlas_; }
    const BaseRing &base() const { return base_; }
    const std::vector<BundleData> &bundles() const { return bundles_; }
    const FixedLocusRing &vertex(std::size_t a) const { return *vertex_.at(a); }
    const FixedLocusRing &edge(std::size_t a, std::size_t b) const { return *edge_.at(edge_key(a, b)); }

    template <class C>
    Element<C> restrict(std::size_t a, int i, const std::vector<Element<C>> &lambda) const
    {
        return restrict_u<C>(*atlas_, atlas_->point(a), vertex(a), i, lambda);
    }

    // c_1(L_{alpha,beta}) = -u_{i_ab} + p^* restrict_alpha(u_{i_ab}) in the edge ring.
    template <class C>
    Element<C> c1_L(std::size_t a, std::size_t b, const std::vector<Element<C>> &lambda_alpha) const
    {
        const auto &rec = atlas_->find_edge(a, b);
        const auto &e = edge(a, b);
        return pullback<C>(vertex(a), e, restrict<C>(a, rec.i_ab, lambda_alpha)) - e.template u<C>(rec.i_ab);
    }

    // e_T(N_alpha) = prod_{i not in alpha} R_{V_i}(restrict_alpha(u_i)).
    template <class C>
    Element<C> euler_normal(std::size_t a, const std::vector<Element<C>> &lambda) const
    {
        const auto &ring = vertex(a);
        Element<C> e = Element<C>::one(ring.algebra());
        for (int i = 0; i < atlas_->data().N(); ++i) {
            if (atlas_->point(a).contains(i)) continue;
            e = e * ring.chern_poly_at<C>(i, restrict<C>(a, i, lambda));
        }
        return e;
    }

    // p_beta^* restrict_beta(u_i) == p_alpha^* restrict_alpha(u_i) - D_i(d_ab) c_1(L_ab), symbolically in lambda.
    bool check_comparison_identity(std::size_t a, std::size_t b, int i, std::string *witness = nullptr) const
    {
        const auto &rec = atlas_->find_edge(a, b);
        const auto &e = edge(a, b);
        const int n = atlas_->data().N();
        const auto la = symbolic_lambda(vertex(a), n);
        const auto lb = symbolic_lambda(vertex(b), n);
        const PolyElem lhs = pullback<MultiPoly>(vertex(b), e, restrict<MultiPoly>(b, i, lb));
        const PolyElem rhs = pullback<MultiPoly>(vertex(a), e, restrict<MultiPoly>(a, i, la))
                             - c1_L<MultiPoly>(a, b, la) * MultiPoly(Rational(atlas_->data().pairing(i, rec.d_ab)));
        if (lhs == rhs) return true;
        if (witness) *witness = "lhs = " + lhs.str(lambda_names()) + "; rhs = " + rhs.str(lambda_names());
        return false;
    }

    std::vector<std::string> lambda_names() const
    {
        std::vector<std::string> out;
        for (int i = 0; i < atlas_->data().N(); ++i) out.push_back("l" + std::to_string(i + 1));
        return out;
    }

private:
    static std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b)
    {
        return {std::min(a, b), std::max(a, b)};
    }

    std::shared_ptr<const Atlas> atlas_;
    BaseRing base_;
    std::vector<BundleData> bundles_;
    std::vector<std::shared_ptr<FixedLocusRing>> vertex_;
    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<FixedLocusRing>> edge_;
};

} // namespace toricmirror

#endif
