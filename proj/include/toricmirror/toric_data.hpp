#ifndef TORICMIRROR_TORIC_DATA_HPP
#define TORICMIRROR_TORIC_DATA_HPP

#include <toricmirror/lattice.hpp>
#include <toricmirror/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

// Index sets are 0-based internally and printed 1-based.
using IndexSet = std::vector<int>;

inline std::string format_index_set(const IndexSet &s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i] + 1);
    }
    return out + "}";
}

inline std::string format_vector(const IntVec &v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + ")";
}

// Rational constant plus a rational linear form in lambda_1..lambda_N.
class EquivariantScalar
{
public:
    EquivariantScalar() = default;
    explicit EquivariantScalar(Rational c) : constant_(std::move(c)) {}

    static EquivariantScalar lambda(int i)
    {
        EquivariantScalar s;
        s.coeffs_[i] = 1;
        return s;
    }

    const Rational &constant() const { return constant_; }
    const std::map<int, Rational> &coeffs() const { return coeffs_; }

    Rational coeff(int i) const
    {
        auto it = coeffs_.find(i);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    bool is_zero() const { return constant_ == 0 && coeffs_.empty(); }
    bool is_pure_form() const { return constant_ == 0 && !coeffs_.empty(); }

    EquivariantScalar &operator+=(const EquivariantScalar &o)
    {
        constant_ += o.constant_;
        for (const auto &[i, c] : o.coeffs_) add_term(i, c);
        return *this;
    }
    EquivariantScalar &operator-=(const EquivariantScalar &o) { return *this += o * Rational(-1); }
    friend EquivariantScalar operator+(EquivariantScalar a, const EquivariantScalar &b) { return a += b; }
    friend EquivariantScalar operator-(EquivariantScalar a, const EquivariantScalar &b) { return a -= b; }
    friend EquivariantScalar operator-(const EquivariantScalar &a) { return a * Rational(-1); }
    friend EquivariantScalar operator*(EquivariantScalar a, const Rational &q)
    {
        if (q == 0) return EquivariantScalar();
        a.constant_ *= q;
        for (auto &[i, c] : a.coeffs_) c *= q;
        return a;
    }
    friend bool operator==(const EquivariantScalar &a, const EquivariantScalar &b)
    {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }

    Rational evaluate(const std::vector<Rational> &lambda) const
    {
        Rational v = constant_;
        for (const auto &[i, c] : coeffs_) v += c * lambda.at(static_cast<std::size_t>(i));
        return v;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (const auto &[i, c] : coeffs_) {
            const bool neg = c < 0;
            const Rational a = neg ? Rational(-c) : c;
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            if (a != 1) os << a.get_str() << "*";
            os << "l" << (i + 1);
            first = false;
        }
        if (constant_ != 0 || first) {
            if (!first) os << (constant_ < 0 ? " - " : " + ") << Rational(abs(constant_)).get_str();
            else os << constant_.get_str();
        }
        return os.str();
    }

private:
    void add_term(int i, const Rational &c)
    {
        Rational &slot = coeffs_[i];
        slot += c;
        if (slot == 0) coeffs_.erase(i);
    }

    Rational constant_ = 0;
    std::map<int, Rational> coeffs_;
};

struct ToricData {
    int K = 0;
    std::vector<IntVec> D;
    RatVec omega;

    int N() const { return static_cast<int>(D.size()); }
    long pairing(int i, const IntVec &ell) const { return dot(D[static_cast<std::size_t>(i)], ell); }

    // Structural checks only; throws input_error.
    void check_structure() const
    {
        if (K < 1) throw input_error("toric data: K must be positive");
        if (N() < K) throw input_error("toric data: need N >= K divisor vectors");
        if (omega.size() != static_cast<std::size_t>(K)) throw input_error("toric data: omega has wrong length");
        for (std::size_t i = 0; i < D.size(); ++i) {
            if (D[i].size() != static_cast<std::size_t>(K)) {
                throw input_error("toric data: D_" + std::to_string(i + 1) + " has wrong length");
            }
        }
        if (N() > 20) throw input_error("toric data: N > 20 is not supported");
    }

    std::vector<IntVec> vectors(const IndexSet &I) const
    {
        std::vector<IntVec> out;
        for (int i : I) out.push_back(D[static_cast<std::size_t>(i)]);
        return out;
    }
};

inline std::vector<IndexSet> all_subsets(int n)
{
    std::vector<IndexSet> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        IndexSet s;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.push_back(i);
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Anti-cones in lexicographic order, decided by exact LP feasibility.
inline std::vector<IndexSet> compute_anticones(const ToricData &data)
{
    data.check_structure();
    std::vector<IndexSet> out;
    for (auto &I : all_subsets(data.N())) {
        if (in_cone(data.vectors(I), data.omega)) out.push_back(std::move(I));
    }
    std::set<IndexSet> as_set(out.begin(), out.end());
    for (const auto &I : out) {
        for (int j = 0; j < data.N(); ++j) {
            if (std::binary_search(I.begin(), I.end(), j)) continue;
            IndexSet J = I;
            J.insert(std::upper_bound(J.begin(), J.end(), j), j);
            if (!as_set.count(J)) throw internal_error("anti-cones are not upward closed");
        }
    }
    return out;
}

struct ValidationReport {
    bool pass = true;
    bool degenerate = false;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    std::vector<IndexSet> anticones;
};

inline ValidationReport validate_smooth_toric_data(const ToricData &data, bool allow_degenerate = false)
{
    data.check_structure();
    ValidationReport rep;
    const std::size_t K = static_cast<std::size_t>(data.K);
    IndexSet everything(static_cast<std::size_t>(data.N()));
    for (int i = 0; i < data.N(); ++i) everything[static_cast<std::size_t>(i)] = i;
    if (!in_cone(data.vectors(everything), data.omega)) {
        rep.pass = false;
        rep.violations.push_back("cone condition: LP infeasible, omega is not in the cone spanned by all D_i");
        return rep;
    }
    rep.anticones = compute_anticones(data);
    const bool omega_zero = std::all_of(data.omega.begin(), data.omega.end(), [](const Rational &q) { return q == 0; });
    for (const auto &I : rep.anticones) {
        const auto gens = data.vectors(I);
        if (rank_of(gens, K) < K) {
            rep.degenerate = true;
            const std::string msg = "omega is degenerate: anti-cone " + format_index_set(I) + " has rank < K";
            if (allow_degenerate) {
                rep.warnings.push_back(msg);
                continue;
            }
            rep.pass = false;
            rep.violations.push_back(msg + " (use --allow-degenerate to override)");
            return rep;
        }
        const Integer idx = sublattice_index(gens, K);
        if (idx != 1) {
            rep.pass = false;
            rep.violations.push_back("unimodularity: anti-cone " + format_index_set(I) + " spans a sublattice of index "
                                     + idx.get_str());
            return rep;
        }
    }
    if (omega_zero) {
        rep.degenerate = true;
        if (!allow_degenerate) {
            rep.pass = false;
            rep.violations.push_back("omega is zero (use --allow-degenerate to override)");
        }
    }
    return rep;
}

struct FixedPoint {
    IndexSet alpha;
    // dual[j] is D^vee_{alpha, alpha[j]}: D_{alpha[j']}(dual[j]) = delta.
    std::vector<IntVec> dual;

    bool contains(int i) const { return std::binary_search(alpha.begin(), alpha.end(), i); }
    std::size_t position(int i) const
    {
        return static_cast<std::size_t>(std::lower_bound(alpha.begin(), alpha.end(), i) - alpha.begin());
    }
    const IntVec &dual_vector(int i) const { return dual.at(position(i)); }
    std::string name() const { return format_index_set(alpha); }
};

struct AdjacencyRecord {
    std::size_t alpha = 0; // indices into Atlas::points
    std::size_t beta = 0;
    int i_ab = 0;          // the element of beta \ alpha
    int i_ba = 0;          // the element of alpha \ beta
    IntVec d_ab;
    EquivariantScalar lambda_ab;
};

inline std::vector<FixedPoint> fixed_points(const ToricData &data, const std::vector<IndexSet> &anticones)
{
    std::vector<FixedPoint> out;
    const std::size_t K = static_cast<std::size_t>(data.K);
    for (const auto &I : anticones) {
        if (I.size() != K) continue;
        RatMatrix M(K, RatVec(K));
        for (std::size_t c = 0; c < K; ++c) {
            for (std::size_t r = 0; r < K; ++r) M[r][c] = data.D[static_cast<std::size_t>(I[c])][r];
        }
        const Rational det = determinant(M);
        if (det == 0) continue;
        if (det != 1 && det != -1) {
            throw precondition_error("smoothness violation: anti-cone " + format_index_set(I) + " has determinant "
                                     + det.get_str());
        }
        const auto inv = *inverse(M);
        FixedPoint fp;
        fp.alpha = I;
        for (std::size_t j = 0; j < K; ++j) {
            IntVec v(K);
            for (std::size_t r = 0; r < K; ++r) v[r] = inv[j][r].get_num().get_si();
            fp.dual.push_back(std::move(v));
        }
        for (std::size_t j = 0; j < K; ++j) {
            for (std::size_t jj = 0; jj < K; ++jj) {
                if (data.pairing(I[jj], fp.dual[j]) != (j == jj ? 1 : 0)) throw internal_error("dual basis inconsistent");
            }
        }
        out.push_back(std::move(fp));
    }
    return out;
}

// Coefficient D_i(D^vee_{alpha,j}) for j in alpha.
inline long restriction_coefficient(const ToricData &data, const FixedPoint &fp, int i, int j)
{
    return data.pairing(i, fp.dual_vector(j));
}

// Scalar part of the restriction of u_i to alpha:
// -lambda_i + sum_{j in alpha} D_i(D^vee_{alpha,j}) lambda_j (zero for i in alpha).
inline EquivariantScalar restriction_weight(const ToricData &data, const FixedPoint &fp, int i)
{
    if (fp.contains(i)) return EquivariantScalar();
    EquivariantScalar s = -EquivariantScalar::lambda(i);
    for (int j : fp.alpha) s += EquivariantScalar::lambda(j) * Rational(restriction_coefficient(data, fp, i, j));
    return s;
}

class Atlas
{
public:
    Atlas() = default;

    explicit Atlas(ToricData data, bool allow_degenerate = false) : data_(std::move(data))
    {
        validation_ = validate_smooth_toric_data(data_, allow_degenerate);
        if (!validation_.pass) {
            throw precondition_error("toric data fails validation: " + validation_.violations.front());
        }
        anticones_ = validation_.anticones;
        points_ = fixed_points(data_, anticones_);
        adjacency_.resize(points_.size());
        for (std::size_t a = 0; a < points_.size(); ++a) {
            for (std::size_t b = 0; b < points_.size(); ++b) {
                if (a == b) continue;
                IndexSet b_minus_a, a_minus_b;
                std::set_difference(points_[b].alpha.begin(), points_[b].alpha.end(), points_[a].alpha.begin(),
                                    points_[a].alpha.end(), std::back_inserter(b_minus_a));
                if (b_minus_a.size() != 1) continue;
                std::set_difference(points_[a].alpha.begin(), points_[a].alpha.end(), points_[b].alpha.begin(),
                                    points_[b].alpha.end(), std::back_inserter(a_minus_b));
                AdjacencyRecord rec;
                rec.alpha = a;
                rec.beta = b;
                rec.i_ab = b_minus_a[0];
                rec.i_ba = a_minus_b[0];
                rec.d_ab = points_[a].dual_vector(rec.i_ba);
                if (rec.d_ab != points_[b].dual_vector(rec.i_ab)) {
                    throw internal_error("the two formulas for the curve class of edge " + points_[a].name() + "-"
                                         + points_[b].name() + " disagree");
                }
                rec.lambda_ab = restriction_weight(data_, points_[a], rec.i_ab);
                adjacency_[a].push_back(std::move(rec));
            }
        }
        for (std::size_t a = 0; a < points_.size(); ++a) {
            for (const auto &rec : adjacency_[a]) {
                if (!(find_edge(rec.beta, a).lambda_ab == -rec.lambda_ab)) {
                    throw internal_error("edge weight is not antisymmetric");
                }
            }
        }
    }

    const ToricData &data() const { return data_; }
    const ValidationReport &validation() const { return validation_; }
    const std::vector<IndexSet> &anticones() const { return anticones_; }
    const std::vector<FixedPoint> &points() const { return points_; }
    const FixedPoint &point(std::size_t a) const { return points_.at(a); }
    const std::vector<AdjacencyRecord> &adjacency(std::size_t a) const { return adjacency_.at(a); }

    const AdjacencyRecord &find_edge(std::size_t a, std::size_t b) const
    {
        for (const auto &rec : adjacency_.at(a)) {
            if (rec.beta == b) return rec;
        }
        throw precondition_error("fixed points " + points_.at(a).name() + " and " + points_.at(b).name()
                                 + " are not adjacent");
    }

    std::size_t index_of(const IndexSet &alpha) const
    {
        for (std::size_t a = 0; a < points_.size(); ++a) {
            if (points_[a].alpha == alpha) return a;
        }
        throw precondition_error(format_index_set(alpha) + " is not a fixed point");
    }

    bool in_Leff(const IntVec &ell) const
    {
        for (const auto &I : minimal_anticones()) {
            bool ok = true;
            for (int i : I) {
                if (data_.pairing(i, ell) < 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    }

    std::vector<IndexSet> minimal_anticones() const
    {
        std::vector<IndexSet> out;
        for (const auto &I : anticones_) {
            bool minimal = true;
            for (const auto &J : out) {
                if (std::includes(I.begin(), I.end(), J.begin(), J.end())) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) out.push_back(I);
        }
        return out;
    }

private:
    ToricData data_;
    ValidationReport validation_;
    std::vector<IndexSet> anticones_;
    std::vector<FixedPoint> points_;
    std::vector<std::vector<AdjacencyRecord>> adjacency_;
};

// Rational linear form on L, required to be strictly positive on L_eff \ {0}.
struct DegreeFunctional {
    RatVec weights;

    Rational operator()(const IntVec &ell) const { return dot(ell, weights); }
};

// Certifies strict positivity on the extreme rays of every generating subcone.
inline void certify_degree_functional(const Atlas &atlas, const DegreeFunctional &phi)
{
    const std::size_t K = static_cast<std::size_t>(atlas.data().K);
    if (phi.weights.size() != K) throw input_error("degree functional has wrong length");
    for (const auto &I : atlas.minimal_anticones()) {
        const auto rows = atlas.data().vectors(I);
        if (rank_of(rows, K) < K) {
            throw precondition_error("subcone of anti-cone " + format_index_set(I) + " is not pointed");
        }
        for (const auto &ray : extreme_rays(rows, K)) {
            const Rational v = phi(ray);
            if (v <= 0) {
                throw precondition_error("degree functional is not strictly positive on L_eff: ray "
                                         + format_vector(ray) + " has degree " + v.get_str());
            }
        }
    }
}

// All ell in L_eff with phi(ell) <= cutoff, sorted by (degree, lexicographic).
inline std::vector<IntVec> enumerate_Leff(const Atlas &atlas, const DegreeFunctional &phi, long cutoff)
{
    const std::size_t K = static_cast<std::size_t>(atlas.data().K);
    certify_degree_functional(atlas, phi);
    if (cutoff < 0) return {};
    // Box bound: within a subcone, ell = sum a_r r with a_r >= 0, so
    // |ell_j| <= sum_r a_r |r_j| <= cutoff * sum_r |r_j| / phi(r).
    std::vector<long> bound(K, 0);
    for (const auto &I : atlas.minimal_anticones()) {
        const auto rays = extreme_rays(atlas.data().vectors(I), K);
        for (std::size_t j = 0; j < K; ++j) {
            Rational s = 0;
            for (const auto &r : rays) s += Rational(std::abs(r[j])) / phi(r);
            s *= cutoff;
            Integer c;
            mpz_cdiv_q(c.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
            bound[j] = std::max(bound[j], c.get_si());
        }
    }
    std::vector<IntVec> out;
    IntVec ell(K);
    for (std::size_t j = 0; j < K; ++j) ell[j] = -bound[j];
    while (true) {
        if (phi(ell) <= cutoff && atlas.in_Leff(ell)) out.push_back(ell);
        std::size_t j = 0;
        while (j < K && ell[j] == bound[j]) {
            ell[j] = -bound[j];
            ++j;
        }
        if (j == K) break;
        ++ell[j];
    }
    std::sort(out.begin(), out.end(), [&](const IntVec &a, const IntVec &b) {
        const Rational da = phi(a), db = phi(b);
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

} // namespace toricmirror

#endif
