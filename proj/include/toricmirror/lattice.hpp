#ifndef TORICMIRROR_LATTICE_HPP
#define TORICMIRROR_LATTICE_HPP

#include <toricmirror/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

// Exact linear algebra over Z and Q at small dimensions.

namespace toricmirror
{

using IntVec = std::vector<long>;
using RatVec = std::vector<Rational>;
using RatMatrix = std::vector<RatVec>;

inline long dot(const IntVec &a, const IntVec &b)
{
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rational dot(const IntVec &a, const RatVec &b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Row reduction to reduced echelon form; returns rank and the pivot columns.
inline std::size_t row_reduce(RatMatrix &m, std::vector<std::size_t> *pivots = nullptr)
{
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const Rational inv = 1 / m[r][c];
        for (auto &x : m[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    return r;
}

inline std::size_t rank_of(const std::vector<IntVec> &vectors, std::size_t dim)
{
    RatMatrix m;
    for (const auto &v : vectors) {
        RatVec row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = v[j];
        m.push_back(std::move(row));
    }
    return row_reduce(m);
}

inline Rational determinant(RatMatrix m)
{
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            const Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

inline std::optional<RatMatrix> inverse(const RatMatrix &a)
{
    const std::size_t n = a.size();
    RatMatrix aug(n, RatVec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<std::size_t> piv;
    if (row_reduce(aug, &piv) < n || piv.back() >= n) return std::nullopt;
    RatMatrix inv(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    }
    return inv;
}

// Index of the sublattice of Z^dim spanned by the given vectors, via a
// column-style Hermite normal form over Z. Returns 0 for infinite index.
inline Integer sublattice_index(const std::vector<IntVec> &vectors, std::size_t dim)
{
    // Rows of `m` are the generators; unimodular row operations only.
    std::vector<std::vector<Integer>> m;
    for (const auto &v : vectors) {
        std::vector<Integer> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = v[j];
        m.push_back(std::move(row));
    }
    Integer index = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        // Euclid on column c among rows r.. until a single nonzero remains.
        while (true) {
            std::size_t best = m.size();
            for (std::size_t i = r; i < m.size(); ++i) {
                if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c]))) best = i;
            }
            if (best == m.size()) return 0;
            std::swap(m[r], m[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
                for (std::size_t j = c; j < dim; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        index *= abs(m[r][c]);
        ++r;
    }
    return index;
}

// Exact phase-one simplex: returns x >= 0 with A x = b, or nullopt if
// infeasible. Bland's rule, so it terminates.
inline std::optional<RatVec> lp_feasible(const RatMatrix &A, const RatVec &b)
{
    const std::size_t m = A.size();
    const std::size_t n = m == 0 ? 0 : A[0].size();
    if (m == 0) return RatVec(n, Rational(0));
    // Tableau columns: n originals, m artificials, rhs.
    RatMatrix t(m, RatVec(n + m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        const int s = b[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = s * A[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = s * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
    // Objective: minimise sum of artificials. Reduced costs for columns.
    auto reduced_cost = [&](std::size_t j) {
        Rational c = j >= n ? Rational(1) : Rational(0);
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] >= n) c -= t[i][j];
        }
        return c;
    };
    while (true) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (reduced_cost(j) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == n + m) break;
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][n + m] / t[i][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw internal_error("phase-one simplex is unbounded");
        const Rational piv = t[leave][enter];
        for (auto &x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    RatVec x(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            if (t[i][n + m] != 0) return std::nullopt;
        } else {
            x[basis[i]] = t[i][n + m];
        }
    }
    return x;
}

// Is `target` in the nonnegative rational cone spanned by `gens` (vectors in Q^dim)?
inline bool in_cone(const std::vector<IntVec> &gens, const RatVec &target)
{
    const std::size_t dim = target.size();
    if (gens.empty()) {
        return std::all_of(target.begin(), target.end(), [](const Rational &q) { return q == 0; });
    }
    RatMatrix A(dim, RatVec(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
        for (std::size_t i = 0; i < dim; ++i) A[i][j] = gens[j][i];
    }
    return lp_feasible(A, target).has_value();
}

// Extreme rays of the pointed cone {x in Q^dim : <rows_i, x> >= 0}. The rows
// must span Q^dim. Each ray is returned as a primitive integer vector.
inline std::vector<IntVec> extreme_rays(const std::vector<IntVec> &rows, std::size_t dim)
{
    std::vector<IntVec> rays;
    if (dim == 1) {
        bool pos = true, neg = true;
        for (const auto &r : rows) {
            if (r[0] > 0) neg = false;
            if (r[0] < 0) pos = false;
        }
        if (pos) rays.push_back({1});
        if (neg) rays.push_back({-1});
        return rays;
    }
    const std::size_t n = rows.size();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(std::min(n, dim - 1)), true);
    if (n < dim - 1) return rays;
    std::sort(pick.begin(), pick.end(), std::greater<bool>());
    do {
        RatMatrix m;
        for (std::size_t i = 0; i < n; ++i) {
            if (!pick[i]) continue;
            RatVec row(dim);
            for (std::size_t j = 0; j < dim; ++j) row[j] = rows[i][j];
            m.push_back(std::move(row));
        }
        std::vector<std::size_t> piv;
        if (row_reduce(m, &piv) != dim - 1) continue;
        // One free column; kernel vector from the reduced form.
        std::size_t free_col = 0;
        while (std::find(piv.begin(), piv.end(), free_col) != piv.end()) ++free_col;
        RatVec k(dim, Rational(0));
        k[free_col] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) k[piv[r]] = -m[r][free_col];
        Integer l = 1;
        for (const auto &q : k) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        std::vector<Integer> ki(dim);
        Integer g = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            Rational s = k[j] * l;
            ki[j] = s.get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ki[j].get_mpz_t());
        }
        for (int sign : {1, -1}) {
            IntVec v(dim);
            for (std::size_t j = 0; j < dim; ++j) v[j] = sign * Integer(ki[j] / g).get_si();
            bool ok = std::all_of(rows.begin(), rows.end(), [&](const IntVec &r) { return dot(r, v) >= 0; });
            if (ok && std::find(rays.begin(), rays.end(), v) == rays.end()) rays.push_back(v);
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(rays.begin(), rays.end());
    return rays;
}

} // namespace toricmirror

#endif
