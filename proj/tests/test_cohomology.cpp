#include <toricmirror/cohomology.hpp>

#include <gtest/gtest.h>

using namespace toricmirror;

namespace
{

Elem h(const BaseRing &b, int power = 1, Rational c = 1)
{
    return Elem::basis(b.algebra, static_cast<std::size_t>(power), c);
}

// Omega_{P^2}(1): c_1 = -h, c_2 = h^2.
BundleData omega_p2(const BaseRing &p2)
{
    BundleData v;
    v.name = "Omega(1)";
    v.rank = 2;
    v.chern = {h(p2, 1, -1), h(p2, 2, 1)};
    return v;
}

// Oracle: B_m = m! [x^m] 1 / ((e^x - 1)/x), by power-series division.
std::vector<Rational> bernoulli_by_division(int m_max)
{
    std::vector<Rational> d(static_cast<std::size_t>(m_max) + 1), q(static_cast<std::size_t>(m_max) + 1);
    Rational f = 1;
    for (int n = 0; n <= m_max; ++n) {
        f *= (n + 1);
        d[static_cast<std::size_t>(n)] = 1 / f;
    }
    for (int n = 0; n <= m_max; ++n) {
        Rational s = n == 0 ? Rational(1) : Rational(0);
        for (int k = 1; k <= n; ++k) s -= d[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(n - k)];
        q[static_cast<std::size_t>(n)] = s / d[0];
    }
    Rational fact = 1;
    for (int n = 0; n <= m_max; ++n) {
        if (n) fact *= n;
        q[static_cast<std::size_t>(n)] *= fact;
    }
    return q;
}

} // namespace

TEST(base_ring, builders)
{
    EXPECT_EQ(base_projective(0).algebra->dim(), 1u);
    const auto p2 = base_projective(2);
    EXPECT_EQ(h(p2) * h(p2), h(p2, 2));
    EXPECT_TRUE((h(p2) * h(p2, 2)).is_zero());
    const auto pp = base_product(base_projective(1), base_projective(1));
    const Elem a = Elem::basis(pp.algebra, pp.curve_duals[0]);
    const Elem b = Elem::basis(pp.algebra, pp.curve_duals[1]);
    EXPECT_FALSE((a * b).is_zero());
    EXPECT_TRUE((a * a).is_zero());
    EXPECT_EQ(pp.algebra->name(pp.curve_duals[0]), "h_1");
}

TEST(base_ring, custom_validation)
{
    // Not associative/commutative tables are rejected.
    Algebra::Table t(2, std::vector<std::vector<Algebra::Term>>(2));
    t[0][0] = {{0, 1}};
    t[0][1] = {{1, 1}};
    t[1][0] = {{1, 2}};
    EXPECT_THROW(Algebra({"1", "x"}, {0, 1}, t), input_error);
}

TEST(chern, chern_poly_examples)
{
    const auto p2 = base_projective(2);
    auto r = chern_poly(trivial_bundle(p2));
    EXPECT_EQ(r.size(), 2u);
    EXPECT_TRUE(r[1].is_zero());
    r = chern_poly(split_bundle_projective(p2, {-1}));
    EXPECT_EQ(r[1], h(p2, 1, -1));
    r = chern_poly(omega_p2(p2));
    EXPECT_EQ(r[1], h(p2, 1, -1));
    EXPECT_EQ(r[2], h(p2, 2));
}

TEST(chern, omega_from_euler_sequence)
{
    // c(T(-1)) = 1/(1 - h) = 1 + h + h^2; Omega(1) is its dual, c_j -> (-1)^j c_j.
    const auto p2 = base_projective(2);
    const auto v = omega_p2(p2);
    EXPECT_EQ(v.c(1), h(p2, 1, 1) * Rational(-1));
    EXPECT_EQ(v.c(2), h(p2, 2, 1));
}

TEST(chern, segre)
{
    const auto p2 = base_projective(2);
    auto s = segre_classes(trivial_bundle(p2, 3), 4);
    for (int i = 1; i <= 4; ++i) EXPECT_TRUE(s[static_cast<std::size_t>(i)].is_zero());
    s = segre_classes(split_bundle_projective(p2, {-1}), 2);
    EXPECT_EQ(s[1], h(p2));
    EXPECT_EQ(s[2], h(p2, 2));
    s = segre_classes(omega_p2(p2), 2);
    EXPECT_EQ(s[1], h(p2));
    EXPECT_TRUE(s[2].is_zero());
}

TEST(chern, chern_character)
{
    const auto p2 = base_projective(2);
    auto ch = chern_character(trivial_bundle(p2, 3), 3);
    EXPECT_EQ(ch[0], Elem::one(p2.algebra) * Rational(3));
    EXPECT_TRUE(ch[1].is_zero());
    ch = chern_character(split_bundle_projective(p2, {-1}), 3);
    EXPECT_EQ(ch[1], h(p2, 1, -1));
    EXPECT_EQ(ch[2], h(p2, 2, Rational(1, 2)));
    EXPECT_TRUE(ch[3].is_zero());
    const auto v = omega_p2(p2);
    ch = chern_character(v, 2);
    EXPECT_EQ(ch[2], (v.c(1) * v.c(1) - v.c(2) * Rational(2)) * Rational(1, 2));
}

TEST(chern, ch_is_additive_and_segre_dual)
{
    const auto p3 = base_projective(3);
    const auto a = split_bundle_projective(p3, {-1, 2});
    const auto b = split_bundle_projective(p3, {3});
    const auto s = direct_sum(a, b);
    const auto cha = chern_character(a, 4), chb = chern_character(b, 4), chs = chern_character(s, 4);
    for (int l = 0; l <= 4; ++l) EXPECT_EQ(chs[static_cast<std::size_t>(l)], cha[static_cast<std::size_t>(l)] + chb[static_cast<std::size_t>(l)]);
    EXPECT_NO_THROW(segre_classes(s, 6));
}

TEST(bernoulli, values)
{
    const auto b = bernoulli(12);
    EXPECT_EQ(b[0], 1);
    EXPECT_EQ(b[1], Rational(-1, 2));
    EXPECT_EQ(b[2], Rational(1, 6));
    EXPECT_EQ(b[3], 0);
    EXPECT_EQ(b[12], Rational(-691, 2730));
    EXPECT_EQ(b, bernoulli_by_division(12));
}

TEST(qrr, trivial_line_bundle_z1_coefficient)
{
    const auto pt = base_point();
    const auto v = trivial_bundle(pt);
    const auto chi = EquivariantScalar::lambda(0);
    const auto plus = qrr_delta(v, chi, 1, 3);
    const auto minus = qrr_delta(v, chi, -1, 3);
    EXPECT_EQ(plus.coefficient(1, 1), Elem::one(pt.algebra) * Rational(1, 12));
    EXPECT_EQ(minus.coefficient(1, 1), Elem::one(pt.algebra) * Rational(-1, 12));
    EXPECT_EQ(plus.coefficient(0, 0), Elem::one(pt.algebra));
}

TEST(qrr, point_base_only_l_zero)
{
    const auto pt = base_point();
    const auto log_delta = qrr_log_delta(trivial_bundle(pt, 2), 1, 6);
    for (const auto &[k, e] : log_delta.terms()) EXPECT_EQ(k.second, k.first);
}

TEST(qrr, log_delta_structure_on_p2)
{
    const auto p2 = base_projective(2);
    const auto log_delta = qrr_log_delta(omega_p2(p2), -1, 6);
    for (const auto &[k, e] : log_delta.terms()) {
        EXPECT_GE(k.first, -1);
        const int l = k.second - k.first;
        EXPECT_GE(l, 0);
        EXPECT_LE(l, 2);
    }
}

TEST(qrr, plus_times_minus_is_one)
{
    const auto p2 = base_projective(2);
    const auto chi = EquivariantScalar::lambda(0) - EquivariantScalar::lambda(1);
    EXPECT_TRUE(check_qrr_inverse(omega_p2(p2), chi, 6));
    EXPECT_TRUE(check_qrr_inverse(split_bundle_projective(p2, {-1, -2}), chi, 6));
    EXPECT_THROW(qrr_delta(omega_p2(p2), EquivariantScalar(), 1, 2), precondition_error);
}

TEST(qrr, novikov_regrade)
{
    const auto p1 = base_projective(1);
    const auto w = split_bundle_projective(p1, {-2});
    NovikovChiSeries f;
    f.emplace(std::vector<long>{3}, ChiSeries::one(p1.algebra, 2));
    f.emplace(std::vector<long>{0}, ChiSeries::one(p1.algebra, 2));
    const auto g = novikov_regrade(p1, w.c(1), f);
    EXPECT_EQ(g.at({3}).coefficient(0, -6), Elem::one(p1.algebra));
    EXPECT_EQ(g.at({0}).coefficient(0, 0), Elem::one(p1.algebra));
    // Re-grading is additive in c_1.
    const auto w2 = split_bundle_projective(p1, {1});
    const auto twice = novikov_regrade(p1, w2.c(1), g);
    EXPECT_EQ(twice, novikov_regrade(p1, direct_sum(w, w2).c(1), f));
    // On a degree-0 class the modified operator is plain multiplication by Delta.
    const auto chi = EquivariantScalar::lambda(0);
    NovikovChiSeries only0;
    only0.emplace(std::vector<long>{0}, ChiSeries::one(p1.algebra, 3));
    EXPECT_EQ(modified_qrr(p1, w, chi, -1, only0, 3).at({0}), qrr_delta(w, chi, -1, 3));
}

TEST(qrr, G_telescoping)
{
    EXPECT_TRUE(check_G_telescoping(0, 4));
    EXPECT_TRUE(check_G_telescoping(1, 4));
    for (int k = 1; k <= 3; ++k) EXPECT_TRUE(check_G_telescoping(k, 8)) << k;
}

TEST(qrr, G_shift_low_order_by_hand)
{
    // (G(l + kz) - G(l))/z = k log l + z k(k+1)/(2l) + O(z^2).
    for (int k = 1; k <= 3; ++k) {
        const auto lhs = (G_function_shifted(Rational(k), 3) - G_function_shifted(0, 3)).shift_z(-1);
        EXPECT_EQ(lhs.terms().at({0, 0, 1}), k);
        EXPECT_EQ(lhs.terms().at({1, -1, 0}), Rational(k * (k + 1)) / 2);
    }
}
