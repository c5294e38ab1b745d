#include <toricmirror/cohomology.hpp>
#include <toricmirror/series.hpp>

#include <gtest/gtest.h>

#include "corpus.hpp"

#include <random>

using namespace toricmirror;

namespace
{

const AlgebraPtr &pt()
{
    static const AlgebraPtr a = Algebra::point();
    return a;
}

Elem q(const Rational &x) { return Elem::one(pt()) * x; }

ZRational lin(const Rational &a) // z - a
{
    return ZRational::linear(q(-a), q(1));
}

ZRational inv_lin(const Rational &a) // 1 / (z - a)
{
    return ZRational(pt(), ZPoly{q(1)}, ZRational::Poles{{a, 1}});
}

ZRational random_zrational(const AlgebraPtr &alg, std::mt19937 &rng)
{
    ZPoly num;
    const int deg = static_cast<int>(rng() % 4);
    for (int i = 0; i <= deg; ++i) {
        Elem c(alg);
        for (std::size_t k = 0; k < alg->dim(); ++k) c.coeff(k) = Rational(static_cast<long>(rng() % 9) - 4);
        num.push_back(c);
    }
    ZRational::Poles poles;
    const int npoles = static_cast<int>(rng() % 3);
    for (int s = 0; s < npoles; ++s) poles[Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2))] += 1 + static_cast<int>(rng() % 2);
    ZRational::Poles canon;
    for (const auto &[a, m] : poles) {
        Rational c = a;
        c.canonicalize();
        canon[c] += m;
    }
    return ZRational(alg, num, canon);
}

} // namespace

TEST(zrational, normalization_cancels_common_factors)
{
    const auto f = lin(3) * inv_lin(3);
    EXPECT_TRUE(f.is_polynomial());
    EXPECT_EQ(f, ZRational::one(pt()));
    EXPECT_EQ((inv_lin(2) - inv_lin(2)).is_zero(), true);
    EXPECT_EQ(ZRational::z_power(pt(), -2) * ZRational::z_power(pt(), 3), ZRational::z_power(pt(), 1));
}

TEST(partial_fractions, textbook_identity)
{
    // 1/(z(z+5)) = 1/(5z) - 1/(5(z+5)).
    const auto f = inv_lin(0) * inv_lin(-5);
    const auto pf = f.partial_fractions();
    EXPECT_TRUE(pf.polynomial.empty());
    ASSERT_EQ(pf.principal.size(), 2u);
    EXPECT_EQ(pf.principal.at(0)[0], q(Rational(1, 5)));
    EXPECT_EQ(pf.principal.at(-5)[0], q(Rational(-1, 5)));
    EXPECT_EQ(f.principal_part(0), inv_lin(0) * Rational(1, 5));
}

TEST(partial_fractions, polynomial_input)
{
    const auto f = ZRational::linear(q(2), q(7)).pow(3);
    const auto pf = f.partial_fractions();
    EXPECT_TRUE(pf.principal.empty());
    EXPECT_EQ(pf.polynomial.size(), 4u);
}

TEST(partial_fractions, projective_line_degree_one)
{
    // 1/(z(l + z)) has principal part -1/(l(z + l)) at z = -l.
    for (const Rational &l : {Rational(3), Rational(-7, 2), Rational(11)}) {
        const auto f = inv_lin(0) * inv_lin(-l);
        EXPECT_EQ(f.principal_part(-l), inv_lin(-l) * Rational(-1 / l));
    }
}

TEST(partial_fractions, reassembly_and_uniqueness_on_random_inputs)
{
    std::mt19937 rng(17);
    const auto p2 = base_projective(2).algebra;
    for (int t = 0; t < 300; ++t) {
        const auto f = random_zrational(t % 2 ? p2 : pt(), rng);
        const auto pf = f.partial_fractions(); // asserts reassembly
        EXPECT_EQ(ZRational::reassemble(f.algebra(), pf), f);
        for (const auto &[a, m] : f.poles()) {
            // P = Prin_a f is the unique part with only a pole at a, vanishing at infinity,
            // such that f - P is regular at a.
            const auto p = f.principal_part(a);
            EXPECT_EQ((f - p).poles().count(a), 0u);
            for (const auto &[b, mb] : p.poles()) EXPECT_EQ(b, a);
            if (!p.is_zero()) {
                EXPECT_LT(p.numerator().size(), static_cast<std::size_t>(p.poles().at(a)) + 1);
            }
        }
    }
}

TEST(prin_at, linear_and_polynomial_multipliers)
{
    std::mt19937 rng(23);
    for (int t = 0; t < 100; ++t) {
        const auto f = random_zrational(pt(), rng), g = random_zrational(pt(), rng);
        for (const auto &[a, m] : f.poles()) {
            EXPECT_EQ((f + g).principal_part(a), f.principal_part(a) + g.principal_part(a));
            const auto poly = ZRational::linear(q(static_cast<long>(rng() % 5)), q(1)) * ZRational::z_power(pt(), 1);
            const auto direct = (poly * f).principal_part(a);
            EXPECT_EQ(((poly * f) - direct).poles().count(a), 0u);
            EXPECT_EQ(direct, (poly * f.principal_part(a)).principal_part(a));
        }
    }
    NovikovSeries s{0, pt(), {}};
    s.add({{}, {1}, 0}, inv_lin(0));
    EXPECT_TRUE(prin_at(s, 5).terms.empty());
}

TEST(substitute_z, scalar_and_nilpotent)
{
    EXPECT_EQ((inv_lin(0) * inv_lin(-5)).evaluate(q(2)), q(Rational(1, 14)));
    const auto p1 = base_projective(1).algebra;
    const Elem h = Elem::basis(p1, 1);
    const Elem one = Elem::one(p1);
    // 1/z at s + n with n^2 = 0 is 1/s - n/s^2.
    const ZRational inv_z = ZRational::z_power(p1, -1);
    EXPECT_EQ(inv_z.evaluate(one * Rational(4) + h), one * Rational(1, 4) - h * Rational(1, 16));
    // 1/(z + l) at l - h is 1/(2l) + h/(4 l^2).
    const Rational l = 6;
    const ZRational f(p1, ZPoly{one}, ZRational::Poles{{-l, 1}});
    EXPECT_EQ(f.evaluate(one * l - h), one * Rational(1 / (2 * l)) + h * Rational(1 / (4 * l * l)));
    EXPECT_THROW(f.evaluate(one * (-l) + h), pole_collision_error);
}

TEST(substitute_z, agrees_with_scalar_evaluation)
{
    std::mt19937 rng(29);
    for (int t = 0; t < 100; ++t) {
        const auto f = random_zrational(pt(), rng);
        const Rational v = Rational(static_cast<long>(rng() % 1000) + 17) / 13;
        // Direct rational evaluation of numerator / denominator.
        Rational num = 0, pw = 1;
        for (const auto &c : f.numerator()) {
            num += c.scalar_part() * pw;
            pw *= v;
        }
        Rational den = 1;
        for (const auto &[a, m] : f.poles()) {
            for (int k = 0; k < m; ++k) den *= v - a;
        }
        EXPECT_EQ(f.evaluate(q(v)), q(num / den));
    }
}

TEST(inverses, linear_and_chern_polynomial)
{
    const auto b = base_projective(2);
    const Elem one = Elem::one(b.algebra), h = Elem::basis(b.algebra, 1);
    const Elem c = one * Rational(5) - h * Rational(2) + Elem::basis(b.algebra, 2);
    EXPECT_EQ(ZRational::inverse_linear(3, c) * ZRational::linear(c, one * Rational(3)), ZRational::one(b.algebra));
    // R_V(x + 2z) for V = Omega(1), x = 7 + h: scalar part (7 + 2z)^2 = 4 (z + 7/2)^2.
    const auto v = corpus::omega1_p2(b);
    const ZRational w = ZRational::linear(one * Rational(7) + h, one * Rational(2));
    const ZRational R = w * w + w * v.c(1) + ZRational::constant(v.c(2));
    ASSERT_TRUE(R.is_polynomial());
    const auto inv = invert_with_scalar_roots(R.numerator(), 4, {{Rational(-7, 2), 2}}, b.algebra);
    EXPECT_EQ(inv * R, ZRational::one(b.algebra));
    EXPECT_THROW(invert_with_scalar_roots(R.numerator(), 4, {{Rational(-7, 2), 1}}, b.algebra), internal_error);
}

TEST(specialization, certificate_examples)
{
    const Atlas p2(corpus::projective_space(2));
    // Equally spaced weights collide: w_2/2 = w_3/1 at {1}.
    EXPECT_TRUE(certify(p2, {Rational(0), Rational(1), Rational(2)}, 2).has_value());
    EXPECT_TRUE(certify(p2, {Rational(1), Rational(1), Rational(2)}, 1).has_value());
    EXPECT_THROW(specialization_from_values(p2, {Rational(1), Rational(1), Rational(2)}, 1), precondition_error);
    EXPECT_FALSE(certify(p2, {Rational(101), Rational(103), Rational(107)}, 1).has_value());
    for (const auto &ex : corpus::toric_examples()) {
        const Atlas a(ex.data);
        const auto s1 = certify_specialization(a, 5, 42);
        const auto s2 = certify_specialization(a, 5, 42);
        EXPECT_EQ(s1.lambda, s2.lambda);
        EXPECT_FALSE(certify(a, s1.lambda, 5).has_value());
        EXPECT_NE(certify_specialization(a, 5, 43).lambda, s1.lambda);
    }
}

TEST(specialization, exhaustive_forms_on_p2)
{
    // Oracle: collect all +-(l_i - l_j)/k and compare with the certificate verdict.
    const Atlas p2(corpus::projective_space(2));
    std::mt19937 rng(31);
    for (int t = 0; t < 200; ++t) {
        std::vector<Rational> l;
        for (int i = 0; i < 3; ++i) l.emplace_back(static_cast<long>(rng() % 9));
        const int k_max = 1 + static_cast<int>(rng() % 2);
        bool generic = true;
        // Per vertex i: values (l_i - l_j)/c for j != i must be nonzero and distinct.
        for (int i = 0; i < 3; ++i) {
            std::vector<Rational> vals;
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                for (int c = 1; c <= k_max; ++c) vals.push_back((l[i] - l[j]) / c);
            }
            for (std::size_t x = 0; x < vals.size(); ++x) {
                if (vals[x] == 0) generic = false;
                for (std::size_t y = x + 1; y < vals.size(); ++y) generic = generic && vals[x] != vals[y];
            }
        }
        // Evaluation points -(l_a - l_b)/k against poles of b: -(l_b - l_j)/c.
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;
                for (int k = 1; k <= k_max; ++k) {
                    for (int j = 0; j < 3; ++j) {
                        if (j == b) continue;
                        for (int c = 1; c <= k_max; ++c) generic = generic && (l[a] - l[b]) / k != (l[b] - l[j]) / c;
                    }
                    // C factors: (l_a - l_j) - (c/k)(l_a - l_b) for j != b, c <= k D_j(d) = k; and c < k for j = b.
                    for (int j = 0; j < 3; ++j) {
                        const int top = j == b ? k - 1 : k;
                        for (int c = 1; c <= top; ++c) generic = generic && (l[a] - l[j]) - Rational(c, k) * (l[a] - l[b]) != 0;
                    }
                }
            }
        }
        EXPECT_EQ(!certify(p2, l, k_max).has_value(), generic);
    }
}

TEST(series_json, layout)
{
    const auto p1 = base_projective(1).algebra;
    const Elem one = Elem::one(p1), h = Elem::basis(p1, 1);
    const ZRational f(p1, ZPoly{one * Rational(1, 2), h}, ZRational::Poles{{Rational(-3), 2}});
    EXPECT_EQ(to_json(f).dump(),
              R"({"numerator":[{"z":0,"coeff":{"1":"1/2"}},{"z":1,"coeff":{"h":"1"}}],"poles":[{"at":"-3","order":2}]})");
    EXPECT_EQ(f.str(), "(1/2 + h*z) / ((z + 3)^2)");
}
