#include <toricmirror/toric_data.hpp>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace toricmirror;

namespace
{

IndexSet S(std::initializer_list<int> one_based)
{
    IndexSet s;
    for (int i : one_based) s.push_back(i - 1);
    return s;
}

} // namespace

TEST(validate, examples)
{
    EXPECT_TRUE(validate_smooth_toric_data(corpus::projective_space(2)).pass);
    EXPECT_TRUE(validate_smooth_toric_data(ToricData{1, {{1}, {-1}}, {Rational(1)}}).pass);
    auto rep = validate_smooth_toric_data(ToricData{1, {{2}, {2}}, {Rational(1)}});
    EXPECT_FALSE(rep.pass);
    ASSERT_FALSE(rep.violations.empty());
    EXPECT_NE(rep.violations[0].find("{1}"), std::string::npos);
    EXPECT_NE(rep.violations[0].find("index 2"), std::string::npos);
}

TEST(validate, condition_one_failure)
{
    auto rep = validate_smooth_toric_data(ToricData{1, {{1}, {1}}, {Rational(-1)}});
    EXPECT_FALSE(rep.pass);
    EXPECT_NE(rep.violations[0].find("cone condition"), std::string::npos);
}

TEST(validate, malformed_input_is_an_input_error)
{
    EXPECT_THROW(validate_smooth_toric_data(ToricData{2, {{1}, {1, 0}}, {Rational(1), Rational(1)}}), input_error);
    EXPECT_THROW(validate_smooth_toric_data(ToricData{2, {{1, 0}}, {Rational(1), Rational(1)}}), input_error);
}

TEST(validate, degenerate_omega_needs_override)
{
    ToricData d = corpus::projective_space(1);
    d.omega = {Rational(0)};
    auto rep = validate_smooth_toric_data(d);
    EXPECT_FALSE(rep.pass);
    EXPECT_TRUE(rep.degenerate);
    rep = validate_smooth_toric_data(d, true);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.degenerate);
    EXPECT_EQ(compute_anticones(d).size(), 4u);
    // omega on the wall spanned by D_1 = D_2 of F1.
    ToricData f = corpus::hirzebruch_f1();
    f.omega = {Rational(1), Rational(0)};
    EXPECT_FALSE(validate_smooth_toric_data(f).pass);
}

TEST(anticones, p2_and_f1)
{
    EXPECT_EQ(compute_anticones(corpus::projective_space(2)).size(), 7u);
    const auto f1 = compute_anticones(corpus::hirzebruch_f1());
    for (const auto &I : all_subsets(4)) {
        const bool has12 = std::count_if(I.begin(), I.end(), [](int i) { return i <= 1; }) > 0;
        const bool has34 = std::count_if(I.begin(), I.end(), [](int i) { return i >= 2; }) > 0;
        EXPECT_EQ(std::find(f1.begin(), f1.end(), I) != f1.end(), has12 && has34) << format_index_set(I);
    }
}

TEST(fixed_points, examples)
{
    Atlas p2(corpus::projective_space(2));
    ASSERT_EQ(p2.points().size(), 3u);
    EXPECT_EQ(p2.point(0).dual[0], IntVec{1});
    Atlas f1(corpus::hirzebruch_f1());
    std::vector<IndexSet> names;
    for (const auto &fp : f1.points()) names.push_back(fp.alpha);
    EXPECT_EQ(names, (std::vector<IndexSet>{S({1, 3}), S({1, 4}), S({2, 3}), S({2, 4})}));
    Atlas pp(corpus::p1xp1());
    EXPECT_EQ(pp.points().size(), 4u);
}

TEST(adjacency, p2_and_p1)
{
    Atlas p2(corpus::projective_space(2));
    const auto &adj = p2.adjacency(0);
    ASSERT_EQ(adj.size(), 2u);
    EXPECT_EQ(adj[0].i_ab, 1);
    EXPECT_EQ(adj[0].d_ab, IntVec{1});
    EXPECT_EQ(adj[0].lambda_ab, EquivariantScalar::lambda(0) - EquivariantScalar::lambda(1));
    Atlas p1(corpus::projective_space(1));
    EXPECT_EQ(p1.adjacency(0).size(), 1u);
    EXPECT_EQ(p1.adjacency(0)[0].lambda_ab.str(), "l1 - l2");
}

TEST(adjacency, f1)
{
    Atlas f1(corpus::hirzebruch_f1());
    const auto a = f1.index_of(S({1, 3}));
    const auto &adj = f1.adjacency(a);
    ASSERT_EQ(adj.size(), 2u);
    // Lexicographic: {1,4} before {2,3}.
    EXPECT_EQ(f1.point(adj[0].beta).alpha, S({1, 4}));
    EXPECT_EQ(adj[0].d_ab, (IntVec{0, 1}));
    EXPECT_EQ(f1.point(adj[1].beta).alpha, S({2, 3}));
    EXPECT_EQ(adj[1].d_ab, (IntVec{1, 0}));
    EXPECT_EQ(adj[1].lambda_ab, EquivariantScalar::lambda(0) - EquivariantScalar::lambda(1));
}

TEST(Leff, examples)
{
    Atlas p1(corpus::projective_space(1));
    auto l = enumerate_Leff(p1, DegreeFunctional{{Rational(1)}}, 5);
    EXPECT_EQ(l.size(), 6u);
    EXPECT_EQ(l.front(), IntVec{0});
    EXPECT_EQ(enumerate_Leff(p1, DegreeFunctional{{Rational(1)}}, 0), std::vector<IntVec>{IntVec{0}});
    Atlas f1(corpus::hirzebruch_f1());
    auto lf = enumerate_Leff(f1, DegreeFunctional{{Rational(1), Rational(2)}}, 3);
    auto has = [&](IntVec v) { return std::find(lf.begin(), lf.end(), v) != lf.end(); };
    EXPECT_TRUE(has({1, 0}));
    EXPECT_TRUE(has({0, 1}));
    EXPECT_TRUE(has({1, 1}));
    EXPECT_FALSE(has({-1, 1}));
}

TEST(Leff, nonpositive_functional_is_rejected)
{
    Atlas f1(corpus::hirzebruch_f1());
    EXPECT_THROW(enumerate_Leff(f1, DegreeFunctional{{Rational(1), Rational(-1)}}, 2), precondition_error);
    EXPECT_THROW(enumerate_Leff(f1, DegreeFunctional{{Rational(0), Rational(1)}}, 2), precondition_error);
}

TEST(invariants, corpus_properties)
{
    for (const auto &ex : corpus::toric_examples()) {
        Atlas atlas(ex.data);
        std::set<IndexSet> ac(atlas.anticones().begin(), atlas.anticones().end());
        for (const auto &I : all_subsets(ex.data.N())) {
            for (const auto &J : all_subsets(ex.data.N())) {
                if (ac.count(I) && std::includes(J.begin(), J.end(), I.begin(), I.end())) {
                    EXPECT_TRUE(ac.count(J));
                }
            }
        }
        for (const auto &fp : atlas.points()) {
            for (int i : fp.alpha) {
                for (int j : fp.alpha) EXPECT_EQ(ex.data.pairing(i, fp.dual_vector(j)), i == j ? 1 : 0);
            }
        }
        for (std::size_t a = 0; a < atlas.points().size(); ++a) {
            for (const auto &rec : atlas.adjacency(a)) {
                EXPECT_EQ(atlas.find_edge(rec.beta, a).lambda_ab, -rec.lambda_ab);
                EXPECT_EQ(atlas.find_edge(rec.beta, a).d_ab, rec.d_ab);
            }
        }
        // Enumeration is exactly the membership set in the degree ball.
        for (long cutoff = 0; cutoff <= 3; ++cutoff) {
            auto listed = enumerate_Leff(atlas, ex.phi, cutoff);
            std::set<IntVec> got(listed.begin(), listed.end());
            EXPECT_EQ(got.size(), listed.size());
            EXPECT_EQ(got, oracle::Leff_ball(ex.data, ex.phi.weights, cutoff, 3 * cutoff + 2)) << ex.name;
        }
    }
}
