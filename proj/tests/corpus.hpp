#pragma once

// Toric examples shared by the unit tests and the acceptance suite.

#include <toricmirror/cohomology.hpp>
#include <toricmirror/toric_data.hpp>

#include <string>
#include <vector>

namespace corpus
{

using toricmirror::BaseRing;
using toricmirror::BundleData;
using toricmirror::DegreeFunctional;
using toricmirror::Elem;
using toricmirror::Rational;
using toricmirror::ToricData;

struct Example {
    std::string name;
    ToricData data;
    DegreeFunctional phi;
};

inline ToricData projective_space(int n)
{
    ToricData d;
    d.K = 1;
    for (int i = 0; i <= n; ++i) d.D.push_back({1});
    d.omega = {Rational(1)};
    return d;
}

inline ToricData p1xp1()
{
    return ToricData{2, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}, {Rational(1), Rational(1)}};
}

inline ToricData hirzebruch_f1()
{
    return ToricData{2, {{1, 0}, {1, 0}, {0, 1}, {-1, 1}}, {Rational(1), Rational(1)}};
}

inline std::vector<Example> toric_examples()
{
    const DegreeFunctional one{{Rational(1)}};
    const DegreeFunctional two{{Rational(1), Rational(1)}};
    return {
        {"P1", projective_space(1), one},
        {"P2", projective_space(2), one},
        {"P3", projective_space(3), one},
        {"P1xP1", p1xp1(), two},
        {"F1", hirzebruch_f1(), two},
    };
}

// Omega_{P^2}(1): c_1 = -h, c_2 = h^2.
inline BundleData omega1_p2(const BaseRing &p2)
{
    BundleData v;
    v.name = "Omega(1)";
    v.rank = 2;
    v.chern = {Elem::basis(p2.algebra, 1, Rational(-1)), Elem::basis(p2.algebra, 2)};
    return v;
}

struct BundleExample {
    std::string name;
    ToricData data;
    BaseRing base;
    std::vector<BundleData> bundles;
    DegreeFunctional phi;
};

// Pure toric examples (point base, trivial lines) plus genuine bundles.
inline std::vector<BundleExample> bundle_examples()
{
    using namespace toricmirror;
    std::vector<BundleExample> out;
    for (const auto &ex : toric_examples()) {
        const auto pt = base_point();
        out.push_back({ex.name, ex.data, pt, std::vector<BundleData>(static_cast<std::size_t>(ex.data.N()), trivial_bundle(pt)), ex.phi});
    }
    const DegreeFunctional one{{Rational(1)}};
    const auto p1 = base_projective(1);
    out.push_back({"P(O+O(-1))/P1", projective_space(1), p1, {trivial_bundle(p1), split_bundle_projective(p1, {-1})}, one});
    const auto p2 = base_projective(2);
    out.push_back({"P(Omega(1)+O)/P2", projective_space(1), p2, {omega1_p2(p2), trivial_bundle(p2)}, one});
    out.push_back({"P(O(-1)+O+O(1))/P2 rank-2 summand", projective_space(1), p2,
                   {split_bundle_projective(p2, {-1, 0}), split_bundle_projective(p2, {1})}, one});
    out.push_back({"F1 data over P1", hirzebruch_f1(), p1,
                   {trivial_bundle(p1), split_bundle_projective(p1, {-1}), split_bundle_projective(p1, {2}), trivial_bundle(p1)},
                   DegreeFunctional{{Rational(1), Rational(1)}}});
    const auto pp = base_product(p1, p1);
    BundleData mixed;
    mixed.name = "O(1,-1)";
    mixed.rank = 1;
    mixed.chern = {Elem::basis(pp.algebra, pp.curve_duals[0]) - Elem::basis(pp.algebra, pp.curve_duals[1])};
    out.push_back({"P(O+O(1,-1))/P1xP1", projective_space(1), pp, {trivial_bundle(pp), mixed}, one});
    return out;
}

} // namespace corpus
