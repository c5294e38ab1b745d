#include <toricmirror/scenario.hpp>

#include <gtest/gtest.h>

#include "corpus.hpp"

#include <memory>

using namespace toricmirror;

namespace
{

std::shared_ptr<const FixedLociModel> toric_model(const ToricData &data)
{
    const auto pt = base_point();
    return std::make_shared<const FixedLociModel>(std::make_shared<const Atlas>(data), pt,
                                                  std::vector<BundleData>(static_cast<std::size_t>(data.N()), trivial_bundle(pt)));
}

std::shared_ptr<const FixedLociModel> bundle_model(const corpus::BundleExample &ex)
{
    return std::make_shared<const FixedLociModel>(std::make_shared<const Atlas>(ex.data), ex.base, ex.bundles);
}

IhatOptions options(long cutoff, const DegreeFunctional &phi)
{
    IhatOptions o;
    o.cutoff = cutoff;
    o.phi = phi;
    return o;
}

std::vector<Rational> values(std::initializer_list<long> v)
{
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

void expect_all_ok(const std::vector<CheckRecord> &recs)
{
    for (const auto &r : recs) EXPECT_TRUE(r.ok()) << r.check << " " << r.params.dump() << ": " << r.witness;
}

} // namespace

TEST(c2, projective_line_worked_example)
{
    const auto model = toric_model(corpus::projective_space(1));
    const auto opt = options(1, DegreeFunctional{{Rational(1)}});
    const auto spec = specialization_from_values(model->atlas(), values({3, 10}), 1);
    const auto lam = scalar_lambda(model->base(), spec.lambda);
    const auto ihat = build_Ihat_all(*model, seed_trivial(model->base(), 2), lam, opt, 1);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto &rec = model->atlas().adjacency(a).front();
        const Rational lbar = rec.lambda_ab.evaluate(spec.lambda);
        // C = -1/lbar, and both sides equal q (-1/lbar) / (z + lbar).
        const Elem C = compute_C_ab(*model, a, rec.beta, 1, lam);
        EXPECT_EQ(C, Elem::one(C.algebra()) * Rational(-1 / lbar));
        const AlgebraPtr &alg = ihat[a].algebra;
        const ZRational expected(alg, ZPoly{Elem::one(alg) * Rational(-1 / lbar)}, ZRational::Poles{{-lbar, 1}});
        EXPECT_EQ(prin_at(ihat[a], -lbar).coefficient({{}, {1}, 0}), expected);
        const auto r = check_C2(*model, ihat, spec, lam, a, rec.beta, 1, opt);
        EXPECT_EQ(r.status, "pass") << r.witness;
    }
}

TEST(c2, projective_plane_C_matches_scalar_product)
{
    const auto data = corpus::projective_space(2);
    const auto model = toric_model(data);
    const auto &atlas = model->atlas();
    const auto lam_values = specialization_from_values(atlas, values({3, 17, -41}), 3).lambda;
    const auto lam = scalar_lambda(model->base(), lam_values);
    for (long k = 1; k <= 3; ++k) {
        for (std::size_t a = 0; a < atlas.points().size(); ++a) {
            for (const auto &rec : atlas.adjacency(a)) {
                // Scalar oracle: every R is the identity polynomial, c1 = lbar.
                const Rational lbar = rec.lambda_ab.evaluate(lam_values);
                auto w = [&](int i) { return restriction_weight(data, atlas.point(a), i).evaluate(lam_values); };
                Rational inv = 1;
                for (long c = 1; c <= k - 1; ++c) inv *= w(rec.i_ab) - Rational(c, k) * lbar;
                for (int i = 0; i < data.N(); ++i) {
                    if (atlas.point(rec.beta).contains(i)) continue;
                    for (long c = 1; c <= k * data.pairing(i, rec.d_ab); ++c) inv *= w(i) - Rational(c, k) * lbar;
                }
                const Elem C = compute_C_ab(*model, a, rec.beta, k, lam);
                EXPECT_EQ(C, Elem::one(C.algebra()) * Rational(1 / inv)) << a << " " << rec.beta << " k=" << k;
            }
        }
    }
}

TEST(c2, C_with_negative_pairing_uses_the_inverse_product)
{
    // F1: D_4 = (-1, 1) pairs negatively with the fiber-direction edge classes.
    const auto data = corpus::hirzebruch_f1();
    const auto model = toric_model(data);
    const auto &atlas = model->atlas();
    const auto lam_values = specialization_from_values(atlas, values({4, -7, 11, 3}), 2).lambda;
    const auto lam = scalar_lambda(model->base(), lam_values);
    bool saw_negative = false;
    for (std::size_t a = 0; a < atlas.points().size(); ++a) {
        for (const auto &rec : atlas.adjacency(a)) {
            const Rational lbar = rec.lambda_ab.evaluate(lam_values);
            auto w = [&](int i) { return restriction_weight(data, atlas.point(a), i).evaluate(lam_values); };
            for (long k = 1; k <= 2; ++k) {
                Rational num = 1, den = 1;
                for (long c = 1; c <= k - 1; ++c) den *= w(rec.i_ab) - Rational(c, k) * lbar;
                for (int i = 0; i < data.N(); ++i) {
                    if (atlas.point(rec.beta).contains(i)) continue;
                    const long m = k * data.pairing(i, rec.d_ab);
                    if (m < 0) saw_negative = true;
                    for (long c = 1; c <= m; ++c) den *= w(i) - Rational(c, k) * lbar;
                    for (long c = m + 1; c <= 0; ++c) num *= w(i) - Rational(c, k) * lbar;
                }
                const Elem C = compute_C_ab(*model, a, rec.beta, k, lam);
                EXPECT_EQ(C, Elem::one(C.algebra()) * Rational(num / den));
            }
        }
    }
    EXPECT_TRUE(saw_negative);
}

TEST(c1_c2, random_seeds_on_plane_and_hirzebruch)
{
    for (const auto &name : {"P2", "F1"}) {
        corpus::Example ex;
        for (const auto &e : corpus::toric_examples()) {
            if (e.name == name) ex = e;
        }
        const auto model = toric_model(ex.data);
        const auto opt = options(3, ex.phi);
        const int k_max = required_k_max(*model, opt);
        for (std::uint64_t s = 1; s <= 50; ++s) {
            const auto seed = random_polynomial_seed(model->base(), ex.data.N(), s);
            const auto spec = certify_specialization(model->atlas(), k_max, 1000 + s);
            const auto lam = scalar_lambda(model->base(), spec.lambda);
            const auto ihat = build_Ihat_all(*model, seed, lam, opt, 1);
            std::vector<CheckRecord> recs;
            for (const auto &x : ihat) recs.push_back(check_C1(*model, x, spec, opt));
            const auto c2 = check_C2_all(*model, ihat, spec, lam, opt, 1);
            recs.insert(recs.end(), c2.begin(), c2.end());
            expect_all_ok(recs);
            if (::testing::Test::HasFailure()) return;
        }
    }
}

TEST(c1_c2, bundle_corpus)
{
    for (const auto &ex : corpus::bundle_examples()) {
        SCOPED_TRACE(ex.name);
        const auto model = bundle_model(ex);
        const auto opt = options(2, ex.phi);
        const int k_max = required_k_max(*model, opt);
        const auto seed = random_polynomial_seed(ex.base, ex.data.N(), 7, 2, opt.cutoff);
        const auto spec = certify_specialization(model->atlas(), k_max, 99);
        const auto lam = scalar_lambda(ex.base, spec.lambda);
        const auto ihat = build_Ihat_all(*model, seed, lam, opt, 2);
        std::vector<CheckRecord> recs;
        for (const auto &x : ihat) recs.push_back(check_C1(*model, x, spec, opt));
        const auto c2 = check_C2_all(*model, ihat, spec, lam, opt, 2);
        EXPECT_FALSE(c2.empty());
        recs.insert(recs.end(), c2.begin(), c2.end());
        expect_all_ok(recs);
    }
}

TEST(c1, tightness_for_the_trivial_seed)
{
    const auto model = toric_model(corpus::projective_space(2));
    const auto opt = options(3, DegreeFunctional{{Rational(1)}});
    const auto spec = certify_specialization(model->atlas(), required_k_max(*model, opt), 5);
    const auto ihat = build_Ihat_all(*model, seed_trivial(model->base(), 3), scalar_lambda(model->base(), spec.lambda), opt, 1);
    for (const auto &x : ihat) {
        const auto r = check_C1(*model, x, spec, opt, true);
        EXPECT_EQ(r.status, "pass");
        EXPECT_TRUE(r.params.at("tight").get<bool>()) << r.params.dump();
    }
}

TEST(c1, extraneous_pole_fails)
{
    const auto model = toric_model(corpus::projective_space(1));
    const auto opt = options(2, DegreeFunctional{{Rational(1)}});
    const auto spec = specialization_from_values(model->atlas(), values({3, 10}), 2);
    auto ihat = build_Ihat_all(*model, seed_trivial(model->base(), 2), scalar_lambda(model->base(), spec.lambda), opt, 1);
    auto &f = ihat[0].terms.at({{}, {1}, 0});
    f = f * ZRational(f.algebra(), ZPoly{Elem::one(f.algebra())}, ZRational::Poles{{Rational(5, 3), 1}});
    const auto r = check_C1(*model, ihat[0], spec, opt);
    EXPECT_EQ(r.status, "fail");
    EXPECT_NE(r.witness.find("5/3"), std::string::npos) << r.witness;
}

TEST(negative_controls, all_detected_on_plane_and_bundle)
{
    std::vector<std::pair<std::shared_ptr<const FixedLociModel>, IhatOptions>> cases;
    cases.emplace_back(toric_model(corpus::projective_space(2)), options(3, DegreeFunctional{{Rational(1)}}));
    const auto ex = corpus::bundle_examples().at(5);
    cases.emplace_back(bundle_model(ex), options(2, ex.phi));
    for (const auto &[model, opt] : cases) {
        VerifyConfig cfg;
        cfg.model = model;
        cfg.seed = seed_split_twisted(model->base(), model->bundles(), opt.cutoff);
        cfg.opt = opt;
        cfg.spec_seed = 17;
        for (const auto &name : negative_control_names()) {
            const auto o = run_negative_control(cfg, name, required_k_max(*model, opt));
            EXPECT_TRUE(o.detected) << name;
            EXPECT_EQ(o.attempts.size(), 1u) << name;
        }
    }
}

TEST(split, crosscheck_matches)
{
    const auto r = check_split_crosscheck(3, Rational(7), Rational(-12), 2);
    EXPECT_EQ(r.status, "pass") << r.witness;
    EXPECT_GT(r.params.at("classes_compared").get<std::size_t>(), 10u);
    EXPECT_EQ(check_split_crosscheck(2, Rational(4), Rational(4)).status, "error");
}

TEST(qrr, checks_pass_on_bundles)
{
    const auto ex = corpus::bundle_examples().at(6);
    expect_all_ok(check_qrr(ex.bundles));
}

TEST(report, deterministic_across_job_counts)
{
    const auto model = toric_model(corpus::hirzebruch_f1());
    VerifyConfig cfg;
    cfg.name = "F1";
    cfg.model = model;
    cfg.seed = seed_trivial(model->base(), 4);
    cfg.opt = options(2, DegreeFunctional{{Rational(1), Rational(1)}});
    cfg.checks = {"c1", "c2", "fourier", "qrr"};
    cfg.spec_seed = 3;
    cfg.jobs = 1;
    const auto one = verify(cfg);
    cfg.jobs = 4;
    const auto four = verify(cfg);
    EXPECT_TRUE(one.report.passed()) << one.report.text();
    EXPECT_EQ(one.report.to_json().dump(), four.report.to_json().dump());
    EXPECT_EQ(one.report.text(), four.report.text());
    EXPECT_EQ(one.report.specializations.size(), 3u);
    bool c3 = false;
    for (const auto &r : one.report.records) c3 = c3 || (r.check == "c3" && r.status == "assumed");
    EXPECT_TRUE(c3);
}

TEST(report, failing_record_fails_the_report)
{
    VerificationReport rep;
    rep.records.push_back({"c1", {}, "pass", ""});
    EXPECT_TRUE(rep.passed());
    rep.records.push_back({"c2", {}, "fail", "x"});
    EXPECT_FALSE(rep.passed());
    EXPECT_EQ(rep.to_json().at("status"), "fail");
}

TEST(scenario, bundled_scenarios_parse)
{
    for (const auto &name : {"p2.json", "f1_crosscheck.json", "bundle_p1.json", "omega_p2.json"}) {
        const auto s = load_scenario(std::filesystem::path(TORICMIRROR_SCENARIO_DIR) / name);
        EXPECT_EQ(s.bundles.size(), static_cast<std::size_t>(s.data.N())) << name;
        EXPECT_NO_THROW(build_model(s)) << name;
    }
}

TEST(scenario, diagnostics_name_the_path)
{
    auto message = [](const char *text) {
        try {
            parse_scenario(nlohmann::json::parse(text));
        } catch (const input_error &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(message(R"({"toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1/0"]}, "cutoff": 2})"),
              "$.toric_data.omega[0]: zero denominator in rational string \"1/0\"");
    EXPECT_NE(message(R"({"toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1"]}, "cutof": 2})").find("unknown field \"cutof\""),
              std::string::npos);
    EXPECT_NE(message(R"({"toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1"]}, "cutoff": 2, "bundles": [{"type": "trivial"}]})")
                  .find("$.bundles: expected 2 bundles"),
              std::string::npos);
    EXPECT_NE(message(R"({"toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1"]}, "cutoff": 2, "checks": ["c4"]})").find("$.checks[0]"),
              std::string::npos);
    EXPECT_NE(message(R"({"toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1"]}, "cutoff": 2,
                          "base": {"type": "projective", "m": 1},
                          "bundles": [{"type": "chern", "rank": 1, "chern": [{"k": "1"}]}, {"type": "trivial"}]})")
                  .find("$.bundles[0].chern[0]"),
              std::string::npos);
}

TEST(scenario, inline_seed_and_checks_subset)
{
    const auto s = parse_scenario(nlohmann::json::parse(R"({
        "name": "P1 inline",
        "toric_data": {"K": 1, "D": [[1], [1]], "omega": ["1"]},
        "seed": {"type": "inline", "document": {"n_lambda": 2, "base_cutoff": 0,
                 "coefficients": [{"d": [], "terms": [{"basis": "1", "coeff": "3/2", "lambda": [1, 0], "z": 0}]}]}},
        "cutoff": 2,
        "checks": ["c1", "c2"]
    })"));
    EXPECT_EQ(s.checks, (std::set<std::string>{"c1", "c2"}));
    const auto res = verify(verify_config(s, build_model(s), 2));
    EXPECT_TRUE(res.report.passed()) << res.report.text();
}
