#ifndef TORICMIRROR_SCENARIO_HPP
#define TORICMIRROR_SCENARIO_HPP

#include <toricmirror/verifier.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace toricmirror
{

// A scenario document: toric data, base, bundles, seed, cutoffs and checks.
// Errors carry a JSON path such as $.toric_data.omega[0].
struct Scenario {
    std::string name;
    ToricData data;
    bool allow_degenerate = false;
    DegreeFunctional phi;
    BaseRing base;
    std::vector<BundleData> bundles;
    SeedIFunction seed;
    long cutoff = 0;
    int k_max = 0; // 0: derived from the cutoff
    int jets = 0;
    std::uint64_t specialization_seed = 1;
    int specializations = 3;
    long split_cutoff = 4;
    std::set<std::string> checks;
};

inline const std::set<std::string> &known_checks()
{
    static const std::set<std::string> c{"c1", "c2", "fourier", "split", "qrr", "negative"};
    return c;
}

namespace scenario_detail
{

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string &path, const std::string &msg)
{
    throw input_error(path + ": " + msg);
}

inline void only_keys(const json &j, const std::string &path, const std::set<std::string> &allowed)
{
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto &[k, v] : j.items()) {
        if (!allowed.count(k)) fail(path, "unknown field \"" + k + "\"");
    }
}

inline const json &at(const json &j, const std::string &key, const std::string &path)
{
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path, "missing field \"" + key + "\"");
    return *it;
}

inline long integer(const json &j, const std::string &path)
{
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

inline long nonnegative(const json &j, const std::string &path)
{
    const long v = integer(j, path);
    if (v < 0) fail(path, "must be nonnegative");
    return v;
}

inline Rational rational(const json &j, const std::string &path)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) fail(path, "expected an exact rational string such as \"3/4\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const input_error &e) {
        fail(path, e.what());
    }
}

inline std::string str(const json &j, const std::string &path)
{
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

inline const json &array(const json &j, const std::string &path)
{
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

inline std::string idx(const std::string &path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

inline ToricData toric_data(const json &j, const std::string &path)
{
    only_keys(j, path, {"K", "D", "omega"});
    ToricData d;
    d.K = static_cast<int>(integer(at(j, "K", path), path + ".K"));
    const auto &D = array(at(j, "D", path), path + ".D");
    for (std::size_t i = 0; i < D.size(); ++i) {
        const auto &row = array(D[i], idx(path + ".D", i));
        IntVec v;
        for (std::size_t k = 0; k < row.size(); ++k) v.push_back(integer(row[k], idx(idx(path + ".D", i), k)));
        d.D.push_back(v);
    }
    const auto &omega = array(at(j, "omega", path), path + ".omega");
    for (std::size_t k = 0; k < omega.size(); ++k) d.omega.push_back(rational(omega[k], idx(path + ".omega", k)));
    try {
        d.check_structure();
    } catch (const input_error &e) {
        fail(path, e.what());
    }
    return d;
}

inline BaseRing base_ring(const json &j, const std::string &path)
{
    const std::string type = str(at(j, "type", path), path + ".type");
    if (type == "point") {
        only_keys(j, path, {"type"});
        return base_point();
    }
    if (type == "projective") {
        only_keys(j, path, {"type", "m"});
        const long m = nonnegative(at(j, "m", path), path + ".m");
        if (m > 6) fail(path + ".m", "projective base of dimension > 6 is not supported");
        return base_projective(static_cast<int>(m));
    }
    if (type == "product") {
        only_keys(j, path, {"type", "factors"});
        const auto &f = array(at(j, "factors", path), path + ".factors");
        if (f.size() != 2) fail(path + ".factors", "a product base needs exactly two factors");
        return base_product(base_ring(f[0], idx(path + ".factors", 0)), base_ring(f[1], idx(path + ".factors", 1)));
    }
    fail(path + ".type", "expected \"point\", \"projective\" or \"product\"");
}

inline BundleData bundle(const json &j, const BaseRing &base, const std::string &path)
{
    const std::string type = str(at(j, "type", path), path + ".type");
    BundleData v;
    try {
        if (type == "trivial") {
            only_keys(j, path, {"type", "rank"});
            const long r = j.contains("rank") ? integer(j.at("rank"), path + ".rank") : 1;
            if (r < 1) fail(path + ".rank", "rank must be positive");
            v = trivial_bundle(base, static_cast<int>(r));
        } else if (type == "split") {
            only_keys(j, path, {"type", "degrees"});
            const auto &a = array(at(j, "degrees", path), path + ".degrees");
            std::vector<long> deg;
            for (std::size_t i = 0; i < a.size(); ++i) deg.push_back(integer(a[i], idx(path + ".degrees", i)));
            if (deg.empty()) fail(path + ".degrees", "rank must be positive");
            v = split_bundle_projective(base, deg);
        } else if (type == "chern") {
            only_keys(j, path, {"type", "name", "rank", "chern"});
            v.name = j.contains("name") ? str(j.at("name"), path + ".name") : "V";
            v.rank = static_cast<int>(integer(at(j, "rank", path), path + ".rank"));
            if (v.rank < 1) fail(path + ".rank", "rank must be positive");
            const auto &c = array(at(j, "chern", path), path + ".chern");
            for (std::size_t k = 0; k < c.size(); ++k) {
                const std::string p = idx(path + ".chern", k);
                if (!c[k].is_object()) fail(p, "expected an object mapping basis names to rationals");
                Elem e(base.algebra);
                for (const auto &[name, q] : c[k].items()) {
                    std::size_t b = 0;
                    try {
                        b = base.algebra->index_of(name);
                    } catch (const input_error &err) {
                        fail(p, err.what());
                    }
                    e += Elem::basis(base.algebra, b, rational(q, p + "." + name));
                }
                v.chern.push_back(e);
            }
            v.check();
        } else {
            fail(path + ".type", "expected \"trivial\", \"split\" or \"chern\"");
        }
    } catch (const precondition_error &e) {
        fail(path, e.what());
    } catch (const input_error &e) {
        const std::string what = e.what();
        if (what.rfind("$", 0) == 0) throw;
        fail(path, what);
    }
    return v;
}

inline SeedIFunction seed(const json &j, const Scenario &s, const std::filesystem::path &dir, const std::string &path)
{
    const int n = s.data.N();
    const std::string type = str(at(j, "type", path), path + ".type");
    try {
        if (type == "builtin") {
            only_keys(j, path, {"type", "name", "random_seed", "max_degree"});
            const std::string name = str(at(j, "name", path), path + ".name");
            if (name == "trivial") return seed_trivial(s.base, n);
            if (name == "constant") return seed_constant(s.base, n);
            if (name == "split_twisted") return seed_split_twisted(s.base, s.bundles, s.cutoff);
            if (name == "random") {
                const long rs = j.contains("random_seed") ? nonnegative(j.at("random_seed"), path + ".random_seed") : 1;
                const long md = j.contains("max_degree") ? nonnegative(j.at("max_degree"), path + ".max_degree") : 2;
                return random_polynomial_seed(s.base, n, static_cast<std::uint64_t>(rs), static_cast<int>(md), s.cutoff);
            }
            fail(path + ".name", "expected \"trivial\", \"constant\", \"split_twisted\" or \"random\"");
        }
        SeedIFunction out;
        if (type == "document") {
            only_keys(j, path, {"type", "path"});
            const auto file = dir / str(at(j, "path", path), path + ".path");
            std::ifstream in(file);
            if (!in) fail(path + ".path", "cannot open " + file.string());
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::parse_error &e) {
                fail(path + ".path", file.string() + ": " + e.what());
            }
            out = seed_from_json(doc, s.base);
        } else if (type == "inline") {
            only_keys(j, path, {"type", "document"});
            out = seed_from_json(at(j, "document", path), s.base);
        } else {
            fail(path + ".type", "expected \"builtin\", \"document\" or \"inline\"");
        }
        if (out.n_lambda != n) fail(path, "seed has " + std::to_string(out.n_lambda) + " parameters, expected " + std::to_string(n));
        if (out.cutoff < s.cutoff && s.base.novikov_rank() > 0) {
            fail(path, "seed base cutoff " + std::to_string(out.cutoff) + " is below the scenario cutoff");
        }
        return out;
    } catch (const precondition_error &e) {
        fail(path, e.what());
    } catch (const input_error &e) {
        const std::string what = e.what();
        if (what.rfind("$", 0) == 0) throw;
        fail(path, what);
    }
}

// Line and column of a byte offset.
inline std::string position(const std::string &text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace scenario_detail

// Parses a scenario. Seed documents are resolved relative to `dir`.
inline Scenario parse_scenario(const nlohmann::json &j, const std::filesystem::path &dir = ".")
{
    using namespace scenario_detail;
    const std::string root = "$";
    only_keys(j, root,
              {"name", "toric_data", "allow_degenerate", "degree_functional", "base", "bundles", "seed", "cutoff", "k_max", "jets",
               "specialization_seed", "specializations", "split_cutoff", "checks"});
    Scenario s;
    s.name = j.contains("name") ? str(j.at("name"), "$.name") : "scenario";
    s.data = toric_data(at(j, "toric_data", root), "$.toric_data");
    if (j.contains("allow_degenerate")) {
        if (!j.at("allow_degenerate").is_boolean()) fail("$.allow_degenerate", "expected a boolean");
        s.allow_degenerate = j.at("allow_degenerate").get<bool>();
    }
    if (j.contains("degree_functional")) {
        const auto &a = array(j.at("degree_functional"), "$.degree_functional");
        for (std::size_t k = 0; k < a.size(); ++k) s.phi.weights.push_back(rational(a[k], idx("$.degree_functional", k)));
        if (s.phi.weights.size() != static_cast<std::size_t>(s.data.K)) fail("$.degree_functional", "expected K entries");
    } else {
        s.phi.weights = s.data.omega;
    }
    s.base = j.contains("base") ? base_ring(j.at("base"), "$.base") : base_point();
    if (j.contains("bundles")) {
        const auto &b = array(j.at("bundles"), "$.bundles");
        if (b.size() != static_cast<std::size_t>(s.data.N())) {
            fail("$.bundles", "expected " + std::to_string(s.data.N()) + " bundles, one per divisor vector");
        }
        for (std::size_t i = 0; i < b.size(); ++i) s.bundles.push_back(bundle(b[i], s.base, idx("$.bundles", i)));
    } else {
        s.bundles.assign(static_cast<std::size_t>(s.data.N()), trivial_bundle(s.base));
    }
    s.cutoff = nonnegative(at(j, "cutoff", root), "$.cutoff");
    if (j.contains("k_max")) s.k_max = static_cast<int>(nonnegative(j.at("k_max"), "$.k_max"));
    if (j.contains("jets")) {
        s.jets = static_cast<int>(integer(j.at("jets"), "$.jets"));
        if (s.jets != 0 && s.jets != 1) fail("$.jets", "jet order must be 0 or 1");
    }
    if (j.contains("specialization_seed")) s.specialization_seed = static_cast<std::uint64_t>(nonnegative(j.at("specialization_seed"), "$.specialization_seed"));
    if (j.contains("specializations")) {
        s.specializations = static_cast<int>(integer(j.at("specializations"), "$.specializations"));
        if (s.specializations < 1) fail("$.specializations", "need at least one specialization");
    }
    if (j.contains("split_cutoff")) s.split_cutoff = nonnegative(j.at("split_cutoff"), "$.split_cutoff");
    if (j.contains("checks")) {
        const auto &c = array(j.at("checks"), "$.checks");
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string name = str(c[i], idx("$.checks", i));
            if (!known_checks().count(name)) fail(idx("$.checks", i), "unknown check \"" + name + "\"");
            s.checks.insert(name);
        }
    } else {
        s.checks = known_checks();
    }
    const json default_seed{{"type", "builtin"}, {"name", s.base.algebra->dim() == 1 && s.base.novikov_rank() == 0 ? "trivial" : "split_twisted"}};
    s.seed = seed(j.contains("seed") ? j.at("seed") : default_seed, s, dir, "$.seed");
    return s;
}

inline Scenario load_scenario(const std::filesystem::path &file)
{
    std::ifstream in(file);
    if (!in) throw input_error(file.string() + ": cannot open scenario");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw input_error(file.string() + ": " + scenario_detail::position(text, e.byte) + ": malformed JSON");
    }
    try {
        return parse_scenario(j, file.parent_path());
    } catch (const input_error &e) {
        throw input_error(file.string() + ": " + e.what());
    }
}

// Builds the atlas (validating the toric data) and the fixed-locus model.
inline std::shared_ptr<const FixedLociModel> build_model(const Scenario &s)
{
    auto atlas = std::make_shared<const Atlas>(s.data, s.allow_degenerate);
    certify_degree_functional(*atlas, s.phi);
    return std::make_shared<const FixedLociModel>(atlas, s.base, s.bundles);
}

inline IhatOptions ihat_options(const Scenario &s)
{
    IhatOptions o;
    o.cutoff = s.cutoff;
    o.phi = s.phi;
    o.jets = s.jets;
    return o;
}

inline VerifyConfig verify_config(const Scenario &s, std::shared_ptr<const FixedLociModel> model, int jobs)
{
    VerifyConfig c;
    c.name = s.name;
    c.model = std::move(model);
    c.seed = s.seed;
    c.opt = ihat_options(s);
    c.checks = s.checks;
    c.spec_seed = s.specialization_seed;
    c.n_specs = s.specializations;
    c.k_max = s.k_max;
    c.jobs = jobs;
    c.split_cutoff = s.split_cutoff;
    return c;
}

inline nlohmann::ordered_json atlas_to_json(const Atlas &atlas)
{
    nlohmann::ordered_json anticones = nlohmann::ordered_json::array();
    for (const auto &I : atlas.anticones()) anticones.push_back(format_index_set(I));
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < atlas.points().size(); ++a) {
        nlohmann::ordered_json adj = nlohmann::ordered_json::array();
        for (const auto &rec : atlas.adjacency(a)) {
            adj.push_back({{"beta", atlas.point(rec.beta).name()},
                           {"curve_class", format_vector(rec.d_ab)},
                           {"weight", rec.lambda_ab.str()}});
        }
        nlohmann::ordered_json weights = nlohmann::ordered_json::array();
        for (int i = 0; i < atlas.data().N(); ++i) weights.push_back(restriction_weight(atlas.data(), atlas.point(a), i).str());
        points.push_back({{"alpha", atlas.point(a).name()}, {"restricted_divisors", weights}, {"adjacent", adj}});
    }
    const auto &v = atlas.validation();
    return {{"validation", {{"pass", v.pass}, {"degenerate", v.degenerate}, {"warnings", v.warnings}}},
            {"anticones", anticones},
            {"fixed_points", points}};
}

// File-name-safe fixed point label: {1, 3} -> alpha_1_3.
inline std::string alpha_file_stem(const IndexSet &alpha)
{
    std::string s = "alpha";
    for (int i : alpha) s += "_" + std::to_string(i + 1);
    return s;
}

} // namespace toricmirror

#endif
