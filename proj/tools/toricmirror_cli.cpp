// Batch front-end: reads a scenario document, runs the pipeline and writes
// report.json, report.txt and per-fixed-point series dumps.
// Exit codes: 0 all selected checks pass, 1 a check fails, 2 configuration error.

#include <toricmirror/scenario.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace toricmirror;

namespace
{

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

void write_file(const fs::path &file, const std::string &text)
{
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw input_error("cannot write " + file.string());
    out << text;
}

std::string dump(const nlohmann::ordered_json &j)
{
    return j.dump(2) + "\n";
}

std::set<std::string> parse_checks(const std::string &list)
{
    std::set<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (!known_checks().count(item)) throw input_error("--checks: unknown check \"" + item + "\"");
        out.insert(item);
    }
    if (out.empty()) throw input_error("--checks: no checks selected");
    return out;
}

nlohmann::ordered_json specialization_json(const Specialization &s)
{
    std::vector<std::string> l;
    for (const auto &x : s.lambda) l.push_back(x.get_str());
    return {{"seed", s.seed}, {"k_max", s.k_max}, {"lambda", l}};
}

void write_ihat(const fs::path &dir, const Scenario &sc, const FixedLociModel &model, const std::vector<NovikovSeries> &ihat,
                const Specialization &spec, bool latex)
{
    for (const auto &s : ihat) {
        const auto &alpha = model.atlas().point(s.alpha);
        const std::string stem = alpha_file_stem(alpha.alpha);
        nlohmann::ordered_json j{{"scenario", sc.name}, {"specialization", specialization_json(spec)}};
        j["series"] = to_json(s, alpha.name());
        write_file(dir / "ihat" / (stem + ".json"), dump(j));
        if (latex) {
            std::string tex;
            for (const auto &[key, f] : s.terms) tex += format_key(key) + " & " + to_latex(f) + " \\\\\n";
            write_file(dir / "ihat" / (stem + ".tex"), tex);
        }
    }
}

struct Common {
    std::string scenario;
    std::string out;
    bool allow_degenerate = false;
};

Scenario load(const Common &c)
{
    Scenario s = load_scenario(c.scenario);
    if (c.allow_degenerate) s.allow_degenerate = true;
    return s;
}

int cmd_validate(const Common &c)
{
    const Scenario s = load(c);
    const auto rep = validate_smooth_toric_data(s.data, s.allow_degenerate);
    for (const auto &w : rep.warnings) std::cout << "warning: " << w << "\n";
    if (!rep.pass) {
        for (const auto &v : rep.violations) std::cerr << "error: " << v << "\n";
        return exit_config;
    }
    const auto model = build_model(s);
    std::cout << s.name << ": toric data valid, " << model->atlas().points().size() << " fixed points\n";
    return exit_pass;
}

int cmd_atlas(const Common &c)
{
    const Scenario s = load(c);
    const auto model = build_model(s);
    const std::string text = dump(atlas_to_json(model->atlas()));
    if (c.out.empty()) std::cout << text;
    else write_file(fs::path(c.out) / "atlas.json", text);
    return exit_pass;
}

int cmd_ifunction(const Common &c, int jobs, bool latex)
{
    const Scenario s = load(c);
    const auto model = build_model(s);
    const auto opt = ihat_options(s);
    const int k_max = s.k_max > 0 ? s.k_max : required_k_max(*model, opt);
    const auto spec = certify_specialization(model->atlas(), k_max, s.specialization_seed);
    const auto ihat = build_Ihat_all(*model, s.seed, scalar_lambda(s.base, spec.lambda), opt, jobs);
    const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    write_ihat(dir, s, *model, ihat, spec, latex);
    std::cout << "wrote " << ihat.size() << " series to " << (dir / "ihat").string() << "\n";
    return exit_pass;
}

int cmd_verify(const Common &c, int jobs, const std::string &checks, bool validate_only, bool latex)
{
    Scenario s = load(c);
    if (!checks.empty()) s.checks = parse_checks(checks);
    const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    if (validate_only) {
        const auto rep = validate_smooth_toric_data(s.data, s.allow_degenerate);
        if (!rep.pass) {
            for (const auto &v : rep.violations) std::cerr << "error: " << v << "\n";
            return exit_config;
        }
        const auto model = build_model(s);
        write_file(dir / "atlas.json", dump(atlas_to_json(model->atlas())));
        std::cout << s.name << ": toric data valid; atlas written to " << (dir / "atlas.json").string() << "\n";
        return exit_pass;
    }
    const auto model = build_model(s);
    const auto result = verify(verify_config(s, model, jobs));
    const auto &rep = result.report;
    write_file(dir / "report.json", dump(rep.to_json()));
    write_file(dir / "report.txt", rep.text());
    if (!result.ihat.empty()) write_ihat(dir, s, *model, result.ihat, rep.specializations.front(), latex);
    std::cout << rep.text();
    return rep.passed() ? exit_pass : exit_fail;
}

int cmd_report(const std::string &dir)
{
    const fs::path file = fs::path(dir) / "report.json";
    std::ifstream in(file);
    if (!in) throw input_error("cannot open " + file.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw input_error(file.string() + ": " + e.what());
    }
    const fs::path txt = fs::path(dir) / "report.txt";
    std::ifstream t(txt);
    if (t) {
        std::cout << t.rdbuf();
    } else {
        std::cout << "scenario: " << j.value("scenario", "") << "\nstatus: " << j.value("status", "") << "\n";
    }
    return j.value("status", "") == "pass" ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Verifier for restricted I-functions of toric bundles"};
    app.require_subcommand(1);
    Common common;
    int jobs = default_jobs();
    std::string checks;
    bool validate_only = false, latex = false;
    std::string report_dir;

    auto add_common = [&](CLI::App *sub, bool with_out) {
        sub->add_option("scenario", common.scenario, "scenario document (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_flag("--allow-degenerate", common.allow_degenerate, "accept degenerate stability parameters");
        if (with_out) sub->add_option("--out", common.out, "output directory");
    };
    auto *validate = app.add_subcommand("validate", "check the toric data and build the atlas");
    add_common(validate, false);
    auto *atlas = app.add_subcommand("atlas", "emit anti-cones, fixed points and adjacency");
    add_common(atlas, true);
    auto *ifunction = app.add_subcommand("ifunction", "write the restricted series at the first specialization");
    add_common(ifunction, true);
    ifunction->add_option("--jobs", jobs, "worker threads (default: TORICMIRROR_JOBS or 1)")->check(CLI::PositiveNumber);
    ifunction->add_flag("--dump-latex", latex, "also write LaTeX renderings");
    auto *verify_cmd = app.add_subcommand("verify", "run the selected checks and write reports");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--jobs", jobs, "worker threads (default: TORICMIRROR_JOBS or 1)")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--checks", checks, "comma-separated subset of c1,c2,fourier,split,qrr,negative");
    verify_cmd->add_flag("--validate-only", validate_only, "validate and emit the atlas without series work");
    verify_cmd->add_flag("--dump-latex", latex, "also write LaTeX renderings");
    auto *report = app.add_subcommand("report", "print a written report and exit with its status");
    report->add_option("dir", report_dir, "output directory of a verify run")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_config;
    }

    try {
        if (*validate) return cmd_validate(common);
        if (*atlas) return cmd_atlas(common);
        if (*ifunction) return cmd_ifunction(common, jobs, latex);
        if (*verify_cmd) return cmd_verify(common, jobs, checks, validate_only, latex);
        if (*report) return cmd_report(report_dir);
    } catch (const input_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const precondition_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const pole_collision_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_config;
}
