// gvar: command-line runner for norms, verification suites and stochastic integrals.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gvar/errors.hpp"
#include "gvar/experiments/config.hpp"
#include "gvar/experiments/report.hpp"
#include "gvar/experiments/suites.hpp"
#include "gvar/parallel.hpp"

namespace {

namespace ex = gvar::experiments;

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gvar::Error("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw gvar::Error("failed writing '" + path + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gamma-variation norms of vector measures and their verification suites", "gvar"};
    app.set_version_flag("--version", std::string(ex::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed, samples;
    std::optional<gvar::Index> paths;
    unsigned threads = 1;
    std::optional<std::string> out_path, csv_path, svg_path, dump_path;
    std::string suite;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)");
        cmd->add_option("--seed", seed, "override engine.seed");
        cmd->add_option("--samples", samples, "override engine.samples")->check(CLI::PositiveNumber);
        cmd->add_option("--paths", paths, "override engine.paths")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", out_path, "JSON report path (default: stdout)");
        cmd->add_option("--csv", csv_path, "CSV report path");
        cmd->add_option("--svg", svg_path, "SVG chart path (example-3-4)");
    };
    auto* norms = app.add_subcommand("norms", "all norms of the configured measure or density");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    auto* integrate = app.add_subcommand("integrate", "stochastic integral ensemble statistics");
    common(norms);
    common(verify);
    common(integrate);
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(ex::suite_names()));
    integrate->add_option("--dump", dump_path, "write the path ensemble (binary)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        gvar::set_threads(threads);
        auto config = config_path.empty() ? ex::parse_config(ex::json::object()) : ex::load_config(config_path);
        ex::apply_overrides(config, {seed, samples, paths});
        if (!out_path) out_path = config.output.report;
        if (!csv_path) csv_path = config.output.csv;
        if (!svg_path) svg_path = config.output.svg;

        ex::SuiteReport report;
        if (norms->parsed())
            report = ex::run_norms(config);
        else if (verify->parsed())
            report = ex::run_suite(suite, config);
        else
            report = ex::run_integrate(config, dump_path);

        const auto text = ex::render_json(report);
        if (out_path)
            write_file(*out_path, text);
        else
            std::cout << text;
        if (csv_path) write_file(*csv_path, ex::render_csv(report));
        if (svg_path) {
            const auto svg = ex::render_svg(report);
            if (svg.empty())
                std::cerr << "gvar: no chart for suite '" << report.suite << "'; --svg ignored\n";
            else
                write_file(*svg_path, svg);
        }

        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cerr << "gvar: " << report.suite << " " << (report.passed() ? "pass" : "FAIL") << " in "
                  << elapsed.count() << " s (" << gvar::threads() << " threads)\n";
        for (const auto* f : report.failures()) std::cerr << "  failed: " << f->detail << "\n";
        return report.passed() ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "gvar: error: " << e.what() << "\n";
        return 1;
    }
}
