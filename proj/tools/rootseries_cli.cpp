// rootseries: Taylor coefficients of a perturbed root and their verification suites.
//
// Exit status: 0 when every check passes, 1 when some check fails,
// 2 on invalid input or a numeric failure.

#include "rootseries/cli.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using rootseries::cli::Command;
using rootseries::cli::RunConfig;

void add_spec_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--b", cfg.b, "coefficient b of the base term (p/q or re,im)");
    sub->add_option("--beta", cfg.beta, "exponent beta of the base term (p/q or re,im)");
    sub->add_option("--gamma", cfg.gammas, "perturbation exponents, one per variable")->expected(1, -1);
    sub->add_option("--m", cfg.branch_m, "branch index selecting the zero alpha");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("-o,--output", cfg.output, "write the report here (default: standard output)");
    sub->add_option("--format", cfg.format, "report format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, rootseries::cli::Format>{{"json", rootseries::cli::Format::json},
                                                           {"csv", rootseries::cli::Format::csv}}));
    sub->add_flag("--timing", cfg.timing, "include wall time in the report");
    sub->add_flag("--unsafe", cfg.unsafe, "lift the desk-scale bounds on K, N, n and D");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Taylor series of a perturbed root of 1 + b z^beta, with oracle checks"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* expand = app.add_subcommand("expand", "closed-form coefficient table up to total order K");
    add_spec_options(expand, cfg);
    expand->add_option("--K", cfg.K, "maximum total order");
    expand->add_flag("--taylor", cfg.taylor, "Taylor coefficients (partials divided by prod n_i!) instead of raw partials");
    expand->add_flag("--values", cfg.with_values, "add numeric values on the selected branch");
    expand->add_option("--threads", cfg.threads, "worker threads for the table");
    add_output_options(expand, cfg);

    auto* oracle = app.add_subcommand("oracle", "closed form against the partition recursion (exact)");
    add_spec_options(oracle, cfg);
    oracle->add_option("--K", cfg.K, "maximum total order (default 6)");
    oracle->add_option("--seed", cfg.seed, "seed for random specs (used without --gamma)");
    oracle->add_option("--specs", cfg.specs, "random specs per dimension (default 20)");
    add_output_options(oracle, cfg);

    auto* residual = app.add_subcommand("residual", "decay of |f| along the truncated series");
    add_spec_options(residual, cfg);
    residual->add_option("--K", cfg.K, "maximum truncation order (default 4)");
    residual->add_option("--a", cfg.a_point, "base point, one complex re,im per variable")->expected(1, -1);
    residual->add_option("--scales", cfg.scales, "scale factors applied to the base point")->expected(1, -1);
    residual->add_option("--seed", cfg.seed, "seed for random specs (used without --gamma)");
    residual->add_option("--specs", cfg.specs, "number of random specs");
    add_output_options(residual, cfg);

    auto* identities = app.add_subcommand("identities", "Stirling, set-partition and derivation identities");
    identities->add_option("--seed", cfg.seed, "seed for random instances");
    identities->add_option("--N", cfg.N, "size of the exhaustive s-tau grid");
    add_output_options(identities, cfg);

    auto* bracket = app.add_subcommand("bracket", "bracket-series coefficients against the closed recovery formula");
    auto* recover = app.add_subcommand("recover", "closed recovery formula against the substituted root series");
    for (auto* sub : {bracket, recover}) {
        sub->add_option("--n", cfg.n, "polynomial degree");
        sub->add_option("--i1", cfg.i1, "lower index of the pair (all pairs when omitted)");
        sub->add_option("--i2", cfg.i2, "upper index of the pair");
        sub->add_option("--D", cfg.D, "maximum total degree in the free variables");
        add_output_options(sub, cfg);
    }

    CLI11_PARSE(app, argc, argv);

    const std::pair<CLI::App*, Command> commands[] = {
        {expand, Command::expand},         {oracle, Command::oracle},   {residual, Command::residual},
        {identities, Command::identities}, {bracket, Command::bracket}, {recover, Command::recover}};
    for (const auto& [sub, cmd] : commands) {
        if (sub->parsed()) {
            cfg.command = cmd;
        }
    }

    auto unset = [](CLI::App* sub, const char* name) { return sub->get_option(name)->count() == 0; };
    if (cfg.command == Command::oracle) {
        cfg.K = unset(oracle, "--K") ? 6 : cfg.K;
        cfg.specs = unset(oracle, "--specs") ? 20 : cfg.specs;
    } else if (cfg.command == Command::residual) {
        cfg.K = unset(residual, "--K") ? 4 : cfg.K;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        auto report = rootseries::cli::run(cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cfg.timing) {
            report.wall_seconds = seconds;
        }
        const std::string text = rootseries::cli::render(report, cfg.format);
        std::FILE* summary_stream = stdout;
        if (cfg.output.empty()) {
            std::cout << text;
            summary_stream = stderr;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!(out << text)) {
                std::cerr << "error: cannot write " << cfg.output << '\n';
                return 2;
            }
        }
        std::fprintf(summary_stream, "%s: %zu checks, %zu passed, %zu failed (%.2f s)\n",
                     std::string(rootseries::cli::command_name(cfg.command)).c_str(), report.records.size(),
                     report.passed(), report.failed(), seconds);
        return report.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
