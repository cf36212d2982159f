// Runs each acceptance criterion at its stated scale and tolerance and prints
// one PASS/FAIL line per criterion. A criterion also fails when it exceeds its
// time budget. Exit status is nonzero if any criterion fails.

#include "rootseries/cli.hpp"
#include "rootseries/gkz.hpp"
#include "rootseries/identities.hpp"
#include "rootseries/root_series.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace rootseries;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string count_detail(long ok, long total, const std::string& what) {
    return std::to_string(ok) + "/" + std::to_string(total) + " " + what;
}

Outcome closed_vs_recursion() {
    RationalSampler rng(1001);
    long ok = 0;
    long total = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int s = 0; s < 20; ++s) {
            const auto spec = cli::detail::random_exact_spec(rng, d);
            RecursionMemo<Rational> memo;
            for (const auto& n : multi_indices(d, 6, 1)) {
                ++total;
                ok += coeff_closed(n, spec) == coeff_recursive(n, spec, memo) ? 1 : 0;
            }
        }
    }
    return {ok == total, count_detail(ok, total, "coefficients equal (coeff and exponent)")};
}

Outcome formula_forms() {
    RationalSampler rng(1002);
    long ok = 0;
    long total = 0;
    for (int s = 0; s < 100; ++s) {
        const int d = 1 + s % 3;
        const auto spec = cli::detail::random_exact_spec(rng, d);
        for (const auto& n : multi_indices(d, 6, 1)) {
            ++total;
            ok += formula_forms_agree(n, spec) ? 1 : 0;
        }
    }
    return {ok == total, count_detail(ok, total, "product forms equal")};
}

Outcome residual_scaling() {
    RationalSampler rng(1003);
    const std::vector<double> scales{1.0, 0.5, 0.25};
    long ok = 0;
    long total = 0;
    double worst_slope_margin = std::numeric_limits<double>::infinity();
    int unfitted = 0;
    for (int s = 0; s < 10; ++s) {
        const int d = 1 + s % 3;
        const auto spec = cli::random_numeric_spec(rng, d);
        const auto a = cli::random_point(rng, d);
        for (int K = 2; K <= 4; ++K) {
            const auto rep = residual_check(spec, K, calibrate_point(spec, K, a, scales), scales);
            ++total;
            ok += rep.pass ? 1 : 0;
            if (rep.fitted_points >= 2) {
                worst_slope_margin = std::min(worst_slope_margin, rep.slope - (K + 1));
            } else {
                ++unfitted;
            }
        }
    }
    const ProblemSpec<Rational> quad{Rational(1), Rational(2), {Rational(1)}};
    const auto br = alpha_branch(quad);
    const auto table = taylor_table(quad, 4, true);
    double worst_rel = 0.0;
    for (double a : {1e-3, -1e-3}) {
        const std::vector<ComplexF> pt{a};
        const ComplexF exact = quadratic_root(a);
        worst_rel = std::max(worst_rel, std::abs(evaluate_series(table, br, pt) - exact) / std::abs(exact));
    }
    std::ostringstream os;
    os << count_detail(ok, total, "slopes >= K+1-0.2") << " (" << unfitted << " below the floor), min slope-(K+1) "
       << worst_slope_margin
       << ", quadratic root rel err " << worst_rel;
    return {ok == total && unfitted == 0 && worst_rel <= 1e-12, os.str()};
}

Outcome deriv_set() {
    RationalSampler rng(1004);
    const auto poly = check_deriv_set_poly(rng, 50, 6, 4);
    const auto series = check_deriv_set_series(rng, 20, 6, 12);
    return {poly.pass() && series.pass(), count_detail(poly.cases - poly.failures, poly.cases, "polynomial") + ", " +
                                              count_detail(series.cases - series.failures, series.cases, "series")};
}

Outcome s_tau() {
    auto [stau, sym] = check_s_tau_grid(5, 3, 3);
    return {stau.pass() && sym.pass(), count_detail(stau.cases - stau.failures, stau.cases, "grid instances") + ", " +
                                           count_detail(sym.cases - sym.failures, sym.cases, "permutation checks")};
}

Outcome nu_identities() {
    RationalSampler rng(1006);
    const auto nu = check_nu_random(rng, 200, 6);
    const auto one = check_nu_one_random(rng, 200, 7);
    return {nu.pass() && one.pass(), count_detail(nu.cases - nu.failures, nu.cases, "nu") + ", " +
                                         count_detail(one.cases - one.failures, one.cases, "nu=1")};
}

Outcome stirling_suite() {
    long cases = 0;
    long failures = 0;
    std::string first;
    for (const auto& o : identity_suite_stirling(1007)) {
        cases += o.cases;
        failures += o.failures;
        if (!o.pass() && first.empty()) {
            first = o.name + ": " + o.first_failure;
        }
    }
    return {failures == 0 && cases > 0,
            count_detail(cases - failures, cases, "instances") + (first.empty() ? "" : ", first failure " + first)};
}

Outcome recovery() {
    long ok_bracket = 0;
    long ok_main = 0;
    long total = 0;
    for (int n = 2; n <= 4; ++n) {
        for (int i1 = 0; i1 < n; ++i1) {
            for (int i2 = i1 + 1; i2 <= n; ++i2) {
                const GkzConfig cfg(n, i1, i2);
                for (const auto& t : free_terms(cfg, 4, 1)) {
                    ++total;
                    const auto rec = recovery_formula_coeff(t, cfg);
                    ok_bracket += x_series_coeff(t, cfg) == rec ? 1 : 0;
                    ok_main += main_substituted_coeff(t, cfg) == rec ? 1 : 0;
                }
            }
        }
    }
    return {ok_bracket == total && ok_main == total,
            count_detail(ok_bracket, total, "bracket = recovery") + ", " + count_detail(ok_main, total, "recovery = main")};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "rootseries_acceptance";
    std::filesystem::create_directories(dir);
    std::string reports[2];
    for (int i = 0; i < 2; ++i) {
        const auto path = dir / ("identities_" + std::to_string(i) + ".json");
        std::filesystem::remove(path);
        const std::string cmd =
            std::string(ROOTSERIES_CLI_PATH) + " identities --seed 7 -o " + path.string() + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            return {false, "run " + std::to_string(i + 1) + " exited with status " + std::to_string(status)};
        }
        reports[i] = read_file(path);
    }
    const bool same = !reports[0].empty() && reports[0] == reports[1];
    return {same, std::to_string(reports[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "closed form vs recursion oracle", 60.0, closed_vs_recursion},
        {2, "formula-form agreement", 1.0, formula_forms},
        {3, "residual scaling", 10.0, residual_scaling},
        {4, "subset derivation identity", 30.0, deriv_set},
        {5, "s-tau identity and symmetry of F", 60.0, s_tau},
        {6, "nu and nu=1 identities", 10.0, nu_identities},
        {7, "Stirling suite", 10.0, stirling_suite},
        {8, "root recovery", 60.0, recovery},
        {9, "determinism", 5.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = out.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs, c.budget_s, in_time ? "" : " (over budget)");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
