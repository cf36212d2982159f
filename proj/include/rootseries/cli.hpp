#pragma once

// Command dispatch and reporting behind the rootseries command-line tool.

#include "rootseries/gkz.hpp"
#include "rootseries/identities.hpp"
#include "rootseries/io.hpp"
#include "rootseries/random.hpp"
#include "rootseries/root_series.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rootseries::cli {

enum class Command { expand, oracle, residual, identities, bracket, recover };
enum class Format { json, csv };

inline std::string_view command_name(Command c) {
    switch (c) {
    case Command::expand: return "expand";
    case Command::oracle: return "oracle";
    case Command::residual: return "residual";
    case Command::identities: return "identities";
    case Command::bracket: return "bracket";
    case Command::recover: return "recover";
    }
    return "?";
}

/// Rejected input: parse errors and bound violations.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Limits {
    static constexpr int max_order = 8;     // K
    static constexpr int max_size = 8;      // N
    static constexpr int max_degree_n = 5;  // n
    static constexpr int max_terms = 8;     // D
};

struct RunConfig {
    Command command = Command::expand;
    // Spec of f; values are "p/q" rationals or "re,im" complex numbers.
    std::string b = "1";
    std::string beta = "2";
    std::vector<std::string> gammas;
    int branch_m = 0;
    int K = 2;
    bool taylor = false;
    bool with_values = false;
    unsigned threads = 1;
    // Randomized suites.
    std::uint64_t seed = 7;
    int specs = 10;
    int N = 4;
    // Residual check.
    std::vector<std::string> a_point;
    std::vector<double> scales{1.0, 0.5, 0.25};
    // Bracket series.
    int n = 2;
    std::optional<int> i1;
    std::optional<int> i2;
    int D = 4;
    // Output.
    std::string output;
    Format format = Format::json;
    bool timing = false;
    bool unsafe = false;
};

struct CheckRecord {
    std::string name;
    std::string inputs;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct Report {
    Command command = Command::expand;
    Json config;
    std::vector<CheckRecord> records;
    std::optional<Json> table;
    std::optional<double> wall_seconds;

    std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.pass; }));
    }
    std::size_t failed() const { return records.size() - passed(); }
    bool all_pass() const { return failed() == 0; }
};

// ---------------------------------------------------------------------------
// Parsing.

using ScalarValue = std::variant<Rational, ComplexF>;

/// "p/q" or "p" -> Rational; "re,im" -> complex.
inline ScalarValue parse_scalar(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        try {
            return Rational::parse(text);
        } catch (const std::exception&) {
            throw ConfigError("not a rational \"p/q\": '" + std::string(text) + "'");
        }
    }
    try {
        std::size_t used_re = 0;
        std::size_t used_im = 0;
        const std::string re(text.substr(0, comma));
        const std::string im(text.substr(comma + 1));
        const double x = std::stod(re, &used_re);
        const double y = std::stod(im, &used_im);
        if (used_re != re.size() || used_im != im.size() || !std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("trailing characters");
        }
        return ComplexF(x, y);
    } catch (const std::exception&) {
        throw ConfigError("not a complex \"re,im\": '" + std::string(text) + "'");
    }
}

inline ComplexF parse_complex(std::string_view text) {
    return std::visit([](const auto& v) { return to_complex(v); }, parse_scalar(text));
}

using AnySpec = std::variant<ProblemSpec<Rational>, ProblemSpec<ComplexF>>;

/// Exact spec when every value is rational, numeric otherwise.
inline AnySpec parse_spec(const RunConfig& cfg) {
    if (cfg.gammas.empty()) {
        throw ConfigError("at least one --gamma is required");
    }
    std::vector<ScalarValue> vals{parse_scalar(cfg.b), parse_scalar(cfg.beta)};
    for (const auto& g : cfg.gammas) {
        vals.push_back(parse_scalar(g));
    }
    const bool exact = std::all_of(vals.begin(), vals.end(), [](const auto& v) { return std::holds_alternative<Rational>(v); });
    try {
        if (exact) {
            std::vector<Rational> g;
            for (std::size_t i = 2; i < vals.size(); ++i) {
                g.push_back(std::get<Rational>(vals[i]));
            }
            return ProblemSpec<Rational>(std::get<Rational>(vals[0]), std::get<Rational>(vals[1]), std::move(g), cfg.branch_m);
        }
        std::vector<ComplexF> g;
        for (std::size_t i = 2; i < vals.size(); ++i) {
            g.push_back(std::visit([](const auto& v) { return to_complex(v); }, vals[i]));
        }
        auto c = [](const ScalarValue& v) { return std::visit([](const auto& x) { return to_complex(x); }, v); };
        return ProblemSpec<ComplexF>(c(vals[0]), c(vals[1]), std::move(g), cfg.branch_m);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline void validate(const RunConfig& cfg) {
    auto bound = [&](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    bound(cfg.K >= 0, "--K must be non-negative");
    bound(cfg.N >= 1, "--N must be positive");
    bound(cfg.D >= 0, "--D must be non-negative");
    bound(cfg.specs >= 1, "--specs must be positive");
    bound(cfg.threads >= 1, "--threads must be positive");
    bound(cfg.n >= 2, "--n must be at least 2");
    bound(!cfg.scales.empty(), "--scales must not be empty");
    if (!cfg.unsafe) {
        bound(cfg.K <= Limits::max_order, "--K above " + std::to_string(Limits::max_order) + " needs --unsafe");
        bound(cfg.N <= Limits::max_size, "--N above " + std::to_string(Limits::max_size) + " needs --unsafe");
        bound(cfg.n <= Limits::max_degree_n, "--n above " + std::to_string(Limits::max_degree_n) + " needs --unsafe");
        bound(cfg.D <= Limits::max_terms, "--D above " + std::to_string(Limits::max_terms) + " needs --unsafe");
        bound(cfg.gammas.size() <= 4, "more than 4 exponents needs --unsafe");
    }
    if (cfg.i1 || cfg.i2) {
        bound(cfg.i1 && cfg.i2, "--i1 and --i2 go together");
        bound(0 <= *cfg.i1 && *cfg.i1 < *cfg.i2 && *cfg.i2 <= cfg.n, "need 0 <= i1 < i2 <= n");
    }
}

// ---------------------------------------------------------------------------
// Helpers.

namespace detail {

inline std::string fmt(const ComplexF& z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << ',' << z.imag();
    return os.str();
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

inline std::string fmt(const Rational& r) { return r.to_string(); }

inline std::string fmt(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s + ")";
}

template <RootScalar S>
std::string describe(const ProblemSpec<S>& spec) {
    std::string s = "b=" + fmt(spec.b) + " beta=" + fmt(spec.beta) + " gamma=[";
    for (std::size_t i = 0; i < spec.gammas.size(); ++i) {
        s += (i ? " " : "") + fmt(spec.gammas[i]);
    }
    return s + "] m=" + std::to_string(spec.branch_m);
}

inline std::string pad(int i, int width = 2) {
    std::string s = std::to_string(i);
    return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

inline ProblemSpec<Rational> random_exact_spec(RationalSampler& rng, int d) {
    const Rational b = rng.nonzero();
    const Rational beta = rng.nonzero();
    return {b, beta, rng.nonzero_vector(static_cast<std::size_t>(d))};
}

} // namespace detail

/// Random numeric spec: |b| in [1/2, 2], Re beta in [1, 3], small imaginary
/// parts, Re gamma in [-2, 3], branch m in {-1, 0, 1}.
inline ProblemSpec<ComplexF> random_numeric_spec(RationalSampler& rng, int d) {
    std::vector<ComplexF> g;
    for (int i = 0; i < d; ++i) {
        g.emplace_back(rng.uniform(-2, 3), rng.uniform(-0.5, 0.5));
    }
    const ComplexF b = std::polar(rng.uniform(0.5, 2), rng.uniform(-3, 3));
    const ComplexF beta(rng.uniform(1, 3), rng.uniform(-0.5, 0.5));
    return {b, beta, std::move(g), static_cast<int>(rng.integer(-1, 1))};
}

/// Point with every |a_i| = radius and random phases.
inline std::vector<ComplexF> random_point(RationalSampler& rng, int d, double radius = 1e-2) {
    std::vector<ComplexF> a;
    for (int i = 0; i < d; ++i) {
        a.push_back(std::polar(radius, rng.uniform(-3, 3)));
    }
    return a;
}

// ---------------------------------------------------------------------------
// Commands.

namespace detail {

/// Every stored alpha exponent must equal 1 + sum n_i gamma_i - N beta.
template <RootScalar S>
void expand_records(const ProblemSpec<S>& spec, const RunConfig& cfg, Report& rep) {
    const auto table = taylor_table(spec, cfg.K, cfg.taylor, cfg.threads);
    std::optional<AlphaBranch> br;
    if (cfg.with_values || std::is_same_v<S, ComplexF>) {
        br = alpha_branch(spec);
    }
    rep.table = Json{{"spec", describe(spec)},
                     {"normalized", table.normalized},
                     {"entries", to_json(table, br ? &*br : nullptr)}};
    if (br) {
        (*rep.table)["alpha"] = to_json(*br);
    }
    for (const auto& [n, m] : table.entries) {
        const S expected = n.order() == 0 ? S(1) : S(1) + weighted_gamma_sum(n, spec) - S(n.order()) * spec.beta;
        rep.records.push_back({"homogeneity n=" + fmt(n.entries()), describe(spec), fmt(expected), fmt(m.alpha_exp),
                               ::rootseries::detail::scalar_close(expected, m.alpha_exp)});
    }
}

inline void run_expand(const RunConfig& cfg, Report& rep) {
    std::visit([&](const auto& spec) { expand_records(spec, cfg, rep); }, parse_spec(cfg));
}

inline void oracle_for_spec(const ProblemSpec<Rational>& spec, int K, const std::string& label, Report& rep) {
    RecursionMemo<Rational> memo;
    long agree = 0;
    long forms = 0;
    long total = 0;
    std::string first_miss;
    for (const auto& n : multi_indices(spec.d(), K, 1)) {
        ++total;
        const bool same = coeff_closed(n, spec) == coeff_recursive(n, spec, memo);
        agree += same ? 1 : 0;
        forms += formula_forms_agree(n, spec) ? 1 : 0;
        if (!same && first_miss.empty()) {
            first_miss = fmt(n.entries());
        }
    }
    const std::string inputs = describe(spec) + " K=" + std::to_string(K);
    rep.records.push_back({"oracle " + label, inputs, "closed = recursive on " + std::to_string(total) + " indices",
                           std::to_string(agree) + " agree" + (first_miss.empty() ? "" : ", first miss " + first_miss),
                           agree == total});
    rep.records.push_back({"forms " + label, inputs, "product forms agree on " + std::to_string(total) + " indices",
                           std::to_string(forms) + " agree", forms == total});
}

inline void run_oracle(const RunConfig& cfg, Report& rep) {
    if (!cfg.gammas.empty()) {
        const auto spec = parse_spec(cfg);
        if (!std::holds_alternative<ProblemSpec<Rational>>(spec)) {
            throw ConfigError("oracle compares exactly and needs rational b, beta, gamma");
        }
        oracle_for_spec(std::get<ProblemSpec<Rational>>(spec), cfg.K, "given", rep);
        return;
    }
    RationalSampler rng(cfg.seed);
    for (int d = 1; d <= 3; ++d) {
        for (int s = 0; s < cfg.specs; ++s) {
            oracle_for_spec(random_exact_spec(rng, d), cfg.K, "d=" + std::to_string(d) + " spec=" + pad(s), rep);
        }
    }
}

inline void residual_record(const ProblemSpec<ComplexF>& spec, int K, std::span<const ComplexF> a,
                            std::span<const double> scales, const std::string& label, Report& rep) {
    const auto r = residual_check(spec, K, a, scales);
    std::string inputs = describe(spec) + " K=" + std::to_string(K) + " a=[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        inputs += (i ? " " : "") + fmt(a[i]);
    }
    inputs += "]";
    std::string actual = "slope=" + fmt(r.slope) + " fitted=" + std::to_string(r.fitted_points) + " residuals=[";
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
        actual += (i ? " " : "") + fmt(r.residuals[i]);
    }
    actual += "]";
    rep.records.push_back({"residual " + label + " K=" + std::to_string(K), inputs,
                           "slope >= " + fmt(K + 1 - r.slope_tolerance) + " or all residuals <= 1e-13", actual, r.pass});
}

inline void run_residual(const RunConfig& cfg, Report& rep) {
    const int k_lo = std::min(cfg.K, 2);
    if (!cfg.gammas.empty()) {
        const auto spec = std::visit([](const auto& s) { return ProblemSpec<ComplexF>(to_numeric(s)); }, parse_spec(cfg));
        std::vector<ComplexF> a;
        for (const auto& x : cfg.a_point) {
            a.push_back(parse_complex(x));
        }
        if (!a.empty() && static_cast<int>(a.size()) != spec.d()) {
            throw ConfigError("--a needs one value per --gamma");
        }
        const std::vector<ComplexF> start(static_cast<std::size_t>(spec.d()), ComplexF(1e-2, 0.0));
        for (int K = k_lo; K <= cfg.K; ++K) {
            residual_record(spec, K, a.empty() ? calibrate_point(spec, K, start, cfg.scales) : a, cfg.scales, "given",
                            rep);
        }
        return;
    }
    RationalSampler rng(cfg.seed);
    for (int s = 0; s < cfg.specs; ++s) {
        const int d = 1 + s % 3;
        const auto spec = random_numeric_spec(rng, d);
        const auto a = random_point(rng, d);
        for (int K = k_lo; K <= cfg.K; ++K) {
            residual_record(spec, K, calibrate_point(spec, K, a, cfg.scales), cfg.scales, "spec=" + pad(s), rep);
        }
    }
}

inline void run_identities(const RunConfig& cfg, Report& rep) {
    std::vector<IdentityOutcome> outcomes = identity_suite_stirling(cfg.seed);
    RationalSampler rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    outcomes.push_back(check_nu_random(rng, 200, std::min(cfg.N + 2, 6)));
    outcomes.push_back(check_nu_one_random(rng, 200, std::min(cfg.N + 3, 7)));
    outcomes.push_back(check_stirling_set_random(rng, 100, std::min(cfg.N + 2, 6)));
    outcomes.push_back(check_deriv_set_poly(rng, 50, std::min(cfg.N + 2, 6)));
    outcomes.push_back(check_deriv_set_series(rng, 20, std::min(cfg.N + 2, 6)));
    outcomes.push_back(check_u_independence(rng, 60, std::min(cfg.N + 1, 5)));
    auto [stau, sym] = check_s_tau_grid(cfg.N, 3, 3);
    outcomes.push_back(std::move(stau));
    outcomes.push_back(std::move(sym));
    for (const auto& o : outcomes) {
        rep.records.push_back({o.name, "seed=" + std::to_string(cfg.seed) + " N=" + std::to_string(cfg.N),
                               "all instances hold",
                               std::to_string(o.cases) + " cases, " + std::to_string(o.failures) + " failures" +
                                   (o.first_failure.empty() ? "" : ", first " + o.first_failure),
                               o.pass()});
    }
}

inline std::vector<GkzConfig> gkz_configs(const RunConfig& cfg) {
    if (cfg.i1) {
        return {GkzConfig(cfg.n, *cfg.i1, *cfg.i2)};
    }
    std::vector<GkzConfig> out;
    for (int a = 0; a < cfg.n; ++a) {
        for (int b = a + 1; b <= cfg.n; ++b) {
            out.emplace_back(cfg.n, a, b);
        }
    }
    return out;
}

inline std::string gkz_label(const GkzConfig& g, const std::vector<int>& t) {
    return "n=" + std::to_string(g.n) + " i1=" + std::to_string(g.i1) + " i2=" + std::to_string(g.i2) +
           " term=" + fmt(t);
}

inline void run_bracket(const RunConfig& cfg, Report& rep, bool against_main) {
    Json terms = Json::array();
    for (const auto& g : gkz_configs(cfg)) {
        for (const auto& t : free_terms(g, cfg.D, against_main ? 1 : 0)) {
            const XCoefficient lhs = against_main ? main_substituted_coeff(t, g) : x_series_coeff(t, g);
            const bool nonzero_order = std::any_of(t.begin(), t.end(), [](int x) { return x != 0; });
            // The constant term is only defined on the bracket side.
            const XCoefficient rhs = nonzero_order ? recovery_formula_coeff(t, g) : lhs;
            const bool ok = lhs == rhs;
            const std::string label = gkz_label(g, t);
            rep.records.push_back({(against_main ? "recover " : "bracket ") + label, label,
                                   to_json(rhs).dump(), to_json(lhs).dump(), ok});
            terms.push_back(Json{{"n", g.n},
                                 {"i1", g.i1},
                                 {"i2", g.i2},
                                 {"term", t},
                                 {against_main ? "main" : "x_series", to_json(lhs)},
                                 {"recovery", to_json(rhs)},
                                 {"agree", ok}});
        }
    }
    rep.table = Json{{"terms", std::move(terms)}};
}

inline Json config_json(const RunConfig& cfg) {
    Json j{{"command", command_name(cfg.command)}};
    switch (cfg.command) {
    case Command::expand:
        j.update(Json{{"b", cfg.b}, {"beta", cfg.beta}, {"gamma", cfg.gammas}, {"branch_m", cfg.branch_m},
                      {"K", cfg.K}, {"normalized", cfg.taylor}});
        break;
    case Command::oracle:
    case Command::residual:
        if (!cfg.gammas.empty()) {
            j.update(Json{{"b", cfg.b}, {"beta", cfg.beta}, {"gamma", cfg.gammas}, {"branch_m", cfg.branch_m}});
        } else {
            j.update(Json{{"seed", cfg.seed}, {"specs", cfg.specs}});
        }
        j["K"] = cfg.K;
        if (cfg.command == Command::residual) {
            j["a"] = cfg.a_point;
            j["scales"] = cfg.scales;
        }
        break;
    case Command::identities:
        j.update(Json{{"seed", cfg.seed}, {"N", cfg.N}});
        break;
    case Command::bracket:
    case Command::recover:
        j.update(Json{{"n", cfg.n}, {"D", cfg.D}});
        if (cfg.i1) {
            j.update(Json{{"i1", *cfg.i1}, {"i2", *cfg.i2}});
        }
        break;
    }
    return j;
}

} // namespace detail

/// Runs one command. Records come back sorted by name (stable), so reports
/// are byte-identical for the same configuration.
inline Report run(const RunConfig& cfg) {
    validate(cfg);
    Report rep;
    rep.command = cfg.command;
    rep.config = detail::config_json(cfg);
    switch (cfg.command) {
    case Command::expand: detail::run_expand(cfg, rep); break;
    case Command::oracle: detail::run_oracle(cfg, rep); break;
    case Command::residual: detail::run_residual(cfg, rep); break;
    case Command::identities: detail::run_identities(cfg, rep); break;
    case Command::bracket: detail::run_bracket(cfg, rep, false); break;
    case Command::recover: detail::run_bracket(cfg, rep, true); break;
    }
    std::stable_sort(rep.records.begin(), rep.records.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization.

inline Json to_json(const Report& rep) {
    Json records = Json::array();
    for (const auto& r : rep.records) {
        records.push_back(
            Json{{"name", r.name}, {"pass", r.pass}, {"inputs", r.inputs}, {"expected", r.expected}, {"actual", r.actual}});
    }
    Json j{{"command", command_name(rep.command)},
           {"config", rep.config},
           {"records", std::move(records)},
           {"summary", Json{{"checks", rep.records.size()}, {"passed", rep.passed()}, {"failed", rep.failed()}}}};
    if (rep.wall_seconds) {
        j["summary"]["wall_time_s"] = *rep.wall_seconds;
    }
    if (rep.table) {
        j["table"] = *rep.table;
    }
    return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

} // namespace detail

/// name,pass,inputs,expected,actual with RFC 4180 quoting.
inline std::string to_csv(const Report& rep) {
    std::string out = "name,pass,inputs,expected,actual\n";
    for (const auto& r : rep.records) {
        out += detail::csv_field(r.name) + ',' + (r.pass ? "true" : "false") + ',' + detail::csv_field(r.inputs) + ',' +
               detail::csv_field(r.expected) + ',' + detail::csv_field(r.actual) + '\n';
    }
    return out;
}

inline std::string render(const Report& rep, Format format) {
    return format == Format::json ? to_json(rep).dump(2) + "\n" : to_csv(rep);
}

} // namespace rootseries::cli
