// Series for the root of 1 + a z + z^2 that starts at z = i, compared with
// the quadratic formula.

#include "rootseries/root_series.hpp"

#include <cstdio>
#include <vector>

int main() {
    using namespace rootseries;
    const ProblemSpec<Rational> spec(Rational(1), Rational(2), {Rational(1)});
    const AlphaBranch alpha = alpha_branch(spec);
    const auto table = taylor_table(spec, 6, true);

    for (const auto& [n, m] : table.entries) {
        std::printf("a^%d: %s * alpha^%s\n", n[0], m.coeff.to_string().c_str(), m.alpha_exp.to_string().c_str());
    }
    for (double a : {0.1, 0.01, 0.001}) {
        const std::vector<ComplexF> point{ComplexF(a, 0.0)};
        const ComplexF series = evaluate_series(table, alpha, point);
        const ComplexF exact = quadratic_root(point[0]);
        std::printf("a=%-6g series=%.15f%+.15fi  |error|=%.2e\n", a, series.real(), series.imag(),
                    std::abs(series - exact));
    }
}
