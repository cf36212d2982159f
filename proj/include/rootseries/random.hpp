#pragma once

#include "rootseries/scalar.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace rootseries {

/// Deterministic source of small random rationals.
///
/// Draws use plain modular reduction of mt19937_64 output rather than
/// std::uniform_int_distribution, whose algorithm is implementation-defined,
/// so a seed reproduces the same stream on every standard library.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    long integer(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(engine_() % span);
    }

    /// Numerator in [-9, 9] \ {0}, denominator in [1, 9].
    Rational nonzero() {
        long num = integer(1, 9);
        if (integer(0, 1) == 1) {
            num = -num;
        }
        return Rational(BigInt(num), BigInt(integer(1, 9)));
    }

    /// Like nonzero() but the numerator may also be 0.
    Rational any() {
        return Rational(BigInt(integer(-9, 9)), BigInt(integer(1, 9)));
    }

    std::vector<Rational> nonzero_vector(std::size_t n) {
        std::vector<Rational> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(nonzero());
        }
        return v;
    }

    /// Random polynomial of degree exactly `degree` (nonzero leading coefficient).
    UniPoly polynomial(int degree) {
        std::vector<Rational> c;
        for (int i = 0; i < degree; ++i) {
            c.push_back(any());
        }
        c.push_back(nonzero());
        return UniPoly(std::move(c));
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace rootseries
