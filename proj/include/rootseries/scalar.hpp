#pragma once

// Scalar field layer: exact rationals, the quotient ring Q[xi]/(xi^d + 1),
// dense univariate polynomials over Q, and falling factorials over any of them.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rootseries {

using BigInt = mpz_class;
using ComplexF = std::complex<double>;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;

    template <std::integral I>
    Rational(I n) : value_(static_cast<long>(n)) {}

    Rational(const BigInt& n) : value_(n) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) {
            throw std::domain_error("Rational: zero denominator");
        }
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }

    /// Parses "p/q" or "p" (optional leading sign, no whitespace).
    static Rational parse(std::string_view text) {
        auto valid_int = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
                s.remove_prefix(1);
            }
            return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        };
        auto to_big = [](std::string_view s) {
            if (!s.empty() && s.front() == '+') {
                s.remove_prefix(1);
            }
            return BigInt(std::string(s), 10);
        };
        const auto slash = text.find('/');
        const auto num = text.substr(0, slash);
        if (!valid_int(num)) {
            throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
        }
        if (slash == std::string_view::npos) {
            return Rational(to_big(num));
        }
        const auto den = text.substr(slash + 1);
        if (!valid_int(den)) {
            throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
        }
        const BigInt d = to_big(den);
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(to_big(num), d);
    }

    BigInt numerator() const { return value_.get_num(); }
    BigInt denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    double to_double() const { return value_.get_d(); }

    /// "num/den", the wire format used by every JSON report.
    std::string to_string() const {
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    Rational operator-() const { return from_mpq(-value_); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) {
            throw std::domain_error("Rational: division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// Integer power; negative exponents invert (and throw on zero base).
    Rational pow(long e) const {
        if (e < 0) {
            return Rational(1) / pow(-e);
        }
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(e));
        return Rational(num, den);
    }

    /// Floor for integral use; only meaningful when is_integer().
    long to_long() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return q.get_si();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    static Rational from_mpq(mpq_class v) {
        Rational r;
        r.value_ = std::move(v);
        return r;
    }

    mpq_class value_{0};
};

enum class ArithOp { add, sub, mul, div };

/// Checked rational arithmetic: division by zero yields nullopt instead of throwing.
inline std::optional<Rational> rational_arith(const Rational& a, const Rational& b, ArithOp op) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div:
        if (b.is_zero()) {
            return std::nullopt;
        }
        return a / b;
    }
    return std::nullopt;
}

inline BigInt factorial(long n) {
    if (n < 0) {
        throw std::domain_error("factorial of negative integer");
    }
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/// Integer binomial; zero outside 0 <= k <= n.
inline BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/// (x)_k = x (x-1) ... (x-k+1); the empty product is 1.
template <class T>
    requires requires(T a, T b) { T(1); a * b; a - T(1); }
T falling_factorial(const T& x, long k) {
    if (k < 0) {
        throw std::domain_error("falling factorial with negative length");
    }
    T result(1);
    for (long i = 0; i < k; ++i) {
        result = result * (x - T(static_cast<int>(i)));
    }
    return result;
}

/// Generalized binomial C(x, k) = (x)_k / k! for rational x; zero for k < 0.
inline Rational binomial(const Rational& x, long k) {
    if (k < 0) {
        return 0;
    }
    return falling_factorial(x, k) / Rational(factorial(k));
}

inline ComplexF to_complex(const Rational& r) { return {r.to_double(), 0.0}; }
inline ComplexF to_complex(const ComplexF& z) { return z; }

// ---------------------------------------------------------------------------

/// Element c_0 + c_1 xi + ... + c_{d-1} xi^{d-1} of Q[xi]/(xi^d + 1).
class XiElement {
public:
    explicit XiElement(int d) : coeffs_(check_degree(d)) {}

    explicit XiElement(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        check_degree(static_cast<int>(coeffs_.size()));
    }

    static XiElement constant(int d, const Rational& c) {
        XiElement r(d);
        r.coeffs_[0] = c;
        return r;
    }

    /// The class of xi itself. For d = 1 the relation xi = -1 already reduces it.
    static XiElement generator(int d) { return power(d, 1); }

    /// xi^e for any integer e, using xi^d = -1 (so xi^{2d} = 1).
    static XiElement power(int d, long e) {
        check_degree(d);
        const long period = 2L * d;
        long r = ((e % period) + period) % period;
        XiElement out(d);
        if (r < d) {
            out.coeffs_[static_cast<std::size_t>(r)] = 1;
        } else {
            out.coeffs_[static_cast<std::size_t>(r - d)] = -1;
        }
        return out;
    }

    int degree() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
    }

    XiElement operator-() const {
        XiElement r(*this);
        for (auto& c : r.coeffs_) {
            c = -c;
        }
        return r;
    }

    friend XiElement operator+(const XiElement& a, const XiElement& b) {
        check_same(a, b);
        XiElement r(a);
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) {
            r.coeffs_[i] += b.coeffs_[i];
        }
        return r;
    }

    friend XiElement operator-(const XiElement& a, const XiElement& b) { return a + (-b); }

    friend XiElement operator*(const XiElement& a, const XiElement& b) {
        check_same(a, b);
        const std::size_t d = a.coeffs_.size();
        XiElement r(static_cast<int>(d));
        for (std::size_t i = 0; i < d; ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                const Rational term = a.coeffs_[i] * b.coeffs_[j];
                if (i + j < d) {
                    r.coeffs_[i + j] += term;
                } else {
                    r.coeffs_[i + j - d] -= term;
                }
            }
        }
        return r;
    }

    friend XiElement operator*(const Rational& s, const XiElement& a) {
        XiElement r(a);
        for (auto& c : r.coeffs_) {
            c *= s;
        }
        return r;
    }

    friend bool operator==(const XiElement& a, const XiElement& b) = default;

    /// Substitute a numeric value for xi (typically a d-th root of -1).
    ComplexF evaluate(ComplexF xi) const {
        ComplexF acc{0.0, 0.0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * xi + to_complex(*it);
        }
        return acc;
    }

    /// exp(i pi (2j + 1) / d), j = 0..d-1: the d-th roots of -1.
    static ComplexF numeric_root(int d, int j) {
        return std::polar(1.0, std::numbers::pi * (2.0 * j + 1.0) / d);
    }

private:
    static int check_degree(int d) {
        if (d < 1) {
            throw std::invalid_argument("XiElement: degree must be positive");
        }
        return d;
    }

    static void check_same(const XiElement& a, const XiElement& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) {
            throw std::invalid_argument("XiElement: mismatched degree d");
        }
    }

    std::vector<Rational> coeffs_;
};

inline XiElement xi_mul(const XiElement& a, const XiElement& b, int d) {
    if (a.degree() != d || b.degree() != d) {
        throw std::invalid_argument("xi_mul: operand length differs from d");
    }
    return a * b;
}

// ---------------------------------------------------------------------------

/// Dense polynomial over Q; index = degree, no trailing zero coefficients.
class UniPoly {
public:
    UniPoly() = default;

    template <std::integral I>
    UniPoly(I c) : UniPoly(Rational(c)) {}

    UniPoly(const Rational& c) {
        if (!c.is_zero()) {
            coeffs_.push_back(c);
        }
    }

    explicit UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static UniPoly variable() { return UniPoly(std::vector<Rational>{0, 1}); }

    static UniPoly monomial(const Rational& c, std::size_t degree) {
        std::vector<Rational> v(degree + 1);
        v[degree] = c;
        return UniPoly(std::move(v));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational coefficient(long i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= coeffs_.size()) {
            return 0;
        }
        return coeffs_[static_cast<std::size_t>(i)];
    }

    Rational evaluate(const Rational& x) const {
        Rational acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

    /// p(q(X)).
    UniPoly compose(const UniPoly& q) const {
        UniPoly acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * q + UniPoly(*it);
        }
        return acc;
    }

    UniPoly derivative() const {
        if (coeffs_.size() <= 1) {
            return {};
        }
        std::vector<Rational> v(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            v[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
        }
        return UniPoly(std::move(v));
    }

    UniPoly operator-() const {
        UniPoly r(*this);
        for (auto& c : r.coeffs_) {
            c = -c;
        }
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = a.coefficient(static_cast<long>(i)) + b.coefficient(static_cast<long>(i));
        }
        return UniPoly(std::move(v));
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                v[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return UniPoly(std::move(v));
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) = default;

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) {
            coeffs_.pop_back();
        }
    }

    std::vector<Rational> coeffs_;
};

} // namespace rootseries
