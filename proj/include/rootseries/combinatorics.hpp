#pragma once

// Indexing objects (multi-indices, ordered multisets, set partitions,
// compositions), Stirling tables, shifted Stirling polynomials and the
// Newton-series reconstruction.

#include "rootseries/scalar.hpp"

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace rootseries {

/// d-tuple of non-negative integers with its total order cached.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) {
            throw std::invalid_argument("MultiIndex: length must be at least 1");
        }
        for (int e : entries_) {
            if (e < 0) {
                throw std::invalid_argument("MultiIndex: negative entry");
            }
            order_ += e;
        }
    }

    static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }

    const std::vector<int>& entries() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }
    int order() const { return order_; }
    int operator[](std::size_t i) const { return entries_[i]; }

    /// prod n_i!
    BigInt factorial_product() const {
        BigInt p = 1;
        for (int e : entries_) {
            p *= factorial(e);
        }
        return p;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }

    /// Graded: total order first, then reverse-lexicographic (x1^2 before x1 x2).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.order_ <=> b.order_; c != 0) {
            return c;
        }
        if (auto c = a.entries_.size() <=> b.entries_.size(); c != 0) {
            return c;
        }
        return b.entries_ <=> a.entries_;
    }

private:
    std::vector<int> entries_;
    int order_ = 0;
};

/// All d-tuples with min_order <= total <= max_order, in graded order.
inline std::vector<MultiIndex> multi_indices(int d, int max_order, int min_order = 0) {
    if (d < 1) {
        throw std::invalid_argument("multi_indices: d must be positive");
    }
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    for (int total = std::max(min_order, 0); total <= max_order; ++total) {
        // Reverse-lexicographic compositions of `total` into d parts.
        std::function<void(int, int)> fill = [&](int pos, int remaining) {
            if (pos == d - 1) {
                cur[static_cast<std::size_t>(pos)] = remaining;
                out.emplace_back(cur);
                return;
            }
            for (int v = remaining; v >= 0; --v) {
                cur[static_cast<std::size_t>(pos)] = v;
                fill(pos + 1, remaining - v);
            }
        };
        fill(0, total);
    }
    return out;
}

/// N-tuple (I(1), ..., I(N)) with 1 <= I(i) <= d.
class OrderedMultiset {
public:
    OrderedMultiset(std::vector<int> entries, int d) : entries_(std::move(entries)), d_(d) {
        if (entries_.empty()) {
            throw std::invalid_argument("OrderedMultiset: must be nonempty");
        }
        for (int e : entries_) {
            if (e < 1 || e > d_) {
                throw std::invalid_argument("OrderedMultiset: entry outside [1, d]");
            }
        }
    }

    /// Canonical multiset with the given multiplicities: n_1 copies of 1, then 2, ...
    static OrderedMultiset from_multi_index(const MultiIndex& n) {
        std::vector<int> e;
        for (int i = 0; i < n.size(); ++i) {
            e.insert(e.end(), static_cast<std::size_t>(n[static_cast<std::size_t>(i)]), i + 1);
        }
        return OrderedMultiset(std::move(e), n.size());
    }

    int size() const { return static_cast<int>(entries_.size()); }
    int d() const { return d_; }
    const std::vector<int>& entries() const { return entries_; }
    /// 1-based access, matching I(i).
    int operator()(int i) const { return entries_.at(static_cast<std::size_t>(i - 1)); }

    MultiIndex multiplicities() const {
        std::vector<int> m(static_cast<std::size_t>(d_), 0);
        for (int e : entries_) {
            ++m[static_cast<std::size_t>(e - 1)];
        }
        return MultiIndex(std::move(m));
    }

    friend bool operator==(const OrderedMultiset&, const OrderedMultiset&) = default;

private:
    std::vector<int> entries_;
    int d_ = 1;
};

/// I with the element at 1-based position h removed.
inline OrderedMultiset remove_index(const OrderedMultiset& I, int h) {
    if (I.size() < 2) {
        throw std::invalid_argument("remove_index: result would be empty");
    }
    if (h < 1 || h > I.size()) {
        throw std::out_of_range("remove_index: position outside [1, |I|]");
    }
    std::vector<int> e = I.entries();
    e.erase(e.begin() + (h - 1));
    return OrderedMultiset(std::move(e), I.d());
}

/// Parts are sorted lists of 1-based elements, ordered by their minima.
struct SetPartition {
    std::vector<std::vector<int>> parts;

    int size() const { return static_cast<int>(parts.size()); }
    friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Visits every partition of [1, N] into exactly k nonempty blocks.
///
/// Enumeration runs over restricted growth strings a[0..N-1] (a[0] = 0,
/// a[i] <= 1 + max(a[0..i-1])); block b collects the positions labelled b,
/// so blocks come out ordered by their minimum element.
template <class Visitor>
void for_each_set_partition(int N, int k, Visitor&& visit) {
    if (N < 0 || k < 0 || k > N) {
        return;
    }
    if (N == 0) {
        if (k == 0) {
            visit(SetPartition{});
        }
        return;
    }
    if (k == 0) {
        return;
    }
    std::vector<int> rgs(static_cast<std::size_t>(N), 0);
    std::function<void(int, int)> rec = [&](int pos, int used) {
        // Remaining positions must still be able to open the missing blocks.
        if (k - used > N - pos) {
            return;
        }
        if (pos == N) {
            if (used != k) {
                return;
            }
            SetPartition s;
            s.parts.resize(static_cast<std::size_t>(k));
            for (int i = 0; i < N; ++i) {
                s.parts[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i + 1);
            }
            visit(s);
            return;
        }
        const int limit = std::min(used, k - 1);
        for (int b = 0; b <= limit; ++b) {
            rgs[static_cast<std::size_t>(pos)] = b;
            rec(pos + 1, std::max(used, b + 1));
        }
    };
    rgs[0] = 0;
    rec(1, 1);
}

inline std::vector<SetPartition> set_partitions(int N, int k) {
    std::vector<SetPartition> out;
    for_each_set_partition(N, k, [&](const SetPartition& s) { out.push_back(s); });
    return out;
}

/// Image of set_partitions(|I|, k) under J_i = (I(s_i(1)), ..., I(s_i(m))).
inline std::vector<std::vector<OrderedMultiset>> multiset_partitions(const OrderedMultiset& I, int k) {
    if (k < 1 || k > I.size()) {
        throw std::invalid_argument("multiset_partitions: need 1 <= k <= |I|");
    }
    std::vector<std::vector<OrderedMultiset>> out;
    for_each_set_partition(I.size(), k, [&](const SetPartition& s) {
        std::vector<OrderedMultiset> J;
        J.reserve(s.parts.size());
        for (const auto& part : s.parts) {
            std::vector<int> e;
            e.reserve(part.size());
            for (int idx : part) {
                e.push_back(I(idx));
            }
            J.emplace_back(std::move(e), I.d());
        }
        out.push_back(std::move(J));
    });
    return out;
}

/// k non-negative parts summing to n.
struct Composition {
    std::vector<int> parts;
    int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    friend bool operator==(const Composition&, const Composition&) = default;
};

inline std::vector<Composition> compositions(int n, int k) {
    std::vector<Composition> out;
    if (n < 0 || k < 0) {
        return out;
    }
    if (k == 0) {
        if (n == 0) {
            out.push_back({});
        }
        return out;
    }
    std::vector<int> cur(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == k - 1) {
            cur[static_cast<std::size_t>(pos)] = remaining;
            out.push_back({cur});
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, n);
    return out;
}

/// Strictly increasing k-tuples in [1, m]; for k = 0 the single empty tuple.
inline std::vector<std::vector<int>> increasing_sequences(int m, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > m) {
        return out;
    }
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int next) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = next; v <= m - (k - static_cast<int>(cur.size())) + 1; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

/// Unsigned first-kind and second-kind Stirling numbers for 0 <= N <= n_max.
class StirlingTables {
public:
    explicit StirlingTables(int n_max = 32) : n_max_(n_max) {
        if (n_max < 0) {
            throw std::invalid_argument("StirlingTables: negative size");
        }
        const auto size = static_cast<std::size_t>(n_max + 1);
        first_.assign(size, std::vector<BigInt>(size, 0));
        second_.assign(size, std::vector<BigInt>(size, 0));
        first_[0][0] = 1;
        second_[0][0] = 1;
        for (std::size_t N = 0; N < size - 1; ++N) {
            for (std::size_t r = 0; r < size - 1; ++r) {
                // [N r] + N [N r+1] = [N+1 r+1];  {N r} + (r+1) {N r+1} = {N+1 r+1}
                first_[N + 1][r + 1] = first_[N][r] + BigInt(static_cast<unsigned long>(N)) * first_[N][r + 1];
                second_[N + 1][r + 1] =
                    second_[N][r] + BigInt(static_cast<unsigned long>(r + 1)) * second_[N][r + 1];
            }
        }
    }

    int n_max() const { return n_max_; }

    const BigInt& first(int N, int r) const { return lookup(first_, N, r); }
    const BigInt& second(int N, int r) const { return lookup(second_, N, r); }

private:
    const BigInt& lookup(const std::vector<std::vector<BigInt>>& t, int N, int r) const {
        static const BigInt zero = 0;
        if (N < 0 || r < 0 || r > N) {
            if (N > n_max_) {
                throw std::out_of_range("StirlingTables: N beyond table size");
            }
            return zero;
        }
        if (N > n_max_) {
            throw std::out_of_range("StirlingTables: N beyond table size");
        }
        return t[static_cast<std::size_t>(N)][static_cast<std::size_t>(r)];
    }

    int n_max_;
    std::vector<std::vector<BigInt>> first_;
    std::vector<std::vector<BigInt>> second_;
};

/// Coefficient of Y^r in (Y + X - 1)_N, as a polynomial in X; zero for N < 0.
inline UniPoly stirling_shifted(int N, int r) {
    if (N < 0 || r < 0 || r > N) {
        return {};
    }
    // by_y[j] is the coefficient of Y^j.
    std::vector<UniPoly> by_y{UniPoly(1)};
    const UniPoly X = UniPoly::variable();
    for (int i = 0; i < N; ++i) {
        const UniPoly shift = X - UniPoly(1 + i);
        std::vector<UniPoly> next(by_y.size() + 1);
        for (std::size_t j = 0; j < by_y.size(); ++j) {
            next[j + 1] = next[j + 1] + by_y[j];
            next[j] = next[j] + shift * by_y[j];
        }
        by_y = std::move(next);
    }
    return by_y[static_cast<std::size_t>(r)];
}

/// Evaluates the degree <= m polynomial F at x from its values F(1), ..., F(m+1)
/// through the shifted Newton forward-difference series.
inline Rational newton_reconstruct(std::span<const Rational> samples, const Rational& x) {
    Rational total;
    const long count = static_cast<long>(samples.size());
    for (long k = 1; k <= count; ++k) {
        Rational diff;
        for (long r = 0; r <= k - 1; ++r) {
            const Rational term = Rational(binomial(k - 1, r)) * samples[static_cast<std::size_t>(r)];
            diff += ((k - 1 - r) % 2 == 0) ? term : -term;
        }
        total += falling_factorial(x - Rational(1), k - 1) / Rational(factorial(k - 1)) * diff;
    }
    return total;
}

} // namespace rootseries
