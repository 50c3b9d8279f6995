#include "pkcone/multiindex.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pkcone {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long c = 1;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

IndexTable::IndexTable(int size, int ambient) : p_(size), n_(ambient) {
    if (ambient < 1 || size < 1 || size > ambient)
        throw std::invalid_argument("IndexTable: require 1 <= size <= ambient, got size=" +
                                    std::to_string(size) + ", ambient=" + std::to_string(ambient));
    indices_.reserve(static_cast<size_t>(binomial(n_, p_)));
    MultiIndex cur(static_cast<size_t>(p_));
    for (int i = 0; i < p_; ++i) cur[static_cast<size_t>(i)] = i;
    while (true) {
        indices_.push_back(cur);
        // advance to the lexicographic successor
        int i = p_ - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == n_ - p_ + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < p_; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
}

int IndexTable::position(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != p_)
        throw std::invalid_argument("IndexTable::position: index has wrong size");
    // lexicographic rank of a combination
    long rank = 0;
    int prev = -1;
    for (int i = 0; i < p_; ++i) {
        const int v = idx[static_cast<size_t>(i)];
        if (v <= prev || v >= n_)
            throw std::invalid_argument("IndexTable::position: entries must be strictly increasing in [0, n)");
        for (int c = prev + 1; c < v; ++c) rank += binomial(n_ - 1 - c, p_ - 1 - i);
        prev = v;
    }
    return static_cast<int>(rank);
}

MultiIndex complement(const MultiIndex& idx, int n) {
    MultiIndex out;
    out.reserve(static_cast<size_t>(n) - idx.size());
    size_t at = 0;
    for (int v = 0; v < n; ++v) {
        if (at < idx.size() && idx[at] == v) {
            ++at;
        } else {
            out.push_back(v);
        }
    }
    if (at != idx.size()) throw std::invalid_argument("complement: index not contained in [0, n)");
    return out;
}

MultiIndex remove_entry(const MultiIndex& idx, int i) {
    auto it = std::find(idx.begin(), idx.end(), i);
    if (it == idx.end()) throw std::invalid_argument("remove_entry: " + std::to_string(i) + " not a member");
    MultiIndex out(idx);
    out.erase(out.begin() + (it - idx.begin()));
    return out;
}

MultiIndex add_entry(const MultiIndex& idx, int j) {
    auto it = std::lower_bound(idx.begin(), idx.end(), j);
    if (it != idx.end() && *it == j) throw std::invalid_argument("add_entry: " + std::to_string(j) + " already a member");
    MultiIndex out(idx);
    out.insert(out.begin() + (it - idx.begin()), j);
    return out;
}

int perm_sign(const MultiIndex& lhs, const MultiIndex& rhs) {
    // Both halves are sorted, so only cross pairs can be inverted.
    long inversions = 0;
    for (int a : lhs) {
        for (int b : rhs) {
            if (a == b) throw std::invalid_argument("perm_sign: indices overlap at " + std::to_string(a));
            if (a > b) ++inversions;
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace pkcone
