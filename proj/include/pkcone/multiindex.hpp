#pragma once

#include <cstdint>
#include <vector>

namespace pkcone {

/// Ordered multi-index: strictly increasing entries in [0, n).
using MultiIndex = std::vector<int>;

long binomial(int n, int k);

/// All multi-indices of a fixed size over {0,...,n-1}, in lexicographic
/// order, with O(size) reverse lookup by combinatorial ranking. The order is
/// fixed for the lifetime of the process so that derivation-matrix layouts
/// are reproducible across runs.
class IndexTable {
public:
    IndexTable(int size, int ambient);

    int order() const { return p_; }    // entries per index
    int ambient() const { return n_; }
    int size() const { return static_cast<int>(indices_.size()); }  // N = C(n, p)

    const MultiIndex& operator[](int pos) const { return indices_[static_cast<size_t>(pos)]; }

    /// Position of `idx` in the table (inverse of operator[]).
    int position(const MultiIndex& idx) const;

private:
    int p_;
    int n_;
    std::vector<MultiIndex> indices_;
};

/// Complement of `idx` in {0,...,n-1}, sorted increasing.
MultiIndex complement(const MultiIndex& idx, int n);

/// Copy of `idx` with the entry `i` removed; throws if `i` is not a member.
MultiIndex remove_entry(const MultiIndex& idx, int i);

/// Copy of `idx` with `j` inserted at its sorted position; throws if already present.
MultiIndex add_entry(const MultiIndex& idx, int j);

/// Sign of the permutation sorting the concatenation (lhs, rhs) ascending.
/// Both arguments must be sorted and disjoint. perm_sign({}, {}) == +1.
int perm_sign(const MultiIndex& lhs, const MultiIndex& rhs);

}  // namespace pkcone
