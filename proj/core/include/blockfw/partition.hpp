#ifndef BLOCKFW_PARTITION_HPP
#define BLOCKFW_PARTITION_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blockfw/linalg.hpp"

namespace blockfw {

/// Ordered block sizes partitioning the index range 1..n. At least two blocks
/// are required; a single block makes every pair construction vacuous.
class Partition {
public:
    explicit Partition(std::vector<int> blocks);

    /// Blocks of size `block_size`; a non-dividing remainder is absorbed into
    /// the last block.
    static Partition uniform(int n, int block_size);
    /// {1,1,...,1}.
    static Partition trivial(int n);
    /// Accepts "uniform:K" or an explicit comma list such as "2,2,2,2,2".
    static Partition parse(std::string_view spec, int n);

    int total_dim() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int block_size(int k) const { return blocks_[k]; }
    int block_offset(int k) const { return offsets_[k]; }
    const std::vector<int>& blocks() const { return blocks_; }

    std::string to_string() const;
    bool operator==(const Partition& o) const { return blocks_ == o.blocks_; }

private:
    std::vector<int> blocks_;
    std::vector<int> offsets_;
    int n_ = 0;
};

/// True iff b's blocks are contiguous merges of a's blocks.
bool is_finer(const Partition& a, const Partition& b);

/// One unordered block pair (k < l) with its index ranges, 0-based.
struct PairIndex {
    int k = 0, l = 0;
    int off_k = 0, len_k = 0;
    int off_l = 0, len_l = 0;

    int joint_dim() const { return len_k + len_l; }
};

PairIndex pair_at(const Partition& p, int k, int l);

/// Lazy range over all block pairs in lexicographic (k,l) order; nothing is
/// allocated, so fine partitions with millions of pairs stay cheap to walk.
class PairRange {
public:
    explicit PairRange(const Partition& p) : part_(&p) {}

    class iterator {
    public:
        iterator(const Partition* p, int k, int l) : part_(p), k_(k), l_(l) {}
        PairIndex operator*() const { return pair_at(*part_, k_, l_); }
        iterator& operator++();
        bool operator!=(const iterator& o) const { return k_ != o.k_ || l_ != o.l_; }

    private:
        const Partition* part_;
        int k_, l_;
    };

    iterator begin() const { return {part_, 0, 1}; }
    iterator end() const;
    std::uint64_t size() const {
        const std::uint64_t p = part_->block_count();
        return p * (p - 1) / 2;
    }

private:
    const Partition* part_;
};

inline PairRange pairs(const Partition& p) { return PairRange(p); }
std::vector<PairIndex> pair_indices(const Partition& p);

/// Principal submatrix on the pair's row ranges.
SymMatrix extract(const SymMatrix& a, const PairIndex& pr);
/// Scatter of a pair-sized matrix back into an n x n matrix, zero elsewhere.
SymMatrix embed(const SymMatrix& b, const PairIndex& pr, int n);
/// In-place accumulate of embed(b, pr, target.dim()).
void add_embedded(SymMatrix& target, const SymMatrix& b, const PairIndex& pr);

} // namespace blockfw

#endif
