#include "blockfw/partition.hpp"

#include <charconv>
#include <numeric>
#include <sstream>

namespace blockfw {

Partition::Partition(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.size() < 2)
        throw InvalidPartition("a partition needs at least two blocks");
    offsets_.reserve(blocks_.size());
    n_ = 0;
    for (int b : blocks_) {
        if (b < 1) throw InvalidPartition("block sizes must be positive");
        offsets_.push_back(n_);
        n_ += b;
    }
}

Partition Partition::uniform(int n, int block_size) {
    if (n < 2 || block_size < 1 || block_size > n)
        throw InvalidPartition("uniform partition: need n >= 2 and 1 <= block <= n");
    std::vector<int> blocks(n / block_size, block_size);
    if (n % block_size != 0) blocks.push_back(n % block_size);
    if (blocks.size() < 2)
        throw InvalidPartition("uniform partition would have fewer than two blocks");
    return Partition(std::move(blocks));
}

Partition Partition::trivial(int n) { return uniform(n, 1); }

Partition Partition::parse(std::string_view spec, int n) {
    constexpr std::string_view kUniform = "uniform:";
    if (spec.substr(0, kUniform.size()) == kUniform) {
        int block = 0;
        const auto* first = spec.data() + kUniform.size();
        const auto* last = spec.data() + spec.size();
        auto [ptr, ec] = std::from_chars(first, last, block);
        if (ec != std::errc() || ptr != last)
            throw InvalidPartition("bad uniform partition spec: " + std::string(spec));
        return uniform(n, block);
    }
    std::vector<int> blocks;
    std::string item;
    std::istringstream ss{std::string(spec)};
    while (std::getline(ss, item, ',')) {
        try {
            blocks.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw InvalidPartition("bad partition spec: " + std::string(spec));
        }
    }
    Partition part(std::move(blocks));
    if (part.total_dim() != n)
        throw InvalidPartition("partition blocks sum to " + std::to_string(part.total_dim()) +
                               ", expected " + std::to_string(n));
    return part;
}

std::string Partition::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(blocks_[i]);
    }
    return s;
}

bool is_finer(const Partition& a, const Partition& b) {
    if (a.total_dim() != b.total_dim())
        throw DimensionMismatch("is_finer: partitions cover different dimensions");
    std::size_t ai = 0;
    for (int target : b.blocks()) {
        int acc = 0;
        while (acc < target) {
            if (ai >= a.blocks().size()) return false;
            acc += a.blocks()[ai++];
        }
        if (acc != target) return false;
    }
    return ai == a.blocks().size();
}

PairIndex pair_at(const Partition& p, int k, int l) {
    return {k,
            l,
            p.block_offset(k),
            p.block_size(k),
            p.block_offset(l),
            p.block_size(l)};
}

PairRange::iterator& PairRange::iterator::operator++() {
    const int p = part_->block_count();
    if (++l_ >= p) {
        ++k_;
        l_ = k_ + 1;
    }
    if (k_ >= p - 1) {
        k_ = p - 1;
        l_ = p;
    }
    return *this;
}

PairRange::iterator PairRange::end() const {
    const int p = part_->block_count();
    return {part_, p - 1, p};
}

std::vector<PairIndex> pair_indices(const Partition& p) {
    std::vector<PairIndex> out;
    out.reserve(pairs(p).size());
    for (const PairIndex& pr : pairs(p)) out.push_back(pr);
    return out;
}

namespace {

// Global index of local coordinate a within the pair's joint range.
inline int global_of(const PairIndex& pr, int a) {
    return a < pr.len_k ? pr.off_k + a : pr.off_l + (a - pr.len_k);
}

} // namespace

SymMatrix extract(const SymMatrix& a, const PairIndex& pr) {
    if (pr.off_l + pr.len_l > a.dim())
        throw DimensionMismatch("extract: pair ranges exceed matrix dimension");
    const int d = pr.joint_dim();
    SymMatrix out(d);
    for (int j = 0; j < d; ++j) {
        const int gj = global_of(pr, j);
        for (int i = 0; i <= j; ++i) out.set(i, j, a(global_of(pr, i), gj));
    }
    return out;
}

SymMatrix embed(const SymMatrix& b, const PairIndex& pr, int n) {
    if (pr.off_l + pr.len_l > n)
        throw DimensionMismatch("embed: pair ranges exceed target dimension");
    SymMatrix out(n);
    add_embedded(out, b, pr);
    return out;
}

void add_embedded(SymMatrix& target, const SymMatrix& b, const PairIndex& pr) {
    const int d = pr.joint_dim();
    if (b.dim() != d) throw DimensionMismatch("embed: block dimension does not match pair");
    if (pr.off_l + pr.len_l > target.dim())
        throw DimensionMismatch("embed: pair ranges exceed target dimension");
    for (int j = 0; j < d; ++j) {
        const int gj = global_of(pr, j);
        for (int i = 0; i <= j; ++i) target.add(global_of(pr, i), gj, b(i, j));
    }
}

} // namespace blockfw
