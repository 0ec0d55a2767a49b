#ifndef BLOCKFW_FW_CONE_HPP
#define BLOCKFW_FW_CONE_HPP

#include <optional>
#include <vector>

#include "blockfw/ipm.hpp"
#include "blockfw/partition.hpp"

namespace blockfw {

/// Per-pair PSD blocks {X_kl} certifying that their assembled sum lies in the
/// block factor-width-two cone of the partition.
struct BlockCertificate {
    Partition partition;
    std::vector<SymMatrix> blocks;  // lexicographic pair order

    void validate() const;
};

/// Sum of the embedded pair blocks; with a basis V the result is congruated
/// as V^T (sum) V, an element of the V-transformed cone.
SymMatrix assemble(const BlockCertificate& cert);
SymMatrix assemble(const BlockCertificate& cert, const CholFactor& basis);

struct FwMembership {
    bool inside = false;
    /// Largest t with A - t*I still decomposable; negative outside the cone.
    double margin = 0.0;
    std::optional<BlockCertificate> certificate;
};

/// Decides membership by solving the decomposition SDP
///   max t  s.t.  sum_kl embed(X_kl) + t*I == A,  X_kl psd.
/// Boundary matrices are classified inside.
FwMembership membership_fw(const SymMatrix& a, const Partition& part,
                           const IpmSettings& settings = {});
/// Membership of a in the V-transformed cone (tests V^{-T} a V^{-1}).
FwMembership membership_fw(const SymMatrix& a, const Partition& part, const CholFactor& basis,
                           const IpmSettings& settings = {});

struct DualMembership {
    bool inside = false;
    double worst_min_eig = 0.0;
    std::optional<PairIndex> worst_pair;
};

/// Dual-cone membership: every pair principal submatrix must be psd.
DualMembership membership_dual(const SymMatrix& a, const Partition& part);

/// Row-wise diagonal dominance, boundary inclusive.
bool is_dd(const SymMatrix& a);

/// Scaled diagonal dominance decided through the trivial-partition
/// decomposition SDP; an oracle independent of any direct scaling search.
bool is_sdd_oracle(const SymMatrix& a, const IpmSettings& settings = {});

struct RegionOptions {
    int angles = 64;
    double radius_cap = 1e3;
    double rel_tol = 1e-3;
    IpmSettings ipm;
};

struct RegionRow {
    double angle = 0.0;
    double radius_psd = 0.0;
    std::vector<double> radius_fw;  // one per partition
};

/// Boundary sampling for pencils I + x*A + y*B: per ray angle, the largest
/// radius keeping the pencil in the PSD cone and in each partition's cone.
std::vector<RegionRow> sample_region_boundary(const SymMatrix& a, const SymMatrix& b,
                                              const std::vector<Partition>& partitions,
                                              const RegionOptions& opts = {});

void write_region_csv(std::ostream& out, const std::vector<RegionRow>& rows,
                      const std::vector<Partition>& partitions);

} // namespace blockfw

#endif
