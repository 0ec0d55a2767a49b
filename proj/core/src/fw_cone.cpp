#include "blockfw/fw_cone.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace blockfw {

void BlockCertificate::validate() const {
    const auto range = pairs(partition);
    if (blocks.size() != range.size())
        throw DimensionMismatch("certificate block count does not match pair count");
    std::size_t idx = 0;
    for (const PairIndex& pr : range) {
        if (blocks[idx].dim() != pr.joint_dim())
            throw DimensionMismatch("certificate block has wrong dimension");
        ++idx;
    }
}

SymMatrix assemble(const BlockCertificate& cert) {
    cert.validate();
    SymMatrix out(cert.partition.total_dim());
    std::size_t idx = 0;
    for (const PairIndex& pr : pairs(cert.partition)) add_embedded(out, cert.blocks[idx++], pr);
    return out;
}

SymMatrix assemble(const BlockCertificate& cert, const CholFactor& basis) {
    SymMatrix plain = assemble(cert);
    if (basis.n != plain.dim()) throw DimensionMismatch("assemble: basis dimension mismatch");
    return congruence(basis.upper, plain);
}

namespace {

// Decomposition program: variables {X_kl} plus one free scalar t, equality
// rows svec(sum embed(X_kl) + t*I) == svec(target), objective max t.
ConicProgram decomposition_program(const SymMatrix& target, const Partition& part) {
    const int n = part.total_dim();
    const int rows = svec_len(n);
    ConicProgram prog;
    for (const PairIndex& pr : pairs(part)) prog.block_dims.push_back(pr.joint_dim());
    prog.free_vars = 1;

    prog.A_rows = Eigen::MatrixXd::Zero(rows, prog.cols());

    int col_off = 0;
    for (const PairIndex& pr : pairs(part)) {
        const int d = pr.joint_dim();
        SymMatrix unit(d);
        int local = 0;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i, ++local) {
                unit.set(i, j, i == j ? 1.0 : 1.0 / std::sqrt(2.0));
                prog.A_rows.col(col_off + local) = svec(embed(unit, pr, n));
                unit.set(i, j, 0.0);
            }
        col_off += svec_len(d);
    }
    prog.A_rows.col(col_off) = svec(SymMatrix::identity(n));

    prog.objective = Eigen::VectorXd::Zero(prog.cols());
    prog.objective(col_off) = -1.0;  // minimize -t
    prog.b = svec(target);
    prog.rows_known_independent = true;  // every matrix entry is covered by some pair
    return prog;
}

} // namespace

FwMembership membership_fw(const SymMatrix& a, const Partition& part,
                           const IpmSettings& settings) {
    if (a.dim() != part.total_dim())
        throw DimensionMismatch("membership_fw: matrix and partition dimensions differ");

    const ConicProgram prog = decomposition_program(a, part);
    const IpmSolution sol = solve(prog, settings);
    if (sol.status != SolveStatus::Optimal)
        throw SolverFailure("membership_fw: decomposition solve returned " +
                            to_string(sol.status));

    FwMembership out;
    out.margin = sol.free_x(prog)(0);
    out.inside = out.margin >= -1e-9 * (1.0 + a.norm_two());
    if (out.inside) {
        BlockCertificate cert{part, {}};
        const int p = part.block_count();
        const double lift = out.margin / static_cast<double>(p - 1);
        int blk = 0;
        for (const PairIndex& pr : pairs(part)) {
            SymMatrix xb = sol.block_x(prog, blk++);
            for (int i = 0; i < pr.joint_dim(); ++i) xb.add(i, i, lift);
            cert.blocks.push_back(std::move(xb));
        }
        out.certificate = std::move(cert);
    }
    return out;
}

FwMembership membership_fw(const SymMatrix& a, const Partition& part, const CholFactor& basis,
                           const IpmSettings& settings) {
    if (basis.n != a.dim()) throw DimensionMismatch("membership_fw: basis dimension mismatch");
    // A in FW(V) iff V^{-T} A V^{-1} in FW.
    const auto& v = basis.upper;
    Eigen::MatrixXd t = v.transpose().triangularView<Eigen::Lower>().solve(a.dense());
    Eigen::MatrixXd transformed =
        v.transpose().triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
    return membership_fw(SymMatrix::symmetrized(transformed), part, settings);
}

DualMembership membership_dual(const SymMatrix& a, const Partition& part) {
    if (a.dim() != part.total_dim())
        throw DimensionMismatch("membership_dual: matrix and partition dimensions differ");
    DualMembership out;
    out.worst_min_eig = std::numeric_limits<double>::infinity();
    for (const PairIndex& pr : pairs(part)) {
        const double e = min_eig(extract(a, pr));
        if (e < out.worst_min_eig) {
            out.worst_min_eig = e;
            out.worst_pair = pr;
        }
    }
    out.inside = out.worst_min_eig >= -1e-9 * (1.0 + a.norm_two());
    return out;
}

bool is_dd(const SymMatrix& a) {
    const int n = a.dim();
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off += std::abs(a(i, j));
        if (a(i, i) < off) return false;
    }
    return true;
}

bool is_sdd_oracle(const SymMatrix& a, const IpmSettings& settings) {
    if (a.dim() == 1) return a(0, 0) >= -1e-9 * (1.0 + std::abs(a(0, 0)));
    return membership_fw(a, Partition::trivial(a.dim()), settings).inside;
}

namespace {

double psd_ray_radius(const SymMatrix& dir, double cap) {
    const double lmin = min_eig(dir);
    if (lmin >= 0.0) return cap;
    return std::min(cap, -1.0 / lmin);
}

} // namespace

std::vector<RegionRow> sample_region_boundary(const SymMatrix& a, const SymMatrix& b,
                                              const std::vector<Partition>& partitions,
                                              const RegionOptions& opts) {
    if (a.dim() != b.dim()) throw DimensionMismatch("region: pencil matrices differ in size");
    const int n = a.dim();
    const SymMatrix eye = SymMatrix::identity(n);

    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<RegionRow> rows;
    rows.reserve(opts.angles);
    for (int k = 0; k < opts.angles; ++k) {
        const double angle = two_pi * k / opts.angles;
        SymMatrix dir = std::cos(angle) * a + std::sin(angle) * b;
        RegionRow row;
        row.angle = angle;
        row.radius_psd = psd_ray_radius(dir, opts.radius_cap);

        for (const Partition& part : partitions) {
            double lo = 0.0;
            double hi = row.radius_psd;
            auto inside_at = [&](double r) {
                return membership_fw(eye + r * dir, part, opts.ipm).inside;
            };
            double radius;
            if (inside_at(hi)) {
                radius = hi;
            } else {
                while (hi - lo > opts.rel_tol * std::max(1.0, hi)) {
                    const double mid = 0.5 * (lo + hi);
                    (inside_at(mid) ? lo : hi) = mid;
                }
                radius = lo;
            }
            row.radius_fw.push_back(radius);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_region_csv(std::ostream& out, const std::vector<RegionRow>& rows,
                      const std::vector<Partition>& partitions) {
    out << "angle,radius_psd";
    for (const Partition& p : partitions) {
        std::string label = p.to_string();
        for (char& c : label)
            if (c == ',') c = '+';
        out << ",radius_fw_" << label;
    }
    out << "\n";
    char buf[40];
    auto g17 = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const RegionRow& r : rows) {
        out << g17(r.angle) << "," << g17(r.radius_psd);
        for (double v : r.radius_fw) out << "," << g17(v);
        out << "\n";
    }
}

} // namespace blockfw
