#ifndef BLOCKFW_GENERATORS_HPP
#define BLOCKFW_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "blockfw/iterative.hpp"
#include "blockfw/sdp_model.hpp"

namespace blockfw {

struct Graph {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;  // 0-based, i < j

    void validate() const;
};

/// Deterministic generator: a fixed seed reproduces the exact same stream.
/// Normals come from Box-Muller over explicit 53-bit uniforms rather than the
/// implementation-defined std distributions.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double normal();   // standard normal

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Random pencil instance: the SDP whose dual reads
///   max x + y  s.t.  I + x*A + y*B psd
/// with A, B symmetrized standard-normal. Stored in primal form with C = I,
/// A_1 = -A, A_2 = -B, b = (1,1).
SdpProblem gen_pencil_sdp(int n, std::uint64_t seed);

Graph gen_erdos_renyi(int n_nodes, double edge_prob, std::uint64_t seed);

/// Theta-number relaxation, encoded as minimize <-J,X> with unit trace and
/// one zero constraint per edge; objective_flipped records the negation.
SdpProblem lovasz_theta_sdp(const Graph& g);

/// Exact stability number by branch and bound; limited to 30 nodes.
int stable_set_brute(const Graph& g);

SymMatrix gen_bqo_cost(int n, std::uint64_t seed);

/// Unit-diagonal relaxation of min x^T Q x over x in {-1,1}^n.
SdpProblem bqo_relax_sdp(const SymMatrix& q);

/// Exact binary quadratic minimum by Gray-code enumeration; limited to n=20.
double bqo_brute(const SymMatrix& q);

struct SuccessRates {
    std::vector<int> iterations;
    std::vector<double> rate;

    double at(int t) const;
};

/// Fraction of graphs whose outer-iteration bound at iteration t is within
/// the quality threshold of the exact theta number: success iff
/// threshold * bound <= theta. Solver failures count as non-success.
SuccessRates success_rate_experiment(const std::vector<Graph>& graphs, const RunConfig& cfg,
                                     double threshold,
                                     const std::vector<int>& at_iterations = {1, 3, 5, 7});

} // namespace blockfw

#endif
