#include "blockfw/generators.hpp"

#include "blockfw/ipm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>

namespace blockfw {

void Graph::validate() const {
    if (n_nodes < 1) throw DimensionMismatch("graph needs at least one node");
    for (auto [i, j] : edges)
        if (i < 0 || j < 0 || i >= j || j >= n_nodes)
            throw DimensionMismatch("graph edge indices out of range");
}

double SeededRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::acos(-1.0) * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

SdpProblem gen_pencil_sdp(int n, std::uint64_t seed) {
    if (n < 2) throw DimensionMismatch("pencil instance needs n >= 2");
    SeededRng rng(seed);
    auto draw = [&] {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
        return SymMatrix::symmetrized(m);
    };
    const SymMatrix a = draw();
    const SymMatrix b = draw();

    SdpProblem prob;
    prob.n = n;
    prob.m = 2;
    prob.C = SymMatrix::identity(n);
    prob.A = {-1.0 * a, -1.0 * b};
    prob.b = Eigen::VectorXd::Ones(2);
    prob.objective_flipped = true;  // source problem minimizes -(x+y)
    prob.name = "pencil:n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
    return prob;
}

Graph gen_erdos_renyi(int n_nodes, double edge_prob, std::uint64_t seed) {
    if (n_nodes < 1) throw DimensionMismatch("graph needs at least one node");
    if (edge_prob < 0.0 || edge_prob > 1.0) throw Error("edge probability outside [0,1]");
    SeededRng rng(seed);
    Graph g;
    g.n_nodes = n_nodes;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (rng.uniform() < edge_prob) g.edges.emplace_back(i, j);
    return g;
}

SdpProblem lovasz_theta_sdp(const Graph& g) {
    g.validate();
    const int n = g.n_nodes;
    SdpProblem prob;
    prob.n = n;
    prob.m = 1 + static_cast<int>(g.edges.size());
    SymMatrix negj(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) negj.set(i, j, -1.0);
    prob.C = negj;
    prob.A.reserve(prob.m);
    prob.A.push_back(SymMatrix::identity(n));
    for (auto [i, j] : g.edges) {
        SymMatrix e(n);
        e.set(i, j, 1.0);
        prob.A.push_back(std::move(e));
    }
    prob.b = Eigen::VectorXd::Zero(prob.m);
    prob.b(0) = 1.0;
    prob.objective_flipped = true;  // theta is the maximize form
    prob.name = "theta:n=" + std::to_string(n) + ",m=" + std::to_string(prob.m);
    return prob;
}

namespace {

struct StableSetSearch {
    std::vector<std::uint64_t> closed_nbr;
    int best = 0;

    void rec(std::uint64_t candidates, int current) {
        if (current + std::popcount(candidates) <= best) return;
        if (candidates == 0) {
            best = std::max(best, current);
            return;
        }
        const int v = std::countr_zero(candidates);
        rec(candidates & ~closed_nbr[v], current + 1);       // take v
        rec(candidates & ~(std::uint64_t{1} << v), current); // skip v
    }
};

} // namespace

int stable_set_brute(const Graph& g) {
    g.validate();
    if (g.n_nodes > 30) throw TooLarge("stable_set_brute limited to 30 nodes");
    StableSetSearch search;
    search.closed_nbr.assign(g.n_nodes, 0);
    for (int v = 0; v < g.n_nodes; ++v) search.closed_nbr[v] = std::uint64_t{1} << v;
    for (auto [i, j] : g.edges) {
        search.closed_nbr[i] |= std::uint64_t{1} << j;
        search.closed_nbr[j] |= std::uint64_t{1} << i;
    }
    const std::uint64_t all =
        g.n_nodes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n_nodes) - 1;
    search.rec(all, 0);
    return search.best;
}

SymMatrix gen_bqo_cost(int n, std::uint64_t seed) {
    if (n < 1) throw DimensionMismatch("bqo cost needs n >= 1");
    SeededRng rng(seed);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
    return SymMatrix::symmetrized(m);
}

SdpProblem bqo_relax_sdp(const SymMatrix& q) {
    const int n = q.dim();
    SdpProblem prob;
    prob.n = n;
    prob.m = n;
    prob.C = q;
    prob.A.reserve(n);
    for (int i = 0; i < n; ++i) {
        SymMatrix e(n);
        e.set(i, i, 1.0);
        prob.A.push_back(std::move(e));
    }
    prob.b = Eigen::VectorXd::Ones(n);
    prob.name = "bqo:n=" + std::to_string(n);
    return prob;
}

double bqo_brute(const SymMatrix& q) {
    const int n = q.dim();
    if (n > 20) throw TooLarge("bqo_brute limited to n = 20");

    // Gray-code walk: one sign flip per step, O(n) value update.
    std::vector<double> x(n, 1.0);
    Eigen::VectorXd s = q.dense().rowwise().sum();  // s_i = sum_j q_ij x_j
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += x[i] * s(i);
    double best = value;

    const std::uint64_t steps = (std::uint64_t{1} << n) - 1;
    std::uint64_t gray = 0;
    for (std::uint64_t it = 1; it <= steps; ++it) {
        const std::uint64_t next_gray = it ^ (it >> 1);
        const int k = std::countr_zero(gray ^ next_gray);
        gray = next_gray;
        value -= 4.0 * x[k] * (s(k) - q(k, k) * x[k]);
        for (int i = 0; i < n; ++i) s(i) -= 2.0 * q(i, k) * x[k];
        x[k] = -x[k];
        best = std::min(best, value);
    }
    return best;
}

double SuccessRates::at(int t) const {
    for (std::size_t i = 0; i < iterations.size(); ++i)
        if (iterations[i] == t) return rate[i];
    throw Error("success rate not recorded at iteration " + std::to_string(t));
}

SuccessRates success_rate_experiment(const std::vector<Graph>& graphs, const RunConfig& cfg,
                                     double threshold, const std::vector<int>& at_iterations) {
    if (graphs.empty()) throw Error("success_rate_experiment needs at least one graph");
    SuccessRates out;
    out.iterations = at_iterations;
    out.rate.assign(at_iterations.size(), 0.0);

    RunConfig run_cfg = cfg;
    run_cfg.t_max = std::max(cfg.t_max, *std::max_element(at_iterations.begin(),
                                                          at_iterations.end()));

    for (const Graph& g : graphs) {
        const SdpProblem prob = lovasz_theta_sdp(g);
        const SolveReport exact = solve_full(prob, cfg.ipm);
        if (exact.status != SolveStatus::Optimal) {
            std::cerr << "warning: theta oracle failed on " << prob.name << "\n";
            continue;  // counted as non-success at every t
        }
        const double theta = -exact.primal_value;

        IterationTrace trace;
        try {
            trace = run_outer(prob, run_cfg).trace;
        } catch (const SolverFailureWithTrace& e) {
            trace = e.partial_trace();
        } catch (const Error&) {
            continue;
        }

        for (std::size_t i = 0; i < at_iterations.size(); ++i) {
            // Last recorded bound at or before t (stationary after early stop).
            double bound = 0.0;
            bool seen = false;
            for (const IterationRecord& r : trace.records)
                if (r.t <= at_iterations[i]) {
                    bound = r.bound;
                    seen = true;
                }
            if (!seen) continue;
            const double upper_theta = -bound;
            if (threshold * upper_theta <= theta + 1e-9 * (1.0 + std::abs(theta)))
                out.rate[i] += 1.0;
        }
    }
    for (double& r : out.rate) r /= static_cast<double>(graphs.size());
    return out;
}

} // namespace blockfw
