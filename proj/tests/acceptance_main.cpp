// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
// Usage: acceptance [--fixtures DIR] [--criteria 1,2,3]

#include "json.hpp"

#include "blockfw/fw_cone.hpp"
#include "blockfw/generators.hpp"
#include "blockfw/ipm.hpp"
#include "blockfw/iterative.hpp"
#include "blockfw/sdp_model.hpp"
#include "blockfw/subproblem.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace blockfw;
using json = nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct CorpusRun {
    std::string file;
    double p_star = 0.0;
    IterationTrace inner;
    IterationTrace outer;
    bool ok = false;
    std::string error;
};

std::vector<CorpusRun> run_corpus(const std::string& fixtures_dir, double& elapsed_s) {
    const double t0 = now_s();
    std::ifstream mf(fixtures_dir + "/manifest.json");
    if (!mf) throw Error("cannot open " + fixtures_dir + "/manifest.json");
    json manifest;
    mf >> manifest;

    std::vector<CorpusRun> runs;
    for (const json& inst : manifest["instances"]) {
        CorpusRun run;
        run.file = inst["file"].get<std::string>();
        try {
            const SdpProblem prob = parse_sdpa_file(fixtures_dir + "/" + run.file);
            const Partition part = Partition::parse(inst["partition"].get<std::string>(), prob.n);

            const SolveReport exact = solve_full(prob);
            if (exact.status != SolveStatus::Optimal)
                throw Error("exact solve " + to_string(exact.status));
            run.p_star = exact.primal_value;
            const double manifest_p = inst["p_star"].get<double>();
            if (std::abs(run.p_star - manifest_p) > 1e-6 * (1.0 + std::abs(manifest_p)))
                throw Error("p_star drifted from the manifest value");

            RunConfig icfg{part, inst["t_inner"].get<int>(), 0.0, {}};
            RunConfig ocfg{part, inst["t_outer"].get<int>(), 0.0, {}};
            run.inner = run_inner(prob, icfg).trace;
            run.outer = run_outer(prob, ocfg).trace;
            run.ok = true;
        } catch (const Error& e) {
            run.error = e.what();
        }
        runs.push_back(std::move(run));
    }
    elapsed_s = now_s() - t0;
    return runs;
}

void criteria_123(const std::string& fixtures_dir, const std::set<int>& wanted) {
    double elapsed = 0.0;
    const std::vector<CorpusRun> runs = run_corpus(fixtures_dir, elapsed);

    if (wanted.count(1)) {
        bool pass = runs.size() >= 30;
        std::string detail;
        for (const CorpusRun& r : runs) {
            if (!r.ok) {
                pass = false;
                detail = r.file + ": " + r.error;
                break;
            }
            for (std::size_t i = 1; i < r.inner.records.size(); ++i) {
                const double prev = r.inner.records[i - 1].bound;
                if (r.inner.records[i].bound > prev + 1e-7 * (1.0 + std::abs(prev))) {
                    pass = false;
                    detail = r.file + " inner regressed at t=" + std::to_string(i + 1);
                }
            }
            for (std::size_t i = 1; i < r.outer.records.size(); ++i) {
                const double prev = r.outer.records[i - 1].bound;
                if (r.outer.records[i].bound < prev - 1e-7 * (1.0 + std::abs(prev))) {
                    pass = false;
                    detail = r.file + " outer regressed at t=" + std::to_string(i + 1);
                }
            }
        }
        if (elapsed > 300.0) {
            pass = false;
            detail = "corpus runtime over budget";
        }
        std::ostringstream msg;
        msg << "monotone bounds on " << runs.size() << " fixtures, slack 1e-7*(1+|bound|), "
            << std::fixed << elapsed << "s";
        if (!detail.empty()) msg << " [" << detail << "]";
        report(1, pass, msg.str());
    }

    if (wanted.count(2)) {
        bool pass = true;
        std::string detail;
        for (const CorpusRun& r : runs) {
            if (!r.ok) {
                pass = false;
                detail = r.file;
                break;
            }
            double max_lower = r.outer.records.front().bound;
            for (const auto& rec : r.outer.records) max_lower = std::max(max_lower, rec.bound);
            double min_upper = r.inner.records.front().bound;
            for (const auto& rec : r.inner.records) min_upper = std::min(min_upper, rec.bound);
            if (!(max_lower <= r.p_star + 1e-6 && r.p_star + 1e-6 <= min_upper + 2e-6)) {
                pass = false;
                detail = r.file + " sandwich violated";
            }
        }
        std::string msg = "sandwich max(outer) <= p* + 1e-6 <= min(inner) + 2e-6 on all fixtures";
        if (!detail.empty()) msg += " [" + detail + "]";
        report(2, pass, msg);
    }

    if (wanted.count(3)) {
        bool pass = true;
        int checked = 0;
        std::string detail;
        for (const CorpusRun& r : runs) {
            if (!r.ok) continue;
            const auto inner_flags = check_strict_hypotheses(r.inner);
            for (std::size_t i = 0; i + 1 < r.inner.records.size(); ++i) {
                if (!inner_flags[i].holds) continue;
                if (std::abs(r.inner.records[i].bound - r.p_star) <= 1e-5) continue;
                ++checked;
                if (!(r.inner.records[i].bound - r.inner.records[i + 1].bound > 1e-8)) {
                    pass = false;
                    detail = r.file + " inner t=" + std::to_string(i + 1);
                }
            }
            const auto outer_flags = check_strict_hypotheses(r.outer);
            for (std::size_t i = 0; i + 1 < r.outer.records.size(); ++i) {
                if (!outer_flags[i].holds) continue;
                if (std::abs(r.outer.records[i].bound - r.p_star) <= 1e-5) continue;
                ++checked;
                if (!(r.outer.records[i + 1].bound - r.outer.records[i].bound > 1e-8)) {
                    pass = false;
                    detail = r.file + " outer t=" + std::to_string(i + 1);
                }
            }
        }
        std::ostringstream msg;
        msg << "strict progress on " << checked << " PD-flagged iterations away from p*";
        if (!detail.empty()) msg << " [" << detail << "]";
        report(3, pass, msg.str());
    }
}

SymMatrix random_sym(int n, std::mt19937_64& eng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = d(eng);
    return SymMatrix::symmetrized(m);
}

SymMatrix random_psd(int n, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = d(eng);
    return SymMatrix::symmetrized(g * g.transpose());
}

SymMatrix random_fw_member(const Partition& part, std::mt19937_64& eng) {
    BlockCertificate cert{part, {}};
    for (const PairIndex& pr : pairs(part)) cert.blocks.push_back(random_psd(pr.joint_dim(), eng));
    return assemble(cert);
}

void criterion_4() {
    std::mt19937_64 eng(44);
    const Partition fine = Partition::trivial(10);
    const Partition mid = Partition::uniform(10, 2);
    const Partition coarse({4, 4, 2});

    bool pass = true;
    std::string detail;
    int members = 0;
    for (int rep = 0; rep < 200 && pass; ++rep) {
        SymMatrix a(10);
        switch (rep % 4) {
            case 0: a = random_fw_member(fine, eng); break;
            case 1: a = random_fw_member(mid, eng); break;
            case 2: a = random_fw_member(coarse, eng); break;
            default: a = random_sym(10, eng); break;
        }
        const bool in_fine = membership_fw(a, fine).inside;
        const bool in_mid = membership_fw(a, mid).inside;
        const bool in_coarse = membership_fw(a, coarse).inside;
        members += in_fine + in_mid + in_coarse;
        if ((in_fine && !in_mid) || (in_mid && !in_coarse)) {
            pass = false;
            detail = "membership chain broken at sample " + std::to_string(rep);
        }
        const bool dual_coarse = membership_dual(a, coarse).inside;
        const bool dual_mid = membership_dual(a, mid).inside;
        const bool dual_fine = membership_dual(a, fine).inside;
        if ((dual_coarse && !dual_mid) || (dual_mid && !dual_fine)) {
            pass = false;
            detail = "dual chain broken at sample " + std::to_string(rep);
        }
    }

    const Partition two({5, 5});
    for (int rep = 0; rep < 100 && pass; ++rep) {
        SymMatrix a = (rep % 2 == 0) ? random_psd(10, eng) : random_sym(10, eng);
        const bool in_fw = membership_fw(a, two).inside;
        const bool is_psd = min_eig(a) >= -1e-8 * (1.0 + a.norm_two());
        if (in_fw != is_psd) {
            pass = false;
            detail = "two-block/psd disagreement at sample " + std::to_string(rep);
        }
    }
    std::ostringstream msg;
    msg << "hierarchy chains on 200 samples ({1^10} into {2^5} into {4,4,2}, " << members
        << " memberships) and 100 two-block/psd agreements";
    if (!detail.empty()) msg << " [" << detail << "]";
    report(4, pass, msg.str());
}

void criterion_5() {
    const SdpProblem prob = gen_pencil_sdp(10, 42);
    const SolveReport exact = solve_full(prob);
    const double pstar = exact.primal_value;

    auto gap_at = [&](const IterationTrace& tr, int t) {
        double b = tr.records.front().bound;
        for (const auto& r : tr.records)
            if (r.t <= t) b = r.bound;
        return std::abs(b - pstar);
    };

    RunConfig alpha{Partition::uniform(10, 2), 11, 0.0, {}};
    RunConfig sdd{Partition::trivial(10), 11, 0.0, {}};
    const InnerRun in_a = run_inner(prob, alpha);
    const OuterRun out_a = run_outer(prob, alpha);
    const InnerRun in_s = run_inner(prob, sdd);
    const OuterRun out_s = run_outer(prob, sdd);

    // Under this encoding Algorithm 2 carries the paper's Table-I trajectory
    // (restrict the pencil matrix to the cone; near-exact by t=2) and
    // Algorithm 1 the Table-II trajectory (near-exact by t=11).
    const double tol = 0.05 * std::abs(pstar);
    const bool table1 = gap_at(out_a.trace, 2) < tol && gap_at(out_s.trace, 2) > gap_at(out_a.trace, 2);
    const bool table2 =
        gap_at(in_a.trace, 11) < tol && gap_at(in_s.trace, 11) > gap_at(in_a.trace, 11);
    const bool outer11 = gap_at(out_a.trace, 11) < tol;
    const bool pass = table1 && table2 && outer11;

    std::ostringstream msg;
    msg << "seed-42 pencil analogue: outer@t2 gap " << gap_at(out_a.trace, 2) << " (sdd "
        << gap_at(out_s.trace, 2) << "), inner@t11 gap " << gap_at(in_a.trace, 11) << " (sdd "
        << gap_at(in_s.trace, 11) << "), outer@t11 gap " << gap_at(out_a.trace, 11)
        << ", all vs 5% of |p*| = " << tol;
    report(5, pass, msg.str());
}

void criterion_6() {
    const double t0 = now_s();
    std::vector<Graph> graphs;
    for (int i = 0; i < 40; ++i) {
        const double p = 0.2 + 0.6 * i / 39.0;
        graphs.push_back(gen_erdos_renyi(20, p, 1000 + i));
    }
    const std::vector<int> ts{3, 5, 7};
    RunConfig base{Partition::trivial(20), 7, 0.0, {}};

    RunConfig sdd = base;
    RunConfig two = base;
    two.partition = Partition::uniform(20, 2);
    RunConfig five = base;
    five.partition = Partition::uniform(20, 5);

    const SuccessRates r_sdd = success_rate_experiment(graphs, sdd, 0.99, ts);
    const SuccessRates r_two = success_rate_experiment(graphs, two, 0.99, ts);
    const SuccessRates r_five = success_rate_experiment(graphs, five, 0.99, ts);

    bool pass = true;
    for (int t : ts) {
        if (!(r_sdd.at(t) <= r_two.at(t) + 1e-12 && r_two.at(t) <= r_five.at(t) + 1e-12))
            pass = false;
    }
    if (!(r_five.at(7) >= r_sdd.at(7) + 0.20)) pass = false;
    const double elapsed = now_s() - t0;
    if (elapsed > 900.0) pass = false;

    std::ostringstream msg;
    msg << "success rates over 40 graphs (t=3,5,7): sdd " << r_sdd.at(3) << "/" << r_sdd.at(5)
        << "/" << r_sdd.at(7) << ", {2...} " << r_two.at(3) << "/" << r_two.at(5) << "/"
        << r_two.at(7) << ", {5...} " << r_five.at(3) << "/" << r_five.at(5) << "/"
        << r_five.at(7) << "; ordering and the 20-point margin at t=7; " << std::fixed
        << elapsed << "s";
    report(6, pass, msg.str());
}

void criterion_7() {
    const SymMatrix q = gen_bqo_cost(40, 4040);
    const SdpProblem prob = bqo_relax_sdp(q);
    const SolveReport exact = solve_full(prob);
    const double pstar = exact.primal_value;

    RunConfig coarse{Partition::uniform(40, 10), 10, 0.0, {}};
    RunConfig sdd{Partition::trivial(40), 10, 0.0, {}};
    const InnerRun run_c = run_inner(prob, coarse);
    const InnerRun run_s = run_inner(prob, sdd);

    const double gap_c = std::abs(run_c.trace.records.back().bound - pstar);
    const double gap_s = std::abs(run_s.trace.records.back().bound - pstar);
    const bool pass = gap_c < gap_s && gap_c < 0.01 * std::abs(pstar);

    std::ostringstream msg;
    msg << "bqo n=40 inner at t=10: gap({10x4}) " << gap_c << " < gap(sdd) " << gap_s
        << " and < 1% of |p*| = " << 0.01 * std::abs(pstar);
    report(7, pass, msg.str());
}

void criterion_8() {
    bool pass = true;
    std::ostringstream msg;

    Graph k4;
    k4.n_nodes = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.edges.emplace_back(i, j);
    Graph c5;
    c5.n_nodes = 5;
    c5.edges = {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
    Graph e6;
    e6.n_nodes = 6;

    const double th_k4 = -solve_full(lovasz_theta_sdp(k4)).primal_value;
    const double th_c5 = -solve_full(lovasz_theta_sdp(c5)).primal_value;
    const double th_e6 = -solve_full(lovasz_theta_sdp(e6)).primal_value;
    pass = pass && std::abs(th_k4 - 1.0) <= 1e-6;
    pass = pass && std::abs(th_c5 - std::sqrt(5.0)) <= 1e-6;
    pass = pass && std::abs(th_e6 - 6.0) <= 1e-6;

    const double relax_i3 = solve_full(bqo_relax_sdp(SymMatrix::identity(3))).primal_value;
    SymMatrix off(2);
    off.set(0, 1, 1.0);
    const double relax_off = solve_full(bqo_relax_sdp(off)).primal_value;
    pass = pass && std::abs(relax_i3 - 3.0) <= 1e-6;
    pass = pass && std::abs(relax_off + 2.0) <= 1e-6;

    const int alpha_c5 = stable_set_brute(c5);
    pass = pass && alpha_c5 == 2;

    msg << "theta(K4)=" << th_k4 << ", theta(C5)=" << th_c5 << ", theta(empty6)=" << th_e6
        << ", relax(I3)=" << relax_i3 << ", relax(offdiag)=" << relax_off
        << ", alpha(C5)=" << alpha_c5;
    report(8, pass, msg.str());
}

void criterion_9() {
    std::mt19937_64 eng(99);
    bool pass = true;
    std::string detail;
    const std::vector<Partition> parts{Partition::uniform(8, 2), Partition({3, 2, 3}),
                                       Partition::trivial(6), Partition({4, 4})};
    for (int rep = 0; rep < 1000 && pass; ++rep) {
        const Partition& part = parts[rep % parts.size()];
        const int n = part.total_dim();

        // adjointness
        const SymMatrix a = random_sym(n, eng);
        for (const PairIndex& pr : pairs(part)) {
            const SymMatrix b = random_sym(pr.joint_dim(), eng);
            const double lhs = inner(a, embed(b, pr, n));
            const double rhs = inner(extract(a, pr), b);
            if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(lhs))) {
                pass = false;
                detail = "adjoint identity failed";
            }
        }

        // scatter/gather trace identities under a random basis
        SdpProblem prob;
        prob.n = n;
        prob.m = 2;
        prob.C = random_sym(n, eng);
        prob.A = {random_sym(n, eng), random_sym(n, eng)};
        prob.b = Eigen::VectorXd::Zero(2);
        const CholFactor basis = chol_psd(SymMatrix::identity(n) + random_psd(n, eng), 1e-12);
        const ScatteredSdp scat = scatter(prob, part, basis);
        BlockCertificate cert{part, {}};
        for (const PairIndex& pr : pairs(part)) cert.blocks.push_back(random_psd(pr.joint_dim(), eng));
        const SymMatrix gathered = gather(cert, basis);

        double obj = 0.0;
        for (std::size_t i = 0; i < cert.blocks.size(); ++i)
            obj += inner(scat.cost_blocks[i], cert.blocks[i]);
        const double scale = 1.0 + std::abs(obj) + gathered.norm_fro() * prob.C.norm_fro();
        if (std::abs(inner(prob.C, gathered) - obj) > 1e-12 * scale) {
            pass = false;
            detail = "objective trace identity failed";
        }
        for (int i = 0; i < 2 && pass; ++i) {
            double con = 0.0;
            for (std::size_t k = 0; k < cert.blocks.size(); ++k)
                con += inner(scat.cons_blocks[i][k], cert.blocks[k]);
            const double cscale = 1.0 + std::abs(con) + gathered.norm_fro() * prob.A[i].norm_fro();
            if (std::abs(inner(prob.A[i], gathered) - con) > 1e-12 * cscale) {
                pass = false;
                detail = "constraint trace identity failed";
            }
        }
    }
    std::string msg = "scatter/gather and extract/embed identities on 1000 randomized cases at 1e-12";
    if (!detail.empty()) msg += " [" + detail + "]";
    report(9, pass, msg);
}

void criterion_10() {
    const double t0 = now_s();
    const SdpProblem prob = gen_pencil_sdp(200, 2020);
    RunConfig cfg{Partition::uniform(200, 20), 3, 0.0, {}};
    bool pass = true;
    std::string detail;
    try {
        const InnerRun run = run_inner(prob, cfg);
        if (run.trace.records.size() != 3) {
            pass = false;
            detail = "expected 3 iterations";
        }
        for (std::size_t i = 1; i < run.trace.records.size(); ++i) {
            const double prev = run.trace.records[i - 1].bound;
            if (run.trace.records[i].bound > prev + 1e-7 * (1.0 + std::abs(prev))) {
                pass = false;
                detail = "bound regressed";
            }
        }
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    const double elapsed = now_s() - t0;
    if (elapsed >= 60.0) {
        pass = false;
        detail = "over the 60 s budget";
    }
    std::ostringstream msg;
    msg << "scaling smoke: pencil n=200, {20,...}, 3 inner iterations in " << std::fixed
        << elapsed << "s (< 60s), bounds monotone";
    if (!detail.empty()) msg << " [" << detail << "]";
    report(10, pass, msg.str());
}

} // namespace

int main(int argc, char** argv) {
    std::string fixtures_dir = "fixtures";
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--fixtures" && i + 1 < argc) {
            fixtures_dir = argv[++i];
        } else if (arg == "--criteria" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) wanted.insert(std::stoi(tok));
        } else {
            std::cerr << "usage: acceptance [--fixtures DIR] [--criteria 1,2,...]\n";
            return 2;
        }
    }
    if (wanted.empty())
        for (int c = 1; c <= 10; ++c) wanted.insert(c);

    try {
        if (wanted.count(1) || wanted.count(2) || wanted.count(3))
            criteria_123(fixtures_dir, wanted);
        if (wanted.count(4)) criterion_4();
        if (wanted.count(5)) criterion_5();
        if (wanted.count(6)) criterion_6();
        if (wanted.count(7)) criterion_7();
        if (wanted.count(8)) criterion_8();
        if (wanted.count(9)) criterion_9();
        if (wanted.count(10)) criterion_10();
    } catch (const Error& e) {
        std::cerr << "acceptance aborted: " << e.what() << "\n";
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
