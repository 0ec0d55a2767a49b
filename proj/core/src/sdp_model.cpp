#include "blockfw/sdp_model.hpp"

#include <Eigen/QR>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace blockfw {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::NumericalTrouble: return "NumericalTrouble";
    }
    return "Unknown";
}

void SdpProblem::validate() const {
    if (n < 1) throw DimensionMismatch("SdpProblem: n must be >= 1");
    if (static_cast<int>(A.size()) != m || b.size() != m)
        throw DimensionMismatch("SdpProblem: |A| and |b| must equal m");
    if (C.dim() != n) throw DimensionMismatch("SdpProblem: C has wrong dimension");
    for (const SymMatrix& Ai : A)
        if (Ai.dim() != n) throw DimensionMismatch("SdpProblem: constraint matrix has wrong dimension");
}

int SdpProblem::constraint_rank() const {
    if (cached_rank_ >= 0) return cached_rank_;
    if (m == 0) {
        cached_rank_ = 0;
        return 0;
    }
    Eigen::MatrixXd S(svec_len(n), m);
    for (int i = 0; i < m; ++i) S.col(i) = svec(A[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    cached_rank_ = static_cast<int>(qr.rank());
    if (cached_rank_ < m)
        std::cerr << "warning: constraint matrices have numerical rank " << cached_rank_
                  << " < m = " << m << (name.empty() ? "" : " (" + name + ")") << "\n";
    return cached_rank_;
}

namespace {

// Line-oriented token reader for the SDPA sparse format. Comment lines start
// with '"' or '*'; braces, parentheses and commas count as whitespace.
class SdpaTokens {
public:
    explicit SdpaTokens(std::istream& in) : in_(in) {}

    bool next_token(std::string& tok) {
        while (pos_ >= tokens_.size()) {
            if (!read_line()) return false;
        }
        tok = tokens_[pos_++];
        return true;
    }

    long long next_int(const char* what) {
        std::string tok = need(what);
        try {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError(std::string("expected integer for ") + what + ", got '" + tok + "'",
                             line_);
        }
    }

    double next_double(const char* what) {
        std::string tok = need(what);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError(std::string("expected number for ") + what + ", got '" + tok + "'",
                             line_);
        }
    }

    int line() const { return line_; }
    const std::vector<std::string>& comments() const { return comments_; }

private:
    std::string need(const char* what) {
        std::string tok;
        if (!next_token(tok)) throw ParseError(std::string("unexpected end of file, wanted ") + what, line_);
        return tok;
    }

    bool read_line() {
        std::string raw;
        if (!std::getline(in_, raw)) return false;
        ++line_;
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos) return true;
        if (raw[first] == '"' || raw[first] == '*') {
            comments_.push_back(raw.substr(first + 1));
            return true;
        }
        for (char& c : raw)
            if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == '\r' || c == '\t')
                c = ' ';
        tokens_.clear();
        pos_ = 0;
        std::istringstream ss(raw);
        std::string tok;
        while (ss >> tok) tokens_.push_back(tok);
        return true;
    }

    std::istream& in_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    int line_ = 0;
    std::vector<std::string> comments_;
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SdpProblem parse_sdpa(std::istream& in) {
    SdpaTokens toks(in);

    const long long m = toks.next_int("constraint count");
    if (m < 0) throw ParseError("negative constraint count", toks.line());
    const long long nblocks = toks.next_int("block count");
    if (nblocks < 1) throw ParseError("block count must be positive", toks.line());

    std::vector<long long> block_sizes(nblocks);
    std::vector<int> block_offsets(nblocks);
    long long n = 0;
    for (long long bidx = 0; bidx < nblocks; ++bidx) {
        block_sizes[bidx] = toks.next_int("block size");
        if (block_sizes[bidx] == 0) throw ParseError("zero block size", toks.line());
        block_offsets[bidx] = static_cast<int>(n);
        n += std::llabs(block_sizes[bidx]);
    }
    if (n < 1 || n > 100000) throw ParseError("unreasonable total dimension", toks.line());

    SdpProblem prob;
    prob.n = static_cast<int>(n);
    prob.m = static_cast<int>(m);
    prob.C = SymMatrix(prob.n);
    prob.A.assign(prob.m, SymMatrix(prob.n));
    prob.b = Eigen::VectorXd::Zero(prob.m);
    for (int i = 0; i < prob.m; ++i) prob.b(i) = toks.next_double("right-hand side");

    std::string tok;
    while (toks.next_token(tok)) {
        long long matno;
        try {
            matno = std::stoll(tok);
        } catch (const std::exception&) {
            throw ParseError("expected entry record, got '" + tok + "'", toks.line());
        }
        const long long blkno = toks.next_int("block number");
        const long long i = toks.next_int("row index");
        const long long j = toks.next_int("column index");
        const double value = toks.next_double("entry value");

        if (matno < 0 || matno > m) throw ParseError("matrix number out of range", toks.line());
        if (blkno < 1 || blkno > nblocks) throw ParseError("block number out of range", toks.line());
        const long long bsize = block_sizes[blkno - 1];
        const long long extent = std::llabs(bsize);
        if (i < 1 || j < 1 || i > extent || j > extent)
            throw ParseError("entry indices outside block", toks.line());
        if (bsize < 0 && i != j)
            throw ParseError("off-diagonal entry in a diagonal block", toks.line());

        const int gi = block_offsets[blkno - 1] + static_cast<int>(i) - 1;
        const int gj = block_offsets[blkno - 1] + static_cast<int>(j) - 1;
        SymMatrix& target = (matno == 0) ? prob.C : prob.A[static_cast<int>(matno) - 1];
        target.set(gi, gj, value);
    }

    for (const std::string& c : toks.comments()) {
        const auto key = c.find("objective-flipped:");
        if (key != std::string::npos && c.find('1', key) != std::string::npos)
            prob.objective_flipped = true;
        const auto namekey = c.find("name:");
        if (namekey != std::string::npos) {
            std::string v = c.substr(namekey + 5);
            const auto ws = v.find_first_not_of(" \t");
            prob.name = (ws == std::string::npos) ? "" : v.substr(ws);
        }
    }

    prob.validate();
    return prob;
}

SdpProblem parse_sdpa_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    SdpProblem p = parse_sdpa(in);
    if (p.name.empty()) p.name = path;
    return p;
}

void emit_sdpa(const SdpProblem& prob, std::ostream& out) {
    prob.validate();
    if (!prob.name.empty()) out << "* name: " << prob.name << "\n";
    if (prob.objective_flipped) out << "* objective-flipped: 1\n";
    out << prob.m << "\n1\n" << prob.n << "\n";
    for (int i = 0; i < prob.m; ++i) out << (i ? " " : "") << g17(prob.b(i));
    out << "\n";
    auto emit_matrix = [&](const SymMatrix& mat, int matno) {
        for (int j = 0; j < prob.n; ++j)
            for (int i = 0; i <= j; ++i)
                if (mat(i, j) != 0.0)
                    out << matno << " 1 " << (i + 1) << " " << (j + 1) << " " << g17(mat(i, j))
                        << "\n";
    };
    emit_matrix(prob.C, 0);
    for (int i = 0; i < prob.m; ++i) emit_matrix(prob.A[i], i + 1);
}

void emit_sdpa_file(const SdpProblem& prob, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    emit_sdpa(prob, out);
}

Eigen::VectorXd residuals(const SdpProblem& prob, const SymMatrix& X) {
    prob.validate();
    if (X.dim() != prob.n) throw DimensionMismatch("residuals: X has wrong dimension");
    Eigen::VectorXd r(prob.m);
    for (int i = 0; i < prob.m; ++i) r(i) = inner(prob.A[i], X) - prob.b(i);
    return r;
}

} // namespace blockfw
