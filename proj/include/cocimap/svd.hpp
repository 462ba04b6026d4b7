#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace cocimap {

struct LeverageResult {
    std::vector<double> scores;  // one per row, sum to 1
    int rank_used = 0;           // r: top singular values covering the mass fraction
    int numeric_rank = 0;
};

// Row leverage scores against the top-r left singular subspace, where r is
// the smallest count of singular values whose sum reaches `mass_fraction` of
// the total. score_i = (1/r) * sum_{xi<=r} U(i,xi)^2.
inline LeverageResult row_leverage_scores(const std::vector<std::vector<double>>& rows,
                                          double mass_fraction = 0.8) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty matrix");
    Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    Eigen::Index n = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd a(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw std::invalid_argument("ragged matrix");
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();  // descending
    double total = sigma.sum();
    if (total <= 0.0) throw std::invalid_argument("zero matrix");

    LeverageResult res;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        acc += sigma(i);
        if (res.rank_used == 0 && acc >= mass_fraction * total)
            res.rank_used = static_cast<int>(i) + 1;
        if (sigma(i) > 1e-9 * sigma(0)) res.numeric_rank = static_cast<int>(i) + 1;
    }
    if (res.rank_used == 0) res.rank_used = static_cast<int>(sigma.size());

    const auto& u = svd.matrixU();
    res.scores.resize(static_cast<std::size_t>(m), 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
        double s = 0.0;
        for (int xi = 0; xi < res.rank_used; ++xi) s += u(i, xi) * u(i, xi);
        res.scores[static_cast<std::size_t>(i)] = s / static_cast<double>(res.rank_used);
    }
    return res;
}

}  // namespace cocimap
