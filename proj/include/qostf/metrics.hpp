#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <complex>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qostf/codebook.hpp"

namespace qostf {

/// A^z = (C - E)^H (C - E) for same-shape codewords. Hermitian PSD.
inline Matrix4cd distance_matrix(const StfCodeword& c, const StfCodeword& e) {
    if (c.rows() != e.rows() || c.cols() != e.cols())
        throw std::invalid_argument("distance_matrix: shape mismatch");
    if (c.cols() != 4)
        throw std::invalid_argument("distance_matrix: expected 4 tx antennas");
    const MatrixXcd d = c.matrix - e.matrix;
    return (d.adjoint() * d).eval();
}

inline MatrixXcd difference_matrix(const StfCodeword& c, const StfCodeword& e) {
    if (c.rows() != e.rows() || c.cols() != e.cols())
        throw std::invalid_argument("difference_matrix: shape mismatch");
    return c.matrix - e.matrix;
}

/// Coding gain distance det(sum_z A^z), clamped at zero for tiny negative
/// numerical results. Empty event -> 0.
inline double cgd(const std::vector<Matrix4cd>& distance_matrices) {
    if (distance_matrices.empty()) return 0.0;
    Matrix4cd sum = Matrix4cd::Zero();
    for (const auto& a : distance_matrices) sum += a;
    const double d = sum.determinant().real();
    return std::max(d, 0.0);
}

/// Modified product distance prod_z (1 + ||D^z||_F^2). Empty event -> 1.
inline double mpd(const std::vector<MatrixXcd>& difference_matrices) {
    double prod = 1.0;
    for (const auto& d : difference_matrices) prod *= 1.0 + d.squaredNorm();
    return prod;
}

/// Printed per-pair sum form of the pairwise CGD for two 8-symbol tuples.
/// Vanishes only for identical tuples; used as a full-diversity zero/nonzero
/// indicator, never as the partitioning metric.
inline double closed_form_cgd(const std::vector<cplx>& g1, const std::vector<cplx>& g2) {
    if (g1.size() != 8 || g2.size() != 8)
        throw std::invalid_argument("closed_form_cgd: expected 8-symbol tuples");
    double s = 0.0;
    for (int p = 0; p < 4; ++p) {
        const cplx dx = g1[p] - g2[p];
        const cplx dxt = g1[p + 4] - g2[p + 4];
        s += std::norm(dx + dxt) + std::norm(dx - dxt);
    }
    return s / 8.0;
}

/// Count of coding steps at which the two sequences differ.
template <typename Seq>
inline int hamming_distance(const Seq& a, const Seq& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    int d = 0;
    for (size_t z = 0; z < a.size(); ++z)
        if (a[z] != b[z]) ++d;
    return d;
}

/// 4 * Mr * min(delta_h, L).
inline int diversity_bound(int delta_h, int taps, int mr) {
    if (delta_h < 0 || taps < 0 || mr < 0)
        throw std::invalid_argument("diversity_bound: negative argument");
    return 4 * mr * std::min(delta_h, taps);
}

/// Numerical rank; singular values below 1e-9 x (largest) count as zero.
inline int matrix_rank(const Matrix4cd& a, double rel_tol = 1e-9) {
    Eigen::JacobiSVD<Matrix4cd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++r;
    return r;
}

struct PairwiseMetrics {
    double cgd = 0.0;
    double mpd = 1.0;
    int min_rank = 0;
    int delta_h = 0;
};

/// Metrics of one error event given the per-step codeword pairs that differ.
inline PairwiseMetrics pairwise_metrics(const std::vector<StfCodeword>& c_seq,
                                        const std::vector<StfCodeword>& e_seq) {
    if (c_seq.size() != e_seq.size())
        throw std::invalid_argument("pairwise_metrics: length mismatch");
    PairwiseMetrics m;
    std::vector<Matrix4cd> as;
    std::vector<MatrixXcd> ds;
    m.min_rank = 4;
    for (size_t z = 0; z < c_seq.size(); ++z) {
        MatrixXcd d = difference_matrix(c_seq[z], e_seq[z]);
        if (d.squaredNorm() < 1e-24) continue;
        ++m.delta_h;
        Matrix4cd a = distance_matrix(c_seq[z], e_seq[z]);
        m.min_rank = std::min(m.min_rank, matrix_rank(a));
        as.push_back(a);
        ds.push_back(std::move(d));
    }
    if (m.delta_h == 0) m.min_rank = 0;
    m.cgd = cgd(as);
    m.mpd = mpd(ds);
    return m;
}

struct MetricRow {
    std::string pair_id;
    PairwiseMetrics metrics;
};

/// Metric table export: pair id, cgd, mpd, rank, product.
inline void write_metric_csv(const std::vector<MetricRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_metric_csv: cannot open " + path);
    out << "pair_id,cgd,mpd,min_rank,cgd_mpd\n";
    out.precision(12);
    for (const auto& r : rows)
        out << r.pair_id << ',' << r.metrics.cgd << ',' << r.metrics.mpd << ','
            << r.metrics.min_rank << ',' << r.metrics.cgd * r.metrics.mpd << '\n';
}

}  // namespace qostf
