#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qostf/constellation.hpp"

namespace qostf {

using Eigen::Matrix4cd;
using Eigen::MatrixXcd;

/// One space-time-frequency codeword: rows map to consecutive subcarriers,
/// columns to transmit antennas.
struct StfCodeword {
    MatrixXcd matrix;
    std::vector<cplx> symbols;  // generating tuple (c1..c4 or x1..x4, x~5..x~8)
    double scale = 1.0;

    int rows() const { return static_cast<int>(matrix.rows()); }
    int cols() const { return static_cast<int>(matrix.cols()); }
};

/// 4x4 quasi-orthogonal block codeword. Unscaled; the Gram matrix couples
/// only column pairs (1,4) and (2,3).
inline Matrix4cd qostbc4(cplx c1, cplx c2, cplx c3, cplx c4) {
    Matrix4cd m;
    m << c1, c2, c3, c4,
        -std::conj(c2), std::conj(c1), -std::conj(c4), std::conj(c3),
        -std::conj(c3), -std::conj(c4), std::conj(c1), std::conj(c2),
        c4, -c3, -c2, c1;
    return m;
}

inline StfCodeword qostbc4_codeword(cplx c1, cplx c2, cplx c3, cplx c4) {
    StfCodeword cw;
    cw.matrix = qostbc4(c1, c2, c3, c4);
    cw.symbols = {c1, c2, c3, c4};
    cw.scale = 1.0;
    return cw;
}

/// Normalization for the sum/difference construction with Mt columns:
/// per-entry average energy 1/Mt, so each populated subcarrier carries unit
/// power summed over antennas.
inline double sum_diff_scale(int mt) { return 1.0 / std::sqrt(2.0 * mt); }

/// 8x4 codeword: rows 1-4 apply qostbc4 to the per-pair sums, rows 5-8 to the
/// differences. `scale` defaults to 1/sqrt(8) so the squared Frobenius norm of
/// a unit-modulus tuple equals the row count.
inline StfCodeword qostftc8(const std::array<cplx, 4>& x,
                            const std::array<cplx, 4>& xt,
                            double scale = sum_diff_scale(4)) {
    std::array<cplx, 4> u, v;
    for (int p = 0; p < 4; ++p) {
        u[p] = x[p] + xt[p];
        v[p] = x[p] - xt[p];
    }
    StfCodeword cw;
    cw.matrix.resize(8, 4);
    cw.matrix.topRows<4>() = scale * qostbc4(u[0], u[1], u[2], u[3]);
    cw.matrix.bottomRows<4>() = scale * qostbc4(v[0], v[1], v[2], v[3]);
    cw.symbols = {x[0], x[1], x[2], x[3], xt[0], xt[1], xt[2], xt[3]};
    cw.scale = scale;
    return cw;
}

inline Eigen::Matrix2cd alamouti2(cplx c1, cplx c2) {
    Eigen::Matrix2cd m;
    m << c1, c2, -std::conj(c2), std::conj(c1);
    return m;
}

/// 4x2 two-antenna baseline: stacked sum/difference Alamouti blocks.
inline StfCodeword qostfbc2(const std::array<cplx, 2>& x,
                            const std::array<cplx, 2>& xt,
                            double scale = sum_diff_scale(2)) {
    StfCodeword cw;
    cw.matrix.resize(4, 2);
    cw.matrix.topRows<2>() = scale * alamouti2(x[0] + xt[0], x[1] + xt[1]);
    cw.matrix.bottomRows<2>() = scale * alamouti2(x[0] - xt[0], x[1] - xt[1]);
    cw.symbols = {x[0], x[1], xt[0], xt[1]};
    cw.scale = scale;
    return cw;
}

/// Complex tensor indexed (subcarrier n, tx antenna p, OFDM symbol t).
struct StfGrid {
    int n_subcarriers = 0;
    int n_tx = 0;
    int n_symbols = 0;
    std::vector<cplx> data;

    StfGrid() = default;
    StfGrid(int n, int mt, int t)
        : n_subcarriers(n), n_tx(mt), n_symbols(t),
          data(static_cast<size_t>(n) * mt * t, cplx{0.0, 0.0}) {}

    cplx& at(int n, int p, int t) {
        return data[(static_cast<size_t>(t) * n_subcarriers + n) * n_tx + p];
    }
    cplx at(int n, int p, int t) const {
        return data[(static_cast<size_t>(t) * n_subcarriers + n) * n_tx + p];
    }

    double squared_norm() const {
        double s = 0.0;
        for (const cplx& z : data) s += std::norm(z);
        return s;
    }
};

/// Place codewords into one OFDM symbol. Codeword m occupies the m-th block of
/// `rows` consecutive subcarriers; leftover subcarriers stay zero.
inline StfGrid assemble_grid(const std::vector<StfCodeword>& codewords, int n_subcarriers) {
    if (codewords.empty())
        return StfGrid(n_subcarriers, 4, 1);
    const int rows = codewords.front().rows();
    const int mt = codewords.front().cols();
    const int capacity = n_subcarriers / rows;
    if (static_cast<int>(codewords.size()) > capacity)
        throw std::length_error("assemble_grid: too many codewords for subcarrier count");
    StfGrid grid(n_subcarriers, mt, 1);
    for (size_t m = 0; m < codewords.size(); ++m) {
        const StfCodeword& cw = codewords[m];
        if (cw.rows() != rows || cw.cols() != mt)
            throw std::invalid_argument("assemble_grid: mixed codeword shapes");
        for (int r = 0; r < rows; ++r)
            for (int p = 0; p < mt; ++p)
                grid.at(static_cast<int>(m) * rows + r, p, 0) = cw.matrix(r, p);
    }
    return grid;
}

/// Inverse of assemble_grid for the populated blocks.
inline std::vector<MatrixXcd> disassemble_grid(const StfGrid& grid, int rows, int n_blocks) {
    std::vector<MatrixXcd> out;
    out.reserve(n_blocks);
    for (int m = 0; m < n_blocks; ++m) {
        MatrixXcd blk(rows, grid.n_tx);
        for (int r = 0; r < rows; ++r)
            for (int p = 0; p < grid.n_tx; ++p)
                blk(r, p) = grid.at(m * rows + r, p, 0);
        out.push_back(std::move(blk));
    }
    return out;
}

/// A family of 8x4 codewords generated by per-slot pair alphabets. Slot p
/// carries the pair (x_p, x~_{p+4}); each symbol of the pair is drawn from the
/// base M-PSK rotated by the slot's angle. Pair ids enumerate
/// (x index, x~ index) as id = M*kx + kxt.
struct CodewordFamily {
    Constellation base;
    std::array<double, 4> x_rotation{};   // rotation of x_p per slot
    std::array<double, 4> xt_rotation{};  // rotation of x~_{p+4} per slot
    double scale = sum_diff_scale(4);

    int pair_alphabet_size() const { return base.order * base.order; }

    cplx x_point(int slot, int k) const {
        return base.points[k] * std::polar(1.0, x_rotation[slot]);
    }
    cplx xt_point(int slot, int k) const {
        return base.points[k] * std::polar(1.0, xt_rotation[slot]);
    }
    std::pair<cplx, cplx> pair_value(int slot, int pair_id) const {
        return {x_point(slot, pair_id / base.order),
                xt_point(slot, pair_id % base.order)};
    }

    StfCodeword codeword(const std::array<int, 4>& pair_ids) const {
        std::array<cplx, 4> x, xt;
        for (int p = 0; p < 4; ++p) {
            auto [xv, xtv] = pair_value(p, pair_ids[p]);
            x[p] = xv;
            xt[p] = xtv;
        }
        return qostftc8(x, xt, scale);
    }

    size_t size() const {
        size_t s = 1;
        for (int p = 0; p < 4; ++p) s *= pair_alphabet_size();
        return s;
    }
};

/// Full-diversity rotation pattern: the quasi-orthogonal structure couples
/// slot pairs (1,4) and (2,3), so the rotation separates slots {1,2} from
/// {3,4} on both the x and x~ quads. Pattern A keeps slots 1,2 unrotated;
/// pattern B is the mirrored assignment.
inline CodewordFamily make_family(const Constellation& base, double phi, bool mirrored) {
    CodewordFamily f;
    f.base = base;
    const double lo = mirrored ? phi : 0.0;
    const double hi = mirrored ? 0.0 : phi;
    f.x_rotation = {lo, lo, hi, hi};
    f.xt_rotation = {lo, lo, hi, hi};
    return f;
}

}  // namespace qostf
