#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qostf/channel.hpp"
#include "qostf/trellis.hpp"

namespace qostf {

using BitVec = std::vector<int>;

inline unsigned take_bits(const BitVec& bits, size_t pos, int n) {
    unsigned v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<unsigned>(bits.at(pos + i) & 1);
    return v;
}

inline void put_bits(BitVec& bits, size_t pos, int n, unsigned v) {
    for (int i = 0; i < n; ++i) bits.at(pos + i) = static_cast<int>((v >> (n - 1 - i)) & 1u);
}

struct FrameConfig {
    int n_subcarriers = 64;
    int n_symbols = 4;
};

/// Exact squared-distance metric of one candidate block codeword:
/// sum over rows r and rx antennas q of |Y - sum_p C H|^2. The reference the
/// fast table decoders are tested against.
inline double block_metric(const MatrixXcd& cw, const RxTensor& y,
                           const ChannelRealization& ch, int n_base, int t) {
    const int rows = static_cast<int>(cw.rows());
    double m = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int q = 0; q < ch.mr; ++q) {
            cplx pred{0.0, 0.0};
            for (int p = 0; p < ch.mt; ++p) pred += cw(r, p) * ch.h(p, q, n_base + r);
            m += std::norm(y.at(n_base + r, q, t) - pred);
        }
    return m;
}

/// Variant for codewords whose rows sit on scattered subcarriers.
inline double block_metric(const MatrixXcd& cw, const RxTensor& y,
                           const ChannelRealization& ch, const std::vector<int>& row_sc,
                           int t) {
    const int rows = static_cast<int>(cw.rows());
    double m = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int q = 0; q < ch.mr; ++q) {
            cplx pred{0.0, 0.0};
            for (int p = 0; p < ch.mt; ++p) pred += cw(r, p) * ch.h(p, q, row_sc[r]);
            m += std::norm(y.at(row_sc[r], q, t) - pred);
        }
    return m;
}

namespace detail {

inline int slot_pair_index(int p, int q, int n_slots) {
    return p * n_slots - p * (p + 1) / 2 + (q - p - 1);
}

/// Channel-dependent per-block tables. A block codeword is additive over its
/// slots, C(ids) = sum_p Cp[id_p], so with W_p[k] = Cp[k] folded through the
/// channel the metric splits into
///   m = ||Y||^2 + sum_p s_p[id_p] + sum_{p<q} e_pq[id_p, id_q].
/// W and e depend only on the channel, so one bank serves every OFDM symbol
/// of a quasi-static frame; s and the constant depend on Y.
struct SlotBank {
    int n_slots = 0, n_ids = 0, rows = 0, mr = 0, n_base = 0;
    std::vector<int> row_sc;   // optional row -> subcarrier map (else n_base + r)
    std::vector<MatrixXcd> w;  // [slot * n_ids + k], rows x mr
    std::vector<double> e;     // [slot_pair_index * n_ids^2 + j * n_ids + k]

    int sc(int r) const { return row_sc.empty() ? n_base + r : row_sc[r]; }

    const MatrixXcd& wv(int slot, int k) const { return w[slot * n_ids + k]; }
    double ev(int p, int q, int j, int k) const {
        return e[(static_cast<size_t>(slot_pair_index(p, q, n_slots)) * n_ids + j) * n_ids + k];
    }
    const double* erow(int p, int q, int j) const {
        return &e[(static_cast<size_t>(slot_pair_index(p, q, n_slots)) * n_ids + j) * n_ids];
    }

    double max_cross_group_e(const std::vector<std::pair<int, int>>& cross_pairs) const {
        double m = 0.0;
        for (auto [p, q] : cross_pairs)
            for (int j = 0; j < n_ids; ++j)
                for (int k = 0; k < n_ids; ++k) m = std::max(m, std::abs(ev(p, q, j, k)));
        return m;
    }
};

inline SlotBank make_slot_bank(const std::vector<std::vector<MatrixXcd>>& slot_mats,
                               const ChannelRealization& ch, int n_base,
                               std::vector<int> row_sc = {}) {
    SlotBank bank;
    bank.n_slots = static_cast<int>(slot_mats.size());
    bank.n_ids = static_cast<int>(slot_mats[0].size());
    bank.rows = static_cast<int>(slot_mats[0][0].rows());
    bank.mr = ch.mr;
    bank.n_base = n_base;
    bank.row_sc = std::move(row_sc);
    bank.w.reserve(static_cast<size_t>(bank.n_slots) * bank.n_ids);
    for (int p = 0; p < bank.n_slots; ++p)
        for (int k = 0; k < bank.n_ids; ++k) {
            MatrixXcd w = MatrixXcd::Zero(bank.rows, bank.mr);
            const MatrixXcd& c = slot_mats[p][k];
            for (int r = 0; r < bank.rows; ++r)
                for (int q = 0; q < bank.mr; ++q)
                    for (int tx = 0; tx < ch.mt; ++tx)
                        w(r, q) += c(r, tx) * ch.h(tx, q, bank.sc(r));
            bank.w.push_back(std::move(w));
        }
    const int n_pairs = bank.n_slots * (bank.n_slots - 1) / 2;
    bank.e.assign(static_cast<size_t>(n_pairs) * bank.n_ids * bank.n_ids, 0.0);
    for (int p = 0; p < bank.n_slots; ++p)
        for (int q = p + 1; q < bank.n_slots; ++q)
            for (int j = 0; j < bank.n_ids; ++j)
                for (int k = 0; k < bank.n_ids; ++k) {
                    const cplx ip = (bank.wv(p, j).conjugate().cwiseProduct(bank.wv(q, k))).sum();
                    bank.e[(static_cast<size_t>(slot_pair_index(p, q, bank.n_slots)) * bank.n_ids +
                            j) * bank.n_ids + k] = 2.0 * ip.real();
                }
    return bank;
}

struct BlockTables {
    const SlotBank* bank = nullptr;
    double y2 = 0.0;
    std::vector<double> s;  // [slot * n_ids + k]

    const double* srow(int slot) const { return &s[static_cast<size_t>(slot) * bank->n_ids]; }
};

inline BlockTables make_tables(const SlotBank& bank, const RxTensor& y, int t) {
    BlockTables tab;
    tab.bank = &bank;
    MatrixXcd yb(bank.rows, bank.mr);
    for (int r = 0; r < bank.rows; ++r)
        for (int q = 0; q < bank.mr; ++q) yb(r, q) = y.at(bank.sc(r), q, t);
    tab.y2 = yb.squaredNorm();
    tab.s.resize(static_cast<size_t>(bank.n_slots) * bank.n_ids);
    for (int p = 0; p < bank.n_slots; ++p)
        for (int k = 0; k < bank.n_ids; ++k) {
            const MatrixXcd& w = bank.wv(p, k);
            const cplx ip = (yb.conjugate().cwiseProduct(w)).sum();
            tab.s[static_cast<size_t>(p) * bank.n_ids + k] = w.squaredNorm() - 2.0 * ip.real();
        }
    return tab;
}

struct SubsetBest {
    double metric = std::numeric_limits<double>::infinity();
    std::array<int, 4> ids{0, 0, 0, 0};
};

/// Exact minimum over all n_ids^4 four-slot id combinations, tracked per
/// subset label l = (t0^t1) | (t2^t3)<<1. With an all-zero label table
/// everything lands in subset 0 and the result is the unconstrained minimum.
inline std::array<SubsetBest, 4> enumerate_best4(const BlockTables& tab,
                                                 const std::array<int, 16>& label) {
    const SlotBank& b = *tab.bank;
    const int n = b.n_ids;
    std::array<SubsetBest, 4> best;
    const double* s0 = tab.srow(0);
    const double* s1 = tab.srow(1);
    const double* s2 = tab.srow(2);
    const double* s3 = tab.srow(3);
    for (int i0 = 0; i0 < n; ++i0) {
        const double* e01 = b.erow(0, 1, i0);
        const double* e02 = b.erow(0, 2, i0);
        const double* e03 = b.erow(0, 3, i0);
        for (int i1 = 0; i1 < n; ++i1) {
            const double m01 = tab.y2 + s0[i0] + s1[i1] + e01[i1];
            const int l01 = label[i0] ^ label[i1];
            const double* e12 = b.erow(1, 2, i1);
            const double* e13 = b.erow(1, 3, i1);
            for (int i2 = 0; i2 < n; ++i2) {
                const double m012 = m01 + s2[i2] + e02[i2] + e12[i2];
                const double* e23 = b.erow(2, 3, i2);
                const int lbl2 = label[i2];
                for (int i3 = 0; i3 < n; ++i3) {
                    const double m = m012 + s3[i3] + e03[i3] + e13[i3] + e23[i3];
                    const int sub = l01 | ((lbl2 ^ label[i3]) << 1);
                    if (m < best[sub].metric) best[sub] = {m, {i0, i1, i2, i3}};
                }
            }
        }
    }
    return best;
}

inline std::array<int, 16> zero_labels() {
    std::array<int, 16> l{};
    return l;
}

}  // namespace detail

struct BlockDecodeResult {
    std::array<int, 4> ids{0, 0, 0, 0};
    double metric = 0.0;
    bool used_group_fast_path = false;
};

/// ML decode of one four-slot block. The quasi-orthogonal structure decouples
/// slot groups {1,4} and {2,3} when the channel is flat across the block's
/// subcarriers; in that case the two groups are searched independently
/// (2 x 256 combinations). Otherwise the cross-group terms are nonzero and the
/// decoder falls back to the exact joint enumeration.
inline BlockDecodeResult pairwise_decode_block(const detail::BlockTables& tab,
                                               double cross_tol = 1e-9) {
    const detail::SlotBank& b = *tab.bank;
    static const std::vector<std::pair<int, int>> cross{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    BlockDecodeResult res;
    if (b.max_cross_group_e(cross) <= cross_tol) {
        res.used_group_fast_path = true;
        double m03 = std::numeric_limits<double>::infinity();
        double m12 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < b.n_ids; ++i)
            for (int j = 0; j < b.n_ids; ++j) {
                const double a = tab.srow(0)[i] + tab.srow(3)[j] + b.ev(0, 3, i, j);
                if (a < m03) {
                    m03 = a;
                    res.ids[0] = i;
                    res.ids[3] = j;
                }
                const double c = tab.srow(1)[i] + tab.srow(2)[j] + b.ev(1, 2, i, j);
                if (c < m12) {
                    m12 = c;
                    res.ids[1] = i;
                    res.ids[2] = j;
                }
            }
        res.metric = tab.y2 + m03 + m12;
        return res;
    }
    const auto best = detail::enumerate_best4(tab, detail::zero_labels());
    res.ids = best[0].ids;
    res.metric = best[0].metric;
    return res;
}

struct DecodeStats {
    size_t blocks = 0;
    size_t group_fast_path_blocks = 0;
};

/// Uncoded 4-antenna block scheme: one codeword per 8 subcarriers, 16 bits
/// each (per slot 2 Gray bits select x, 2 select x~).
class Block4Codec {
public:
    Block4Codec(const CodewordFamily& family, const FrameConfig& cfg)
        : family_(family), cfg_(cfg) {
        if (cfg.n_subcarriers % 8 != 0)
            throw std::invalid_argument("Block4Codec: subcarrier count must be a multiple of 8");
        blocks_ = cfg.n_subcarriers / 8;
        slot_mats_.resize(4);
        for (int p = 0; p < 4; ++p)
            for (int k = 0; k < 16; ++k) slot_mats_[p].push_back(slot_matrix(p, k));
    }

    int n_tx() const { return 4; }
    int steps() const { return blocks_ * cfg_.n_symbols; }
    int bits_per_step() const { return 16; }
    size_t frame_bits() const { return static_cast<size_t>(steps()) * bits_per_step(); }

    std::array<int, 4> step_ids(const BitVec& bits, int z) const {
        std::array<int, 4> ids;
        for (int p = 0; p < 4; ++p) {
            const size_t pos = static_cast<size_t>(z) * 16 + 4 * p;
            const int kx = static_cast<int>(gray_decode(take_bits(bits, pos, 2)));
            const int kxt = static_cast<int>(gray_decode(take_bits(bits, pos + 2, 2)));
            ids[p] = 4 * kx + kxt;
        }
        return ids;
    }

    StfGrid encode(const BitVec& bits) const {
        if (bits.size() != frame_bits())
            throw std::invalid_argument("Block4Codec::encode: bit count mismatch");
        StfGrid grid(cfg_.n_subcarriers, 4, cfg_.n_symbols);
        for (int z = 0; z < steps(); ++z) {
            const int b = z % blocks_, t = z / blocks_;
            place(grid, family_.codeword(step_ids(bits, z)).matrix, b * 8, t);
        }
        return grid;
    }

    BitVec decode(const RxTensor& y, const ChannelRealization& ch,
                  DecodeStats* stats = nullptr) const {
        BitVec bits(frame_bits(), 0);
        for (int b = 0; b < blocks_; ++b) {
            const auto bank = detail::make_slot_bank(slot_mats_, ch, b * 8);
            for (int t = 0; t < cfg_.n_symbols; ++t) {
                const auto tab = detail::make_tables(bank, y, t);
                const auto res = pairwise_decode_block(tab);
                if (stats) {
                    ++stats->blocks;
                    if (res.used_group_fast_path) ++stats->group_fast_path_blocks;
                }
                const int z = t * blocks_ + b;
                for (int p = 0; p < 4; ++p) {
                    const size_t pos = static_cast<size_t>(z) * 16 + 4 * p;
                    put_bits(bits, pos, 2, gray_encode(static_cast<unsigned>(res.ids[p] / 4)));
                    put_bits(bits, pos + 2, 2, gray_encode(static_cast<unsigned>(res.ids[p] % 4)));
                }
            }
        }
        return bits;
    }

    const CodewordFamily& family() const { return family_; }

    MatrixXcd slot_matrix(int slot, int pair_id) const {
        std::array<cplx, 4> x{}, xt{};
        auto [xv, xtv] = family_.pair_value(slot, pair_id);
        x[slot] = xv;
        xt[slot] = xtv;
        return qostftc8(x, xt, family_.scale).matrix;
    }

    const std::vector<std::vector<MatrixXcd>>& slot_matrices() const { return slot_mats_; }

private:
    static void place(StfGrid& grid, const MatrixXcd& cw, int n_base, int t) {
        for (int r = 0; r < cw.rows(); ++r)
            for (int p = 0; p < cw.cols(); ++p) grid.at(n_base + r, p, t) = cw(r, p);
    }

    CodewordFamily family_;
    FrameConfig cfg_;
    int blocks_;
    std::vector<std::vector<MatrixXcd>> slot_mats_;
};

/// Two-antenna baseline: stacked sum/difference Alamouti blocks over 4
/// subcarriers, 8 bits per codeword at the same 2 bits per subcarrier rate.
/// With only two antennas the second diversity order must come from the
/// channel's frequency selectivity, so the sum half sits at subcarriers
/// {2b, 2b+1} and the difference half at {N/2 + 2b, N/2 + 2b+1}: each
/// Alamouti pair stays on adjacent tones (near-constant channel preserves
/// its orthogonality) while the two halves are half a band apart.
class Block2Codec {
public:
    Block2Codec(const Constellation& base, const FrameConfig& cfg)
        : base_(base), rot_(mpsk(base.order, base.rotation + optimal_rotation(base.order))),
          cfg_(cfg) {
        if (base.order != 4)
            throw std::invalid_argument("Block2Codec: QPSK base required");
        if (cfg.n_subcarriers % 4 != 0)
            throw std::invalid_argument("Block2Codec: subcarrier count must be a multiple of 4");
        blocks_ = cfg.n_subcarriers / 4;
        slot_mats_.resize(2);
        for (int p = 0; p < 2; ++p)
            for (int k = 0; k < 16; ++k) slot_mats_[p].push_back(slot_matrix(p, k));
    }

    int n_tx() const { return 2; }
    int steps() const { return blocks_ * cfg_.n_symbols; }
    int bits_per_step() const { return 8; }
    size_t frame_bits() const { return static_cast<size_t>(steps()) * bits_per_step(); }

    std::pair<cplx, cplx> pair_value(int pair_id) const {
        return {base_.points[pair_id / 4], rot_.points[pair_id % 4]};
    }

    MatrixXcd slot_matrix(int slot, int pair_id) const {
        std::array<cplx, 2> x{}, xt{};
        auto [xv, xtv] = pair_value(pair_id);
        x[slot] = xv;
        xt[slot] = xtv;
        return qostfbc2(x, xt).matrix;
    }

    std::vector<int> row_subcarriers(int b) const {
        // u half on tones {8k+2j, 8k+2j+1}, v half 4 tones above
        const int k = b / 2, j = b % 2;
        const int base = 8 * k + 2 * j;
        return {base, base + 1, base + 4, base + 5};
    }

    StfGrid encode(const BitVec& bits) const {
        if (bits.size() != frame_bits())
            throw std::invalid_argument("Block2Codec::encode: bit count mismatch");
        StfGrid grid(cfg_.n_subcarriers, 2, cfg_.n_symbols);
        for (int z = 0; z < steps(); ++z) {
            const int b = z % blocks_, t = z / blocks_;
            std::array<cplx, 2> x, xt;
            for (int p = 0; p < 2; ++p) {
                const size_t pos = static_cast<size_t>(z) * 8 + 4 * p;
                x[p] = base_.points[gray_decode(take_bits(bits, pos, 2))];
                xt[p] = rot_.points[gray_decode(take_bits(bits, pos + 2, 2))];
            }
            const MatrixXcd cw = qostfbc2(x, xt).matrix;
            const std::vector<int> sc = row_subcarriers(b);
            for (int r = 0; r < 4; ++r)
                for (int p = 0; p < 2; ++p) grid.at(sc[r], p, t) = cw(r, p);
        }
        return grid;
    }

    BitVec decode(const RxTensor& y, const ChannelRealization& ch) const {
        BitVec bits(frame_bits(), 0);
        for (int b = 0; b < blocks_; ++b) {
            const auto bank = detail::make_slot_bank(slot_mats_, ch, 0, row_subcarriers(b));
            for (int t = 0; t < cfg_.n_symbols; ++t) {
                const auto tab = detail::make_tables(bank, y, t);
                double best = std::numeric_limits<double>::infinity();
                int bi = 0, bj = 0;
                for (int i = 0; i < 16; ++i) {
                    const double si = tab.srow(0)[i];
                    const double* e = bank.erow(0, 1, i);
                    for (int j = 0; j < 16; ++j) {
                        const double m = si + tab.srow(1)[j] + e[j];
                        if (m < best) {
                            best = m;
                            bi = i;
                            bj = j;
                        }
                    }
                }
                const int z = t * blocks_ + b;
                const std::array<int, 2> ids{bi, bj};
                for (int p = 0; p < 2; ++p) {
                    const size_t pos = static_cast<size_t>(z) * 8 + 4 * p;
                    put_bits(bits, pos, 2, gray_encode(static_cast<unsigned>(ids[p] / 4)));
                    put_bits(bits, pos + 2, 2, gray_encode(static_cast<unsigned>(ids[p] % 4)));
                }
            }
        }
        return bits;
    }

private:
    Constellation base_;
    Constellation rot_;
    FrameConfig cfg_;
    int blocks_;
    std::vector<std::vector<MatrixXcd>> slot_mats_;
};

/// 4-state trellis scheme. A step consumes 16 bits: 2 select the next state
/// (the branch), 14 the codeword on the branch subset. The encoder starts in
/// state 0 and terminates by forcing the final step's branch to state 0 (that
/// step carries 14 data bits). Without termination a divergence on the last
/// step is protected by only one codeword distance and dominates the frame
/// error rate, erasing the coding gain. The decoder is a Viterbi search whose
/// branch metrics are exact per-subset ML minima from the joint enumeration.
class TrellisCodec {
public:
    TrellisCodec(const Trellis& trellis, const FrameConfig& cfg) : tr_(trellis), cfg_(cfg) {
        if (cfg.n_subcarriers % 8 != 0)
            throw std::invalid_argument("TrellisCodec: subcarrier count must be a multiple of 8");
        blocks_ = cfg.n_subcarriers / 8;
        for (int f = 0; f < 2; ++f) {
            slot_mats_[f].resize(4);
            for (int p = 0; p < 4; ++p)
                for (int k = 0; k < 16; ++k) slot_mats_[f][p].push_back(slot_matrix(f, p, k));
        }
    }

    int n_tx() const { return 4; }
    int steps() const { return blocks_ * cfg_.n_symbols; }
    int bits_per_step() const { return Trellis::kBitsPerStep; }
    size_t frame_bits() const { return static_cast<size_t>(steps()) * bits_per_step() - 2; }

    StfGrid encode(const BitVec& bits) const {
        if (bits.size() != frame_bits())
            throw std::invalid_argument("TrellisCodec::encode: bit count mismatch");
        StfGrid grid(cfg_.n_subcarriers, 4, cfg_.n_symbols);
        int state = 0;
        for (int z = 0; z < steps(); ++z) {
            const bool last = z == steps() - 1;
            const size_t pos = static_cast<size_t>(z) * 16;
            const int input = last ? 0 : static_cast<int>(take_bits(bits, pos, 2));
            const auto br = tr_.branch(state, input);
            const auto ids =
                tr_.subset_codeword(br.subset, take_bits(bits, pos + (last ? 0 : 2), 14));
            const MatrixXcd cw = tr_.family(br.family).codeword(ids).matrix;
            const int b = z % blocks_, t = z / blocks_;
            for (int r = 0; r < 8; ++r)
                for (int p = 0; p < 4; ++p) grid.at(b * 8 + r, p, t) = cw(r, p);
            state = br.next_state;
        }
        return grid;
    }

    BitVec decode(const RxTensor& y, const ChannelRealization& ch) const {
        constexpr int S = Trellis::kStates;
        const double INF = std::numeric_limits<double>::infinity();
        const int Z = steps();

        // per (frequency block, family) channel tables, shared by all symbols
        std::array<std::vector<detail::SlotBank>, 2> banks;
        for (int f = 0; f < 2; ++f) {
            banks[f].reserve(blocks_);
            for (int b = 0; b < blocks_; ++b)
                banks[f].push_back(detail::make_slot_bank(slot_mats_[f], ch, b * 8));
        }
        std::array<int, 16> label;
        for (int k = 0; k < 16; ++k) label[k] = tr_.t_label[k];

        std::vector<std::array<int, S>> prev(Z);
        std::vector<std::array<std::array<int, 4>, S>> chosen(Z);
        std::array<double, S> metric{0.0, INF, INF, INF};
        for (int z = 0; z < Z; ++z) {
            const int b = z % blocks_, t = z / blocks_;
            std::array<std::array<detail::SubsetBest, 4>, 2> best;
            for (int f = 0; f < 2; ++f)
                best[f] = detail::enumerate_best4(detail::make_tables(banks[f][b], y, t), label);
            std::array<double, S> next;
            next.fill(INF);
            const int j_end = z == Z - 1 ? 1 : S;  // terminated: last branch into state 0
            for (int j = 0; j < j_end; ++j)
                for (int i = 0; i < S; ++i) {
                    if (metric[i] >= INF) continue;
                    const auto br = tr_.branch(i, j);
                    const auto& cand = best[br.family][br.subset];
                    const double m = metric[i] + cand.metric;
                    if (m < next[j]) {
                        next[j] = m;
                        prev[z][j] = i;
                        chosen[z][j] = cand.ids;
                    }
                }
            metric = next;
        }

        int state = 0;  // terminated frame ends in state 0
        BitVec bits(frame_bits(), 0);
        for (int z = Z - 1; z >= 0; --z) {
            const int from = prev[z][state];
            const auto br = tr_.branch(from, state);
            const size_t pos = static_cast<size_t>(z) * 16;
            const bool last = z == Z - 1;
            if (!last) put_bits(bits, pos, 2, static_cast<unsigned>(state));
            put_bits(bits, pos + (last ? 0 : 2), 14,
                     tr_.codeword_bits(br.subset, chosen[z][state]));
            state = from;
        }
        return bits;
    }

    const Trellis& trellis() const { return tr_; }

    MatrixXcd slot_matrix(int fam, int slot, int pair_id) const {
        std::array<cplx, 4> x{}, xt{};
        auto [xv, xtv] = tr_.family(fam).pair_value(slot, pair_id);
        x[slot] = xv;
        xt[slot] = xtv;
        return qostftc8(x, xt, tr_.family(fam).scale).matrix;
    }

private:
    Trellis tr_;
    FrameConfig cfg_;
    int blocks_;
    std::array<std::vector<std::vector<MatrixXcd>>, 2> slot_mats_;
};

}  // namespace qostf
