#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qostf/codebook.hpp"

namespace qostf {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-frame random substream keyed by (master seed, frame id).
/// Gaussian draws use Box-Muller so the sequence is identical across standard
/// library implementations.
class FrameRng {
public:
    FrameRng(uint64_t master_seed, uint64_t frame_id)
        : gen_(splitmix64(master_seed ^ splitmix64(frame_id + 0x51ed2701a2b5e3dull))) {}

    double uniform() {
        // in (0, 1]
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_gaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

    uint64_t raw() { return gen_(); }

    int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct PowerDelayProfile {
    std::vector<double> tap_powers;  // sigma_l^2, delay index l = position

    int taps() const { return static_cast<int>(tap_powers.size()); }

    bool normalized(double tol = 1e-9) const {
        double s = 0.0;
        for (double p : tap_powers) {
            if (p < 0.0) return false;
            s += p;
        }
        return std::abs(s - 1.0) <= tol;
    }
};

inline PowerDelayProfile uniform_pdp(int taps) {
    if (taps < 1) throw std::invalid_argument("uniform_pdp: taps must be >= 1");
    return {std::vector<double>(taps, 1.0 / taps)};
}

/// Tap gains and the derived per-subcarrier frequency response of one
/// quasi-static frame. Indexing: taps[(p*Mr + q)*L + l], cfr[(p*Mr + q)*N + n].
struct ChannelRealization {
    int mt = 0, mr = 0, taps_per_link = 0, n_subcarriers = 0;
    uint64_t frame_id = 0;
    std::vector<cplx> taps;
    std::vector<cplx> cfr;

    cplx tap(int p, int q, int l) const {
        return taps[(static_cast<size_t>(p) * mr + q) * taps_per_link + l];
    }
    cplx h(int p, int q, int n) const {
        return cfr[(static_cast<size_t>(p) * mr + q) * n_subcarriers + n];
    }
};

/// Independent CN(0, sigma_l^2) tap draws per (tx, rx, delay); no spatial
/// correlation. Draw order is fixed (p, q, l) for reproducibility.
inline std::vector<cplx> sample_taps(const PowerDelayProfile& pdp, int mt, int mr,
                                     FrameRng& rng) {
    if (!pdp.normalized())
        throw std::invalid_argument("sample_taps: power delay profile must sum to 1");
    std::vector<cplx> taps;
    taps.reserve(static_cast<size_t>(mt) * mr * pdp.taps());
    for (int p = 0; p < mt; ++p)
        for (int q = 0; q < mr; ++q)
            for (int l = 0; l < pdp.taps(); ++l)
                taps.push_back(rng.complex_gaussian(pdp.tap_powers[l]));
    return taps;
}

/// H(n) = sum_l alpha(l) exp(-i 2 pi n l / N): N-point transform of the
/// zero-padded tap vector.
inline std::vector<cplx> frequency_response(const std::vector<cplx>& link_taps, int n_subcarriers) {
    if (static_cast<int>(link_taps.size()) > n_subcarriers)
        throw std::invalid_argument("frequency_response: more taps than subcarriers");
    std::vector<cplx> h(n_subcarriers);
    for (int n = 0; n < n_subcarriers; ++n) {
        cplx acc{0.0, 0.0};
        for (size_t l = 0; l < link_taps.size(); ++l) {
            const double phase = -2.0 * std::numbers::pi * n * static_cast<double>(l) / n_subcarriers;
            acc += link_taps[l] * cplx{std::cos(phase), std::sin(phase)};
        }
        h[n] = acc;
    }
    return h;
}

inline ChannelRealization make_channel(const PowerDelayProfile& pdp, int mt, int mr,
                                       int n_subcarriers, FrameRng& rng,
                                       uint64_t frame_id = 0) {
    ChannelRealization ch;
    ch.mt = mt;
    ch.mr = mr;
    ch.taps_per_link = pdp.taps();
    ch.n_subcarriers = n_subcarriers;
    ch.frame_id = frame_id;
    ch.taps = sample_taps(pdp, mt, mr, rng);
    ch.cfr.resize(static_cast<size_t>(mt) * mr * n_subcarriers);
    for (int p = 0; p < mt; ++p)
        for (int q = 0; q < mr; ++q) {
            std::vector<cplx> link(ch.taps.begin() + (static_cast<size_t>(p) * mr + q) * pdp.taps(),
                                   ch.taps.begin() + (static_cast<size_t>(p) * mr + q + 1) * pdp.taps());
            auto h = frequency_response(link, n_subcarriers);
            std::copy(h.begin(), h.end(),
                      ch.cfr.begin() + (static_cast<size_t>(p) * mr + q) * n_subcarriers);
        }
    return ch;
}

/// Received tensor indexed (n, q, t): Y = sum_p grid * H + CN(0, n0) noise.
/// The cyclic prefix is modeled as ideal, so the frequency-domain product is
/// exact.
struct RxTensor {
    int n_subcarriers = 0, mr = 0, n_symbols = 0;
    std::vector<cplx> data;

    RxTensor() = default;
    RxTensor(int n, int mr_, int t)
        : n_subcarriers(n), mr(mr_), n_symbols(t),
          data(static_cast<size_t>(n) * mr_ * t, cplx{0.0, 0.0}) {}

    cplx& at(int n, int q, int t) {
        return data[(static_cast<size_t>(t) * n_subcarriers + n) * mr + q];
    }
    cplx at(int n, int q, int t) const {
        return data[(static_cast<size_t>(t) * n_subcarriers + n) * mr + q];
    }
};

inline RxTensor apply_channel(const StfGrid& grid, const ChannelRealization& ch,
                              double n0, FrameRng& rng) {
    if (grid.n_tx != ch.mt || grid.n_subcarriers != ch.n_subcarriers)
        throw std::invalid_argument("apply_channel: grid/channel dimension mismatch");
    RxTensor y(grid.n_subcarriers, ch.mr, grid.n_symbols);
    for (int t = 0; t < grid.n_symbols; ++t)
        for (int n = 0; n < grid.n_subcarriers; ++n)
            for (int q = 0; q < ch.mr; ++q) {
                cplx acc{0.0, 0.0};
                for (int p = 0; p < ch.mt; ++p) acc += grid.at(n, p, t) * ch.h(p, q, n);
                if (n0 > 0.0) acc += rng.complex_gaussian(n0);
                y.at(n, q, t) = acc;
            }
    return y;
}

}  // namespace qostf
