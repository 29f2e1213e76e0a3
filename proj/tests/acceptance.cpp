// Acceptance suite: one pass/fail line per criterion. Criteria 1-5 are fast
// structural and exactness checks; 6-8 are the quantitative curve
// reproductions (the long part); 9 checks bit-identical reruns.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <vector>

#include "qostf/harness.hpp"

using namespace qostf;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- criterion 1: quasi-orthogonality ----
void criterion1() {
    FrameRng rng(101, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto sym = [&] { return rng.complex_gaussian(1.0); };
        const Matrix4cd c = qostbc4(sym(), sym(), sym(), sym());
        const Matrix4cd g = c.adjoint() * c;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const bool coupled = (i == 0 && j == 3) || (i == 3 && j == 0) ||
                                     (i == 1 && j == 2) || (i == 2 && j == 1);
                if (i != j && !coupled) worst = std::max(worst, std::abs(g(i, j)));
            }
    }
    report(1, worst <= 1e-12,
           fmt("quasi-orthogonality over 1000 random tuples, max stray Gram entry %.3g",
               worst));
}

// ---- criterion 2: CFR against an FFT oracle + Parseval ----
void fft_oracle(std::vector<cplx>& a) {
    const size_t n = a.size();
    if (n <= 1) return;
    std::vector<cplx> even(n / 2), odd(n / 2);
    for (size_t i = 0; i < n / 2; ++i) {
        even[i] = a[2 * i];
        odd[i] = a[2 * i + 1];
    }
    fft_oracle(even);
    fft_oracle(odd);
    for (size_t k = 0; k < n / 2; ++k) {
        const cplx t = std::polar(1.0, -2.0 * std::numbers::pi * k / n) * odd[k];
        a[k] = even[k] + t;
        a[k + n / 2] = even[k] - t;
    }
}

void criterion2() {
    FrameRng rng(102, 0);
    double worst = 0.0, worst_parseval = 0.0;
    for (int n : {16, 64})
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<cplx> taps(4);
            for (auto& t : taps) t = rng.complex_gaussian(1.0);
            const auto h = frequency_response(taps, n);
            std::vector<cplx> oracle(taps);
            oracle.resize(n, cplx{0.0, 0.0});
            fft_oracle(oracle);
            double eh = 0.0, et = 0.0;
            for (int k = 0; k < n; ++k) {
                worst = std::max(worst, std::abs(h[k] - oracle[k]));
                eh += std::norm(h[k]);
            }
            for (const cplx& t : taps) et += std::norm(t);
            worst_parseval = std::max(worst_parseval, std::abs(eh - n * et) / (n * et));
        }
    report(2, worst <= 1e-12 && worst_parseval <= 1e-12,
           fmt("CFR vs FFT oracle max err %.3g, Parseval rel err %.3g", worst,
               worst_parseval));
}

// ---- criterion 3: full diversity of the rotated family ----
void criterion3() {
    const CodewordFamily rotated = expand_constellation(mpsk(4)).a;
    const CodewordFamily unrotated = make_family(mpsk(4), 0.0, false);

    auto pair_cgd = [](const CodewordFamily& f, const std::array<int, 4>& ia,
                       const std::array<int, 4>& ib) {
        return pairwise_metrics({f.codeword(ia)}, {f.codeword(ib)}).cgd;
    };
    // exhaustive over pairs differing in at most 2 of the 8 symbol positions;
    // position p < 4 is x_{p+1}, position p >= 4 is x~_{p+1}
    auto exhaustive_min = [&](const CodewordFamily& f) {
        double min_cgd = 1e300;
        auto apply = [](std::array<int, 4>& ids, int pos, int v) {
            const int slot = pos % 4;
            if (pos < 4) ids[slot] = 4 * v + ids[slot] % 4;
            else ids[slot] = 4 * (ids[slot] / 4) + v;
        };
        for (int p1 = 0; p1 < 8; ++p1)
            for (int p2 = p1; p2 < 8; ++p2)
                for (int a1 = 0; a1 < 4; ++a1)
                    for (int b1 = 0; b1 < 4; ++b1)
                        for (int a2 = 0; a2 < 4; ++a2)
                            for (int b2 = 0; b2 < 4; ++b2) {
                                if (p1 == p2 && (a2 != a1 || b2 != b1)) continue;
                                std::array<int, 4> ia{0, 0, 0, 0}, ib{0, 0, 0, 0};
                                apply(ia, p1, a1);
                                apply(ib, p1, b1);
                                apply(ia, p2, a2);
                                apply(ib, p2, b2);
                                if (ia == ib) continue;
                                min_cgd = std::min(min_cgd, pair_cgd(f, ia, ib));
                            }
        return min_cgd;
    };
    const double min_ex = exhaustive_min(rotated);

    FrameRng rng(103, 0);
    double min_rand = 1e300;
    for (int trial = 0; trial < 100000; ++trial) {
        std::array<int, 4> ia, ib;
        for (int p = 0; p < 4; ++p) {
            ia[p] = rng.uniform_int(16);
            ib[p] = rng.uniform_int(16);
        }
        if (ia == ib) continue;
        min_rand = std::min(min_rand, pair_cgd(rotated, ia, ib));
    }
    const double min_unrot = exhaustive_min(unrotated);
    report(3, min_ex > 1e-9 && min_rand > 1e-9 && min_unrot <= 1e-9,
           fmt("rotated family min CGD %.4g (exhaustive <=2 positions), %.4g (1e5 random); "
               "unrotated search hits %.3g",
               min_ex, min_rand, min_unrot));
}

// ---- criterion 4: decoder exactness ----
void criterion4() {
    const FamilyPair fams = expand_constellation(mpsk(4));
    bool pairwise_ok = true;
    {
        const CodewordFamily rf = make_family(mpsk(2), optimal_rotation(4), false);
        std::vector<std::vector<MatrixXcd>> mats(4);
        for (int p = 0; p < 4; ++p)
            for (int k = 0; k < 4; ++k) {
                std::array<cplx, 4> x{}, xt{};
                auto [xv, xtv] = rf.pair_value(p, k);
                x[p] = xv;
                xt[p] = xtv;
                mats[p].push_back(qostftc8(x, xt, rf.scale).matrix);
            }
        for (int trial = 0; trial < 1000 && pairwise_ok; ++trial) {
            FrameRng rng(104, static_cast<uint64_t>(trial));
            const int taps = trial % 2 == 0 ? 1 : 4;
            const ChannelRealization ch = make_channel(uniform_pdp(taps), 4, 1, 8, rng);
            std::array<int, 4> tx;
            for (int& i : tx) i = rng.uniform_int(4);
            const RxTensor y =
                apply_channel(assemble_grid({rf.codeword(tx)}, 8), ch, 0.5, rng);
            const auto bank = detail::make_slot_bank(mats, ch, 0);
            const auto res = pairwise_decode_block(detail::make_tables(bank, y, 0));
            std::array<int, 4> ref{};
            double best = 1e300;
            for (int i0 = 0; i0 < 4; ++i0)
                for (int i1 = 0; i1 < 4; ++i1)
                    for (int i2 = 0; i2 < 4; ++i2)
                        for (int i3 = 0; i3 < 4; ++i3) {
                            const std::array<int, 4> ids{i0, i1, i2, i3};
                            const double m =
                                block_metric(rf.codeword(ids).matrix, y, ch, 0, 0);
                            if (m < best) {
                                best = m;
                                ref = ids;
                            }
                        }
            pairwise_ok = res.ids == ref;
        }
    }

    bool viterbi_ok = true;
    {
        const Trellis tr =
            build_trellis(partition(fams.a, 1), partition(fams.b, 1), fams.a, fams.b);
        const TrellisCodec codec(tr, FrameConfig{16, 1});  // Z = 2
        for (int trial = 0; trial < 4 && viterbi_ok; ++trial) {
            FrameRng rng(105, static_cast<uint64_t>(trial));
            BitVec bits(codec.frame_bits());
            for (int& b : bits) b = rng.uniform_int(2);
            const ChannelRealization ch = make_channel(uniform_pdp(4), 4, 1, 16, rng);
            const RxTensor y = apply_channel(codec.encode(bits), ch, 0.8, rng);
            double best = 1e300;
            BitVec best_bits;
            for (int j = 0; j < 4; ++j) {
                BitVec cand(codec.frame_bits(), 0);
                put_bits(cand, 0, 2, static_cast<unsigned>(j));
                const std::array<Trellis::Branch, 2> brs{tr.branch(0, j), tr.branch(j, 0)};
                double total = 0.0;
                for (int z = 0; z < 2; ++z) {
                    double bm = 1e300;
                    unsigned bm_bits = 0;
                    for (unsigned pb = 0; pb < (1u << 14); ++pb) {
                        const auto ids = tr.subset_codeword(brs[z].subset, pb);
                        const double m = block_metric(
                            tr.family(brs[z].family).codeword(ids).matrix, y, ch, z * 8, 0);
                        if (m < bm) {
                            bm = m;
                            bm_bits = pb;
                        }
                    }
                    total += bm;
                    put_bits(cand, z == 0 ? 2 : 16, 14, bm_bits);
                }
                if (total < best) {
                    best = total;
                    best_bits = cand;
                }
            }
            viterbi_ok = codec.decode(y, ch) == best_bits;
        }
    }

    bool noiseless_ok = true;
    for (const char* name : {"qostfbc-2tx", "qostfbc-4tx", "qostftc-4state"})
        for (int mr : {1, 2}) {
            ExperimentConfig cfg;
            cfg.scheme = name;
            cfg.mr = mr;
            const Scheme scheme(cfg);
            for (uint64_t f = 0; f < 100 && noiseless_ok; ++f)
                noiseless_ok = scheme.run_frame(f, 0.0) == 0;
        }
    report(4, pairwise_ok && viterbi_ok && noiseless_ok,
           fmt("pairwise=ML %s, viterbi=exhaustive %s, noiseless clean %s",
               pairwise_ok ? "yes" : "NO", viterbi_ok ? "yes" : "NO",
               noiseless_ok ? "yes" : "NO"));
}

// ---- criterion 5: trellis validity ----
void criterion5() {
    const FamilyPair fams = expand_constellation(mpsk(4));
    bool built = false;
    PathMetrics pm{};
    try {
        const Trellis tr =
            build_trellis(partition(fams.a, 1), partition(fams.b, 1), fams.a, fams.b);
        built = true;
        pm = min_path_metrics(tr, 8);
    } catch (const std::exception&) {
    }
    report(5, built && pm.min_delta_h >= 2,
           fmt("trellis built, min delta_H %d (events up to length 8), min event CGD*MPD "
               "%.4g, min parallel CGD*MPD %.4g",
               pm.min_delta_h, pm.min_event_metric, pm.min_parallel_metric));
}

// ---- criteria 6-8: quantitative sweeps ----
FerCurve sweep(const char* scheme, int mr, double lo, double hi, uint64_t seed = 7) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.mr = mr;
    cfg.snr_start = lo;
    cfg.snr_stop = hi;
    cfg.snr_step = 2.0;
    cfg.seed = seed;
    std::fprintf(stderr, "sweep %s mr=%d [%g..%g] dB\n", scheme, mr, lo, hi);
    return run_sweep(cfg, [&](const FerPoint& p) {
        std::fprintf(stderr, "  %5.1f dB  fer %.3g  (%ld/%ld)\n", p.snr_db, p.fer, p.errors,
                     p.frames);
    });
}

int main_quantitative() {
    // criterion 6
    const FerCurve b4_mr1 = sweep("qostfbc-4tx", 1, 12, 22);
    const FerCurve b2_mr1 = sweep("qostfbc-2tx", 1, 14, 26);
    {
        bool ok = true;
        std::string detail;
        try {
            const double gap = compare_curves(b4_mr1, b2_mr1, 1e-2);
            FerCurve band;
            for (const auto& p : b4_mr1.points)
                if (p.fer >= 1e-3 && p.fer <= 1e-1) band.points.push_back(p);
            const double slope = diversity_slope(band, 1.0);
            ok = std::abs(gap - 4.0) <= 1.5 && slope >= 3.5;
            detail = fmt("4tx vs 2tx gap %.2f dB at FER 1e-2 (target 4 +/- 1.5), 4tx implied "
                         "order %.2f (>= 3.5)",
                         gap, slope);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("curve evaluation failed: ") + e.what();
        }
        report(6, ok, detail);
    }

    // criterion 7
    const FerCurve tc_mr1 = sweep("qostftc-4state", 1, 10, 20);
    {
        bool ok = true;
        std::string detail;
        try {
            const double gain = compare_curves(tc_mr1, b4_mr1, 1e-2);
            ok = std::abs(gain - 3.6) <= 1.5 && gain >= 2.0;
            detail = fmt("trellis vs block coding gain %.2f dB at FER 1e-2 "
                         "(target 3.6 +/- 1.5, floor 2.0)",
                         gain);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("curve evaluation failed: ") + e.what();
        }
        report(7, ok, detail);
    }

    // criterion 8
    const FerCurve b4_mr2 = sweep("qostfbc-4tx", 2, 6, 16);
    const FerCurve tc_mr2 = sweep("qostftc-4state", 2, 4, 14);
    {
        bool ok = true;
        std::string detail;
        try {
            const double gap_b = compare_curves(b4_mr2, b4_mr1, 1e-2);
            const double gap_t = compare_curves(tc_mr2, tc_mr1, 1e-3);
            const double s_b1 = diversity_slope(b4_mr1), s_b2 = diversity_slope(b4_mr2);
            const double s_t1 = diversity_slope(tc_mr1), s_t2 = diversity_slope(tc_mr2);
            ok = std::abs(gap_b - 4.6) <= 1.5 && std::abs(gap_t - 4.0) <= 1.5 &&
                 s_b2 > s_b1 && s_t2 > s_t1;
            detail = fmt("block Mr2-Mr1 gap %.2f dB at 1e-2 (4.6 +/- 1.5), trellis gap %.2f dB "
                         "at 1e-3 (4 +/- 1.5); slopes block %.2f->%.2f trellis %.2f->%.2f",
                         gap_b, gap_t, s_b1, s_b2, s_t1, s_t2);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("curve evaluation failed: ") + e.what();
        }
        report(8, ok, detail);
    }
    return 0;
}

// ---- criterion 9: bit-identical rerun ----
void criterion9() {
    ExperimentConfig cfg;
    cfg.scheme = "qostfbc-4tx";
    cfg.mr = 1;
    cfg.snr_start = 8;
    cfg.snr_stop = 12;
    cfg.snr_step = 2;
    cfg.stop_errors = 30;
    cfg.max_frames = 2000;
    cfg.seed = 12345;
    std::ostringstream a, b;
    write_fer_csv(run_sweep(cfg), a);
    write_fer_csv(run_sweep(cfg), b);
    report(9, a.str() == b.str(),
           fmt("rerun CSV %s (%zu bytes)", a.str() == b.str() ? "bit-identical" : "DIFFERS",
               a.str().size()));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    main_quantitative();
    criterion9();
    if (g_failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
