#include <catch2/catch_amalgamated.hpp>

#include "qostf/channel.hpp"

using namespace qostf;

namespace {

// independent radix-2 FFT oracle, X[n] = sum_l x[l] exp(-i 2 pi n l / N)
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

}  // namespace

TEST_CASE("frame RNG substreams are deterministic and frame-distinct") {
    FrameRng a(123, 7), b(123, 7), c(123, 8), d(124, 7);
    for (int i = 0; i < 100; ++i) REQUIRE(a.raw() == b.raw());
    bool differs_frame = false, differs_seed = false;
    FrameRng a2(123, 7);
    for (int i = 0; i < 10; ++i) {
        const uint64_t v = a2.raw();
        differs_frame |= v != c.raw();
        differs_seed |= v != d.raw();
    }
    REQUIRE(differs_frame);
    REQUIRE(differs_seed);
}

TEST_CASE("gaussian draws have standard moments") {
    FrameRng rng(1, 0);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
    }
    REQUIRE(s1 / n == Catch::Approx(0.0).margin(0.01));
    REQUIRE(s2 / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("complex gaussian hits the requested variance per component") {
    FrameRng rng(2, 0);
    const int n = 100000;
    double sre = 0.0, sim = 0.0, e2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx z = rng.complex_gaussian(0.25);
        sre += z.real() * z.real();
        sim += z.imag() * z.imag();
        e2 += std::norm(z);
    }
    REQUIRE(e2 / n == Catch::Approx(0.25).margin(0.005));
    REQUIRE(sre / n == Catch::Approx(0.125).margin(0.004));
    REQUIRE(sim / n == Catch::Approx(0.125).margin(0.004));
}

TEST_CASE("uniform power delay profile is normalized") {
    for (int l : {1, 2, 4, 8}) {
        const PowerDelayProfile pdp = uniform_pdp(l);
        REQUIRE(pdp.taps() == l);
        REQUIRE(pdp.normalized());
        for (double p : pdp.tap_powers) REQUIRE(p == Catch::Approx(1.0 / l));
    }
    REQUIRE_THROWS_AS(uniform_pdp(0), std::invalid_argument);
    REQUIRE_FALSE(PowerDelayProfile{{0.5, 0.6}}.normalized());
}

TEST_CASE("sampled taps match the profile power on average") {
    const PowerDelayProfile pdp{{0.7, 0.2, 0.1}};
    FrameRng rng(3, 0);
    std::vector<double> acc(3, 0.0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const auto taps = sample_taps(pdp, 1, 1, rng);
        for (int l = 0; l < 3; ++l) acc[l] += std::norm(taps[l]);
    }
    for (int l = 0; l < 3; ++l)
        REQUIRE(acc[l] / trials == Catch::Approx(pdp.tap_powers[l]).epsilon(0.05));
    REQUIRE_THROWS_AS(sample_taps(PowerDelayProfile{{0.5, 0.6}}, 1, 1, rng),
                      std::invalid_argument);
}

TEST_CASE("frequency response matches the FFT oracle and Parseval") {
    FrameRng rng(4, 0);
    for (int n : {16, 64}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> taps(4);
            for (auto& t : taps) t = rng.complex_gaussian(1.0);
            const auto h = frequency_response(taps, n);
            std::vector<cplx> padded(taps);
            padded.resize(n, cplx{0.0, 0.0});
            fft_oracle(padded);
            double tap_energy = 0.0, cfr_energy = 0.0;
            for (int k = 0; k < n; ++k) {
                REQUIRE(std::abs(h[k] - padded[k]) < 1e-12);
                cfr_energy += std::norm(h[k]);
            }
            for (const cplx& t : taps) tap_energy += std::norm(t);
            REQUIRE(cfr_energy == Catch::Approx(n * tap_energy));
        }
    }
    REQUIRE_THROWS_AS(frequency_response(std::vector<cplx>(5), 4), std::invalid_argument);
}

TEST_CASE("flat single-tap channel has constant frequency response") {
    FrameRng rng(5, 0);
    const ChannelRealization ch = make_channel(uniform_pdp(1), 2, 2, 16, rng);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int n = 0; n < 16; ++n)
                REQUIRE(std::abs(ch.h(p, q, n) - ch.tap(p, q, 0)) < 1e-12);
}

TEST_CASE("apply_channel without noise reproduces the linear model") {
    FrameRng rng(6, 0);
    const ChannelRealization ch = make_channel(uniform_pdp(2), 2, 2, 8, rng);
    StfGrid grid(8, 2, 2);
    for (int t = 0; t < 2; ++t)
        for (int n = 0; n < 8; ++n)
            for (int p = 0; p < 2; ++p) grid.at(n, p, t) = rng.complex_gaussian(1.0);
    const RxTensor y = apply_channel(grid, ch, 0.0, rng);
    for (int t = 0; t < 2; ++t)
        for (int n = 0; n < 8; ++n)
            for (int q = 0; q < 2; ++q) {
                cplx ref{0.0, 0.0};
                for (int p = 0; p < 2; ++p) ref += grid.at(n, p, t) * ch.h(p, q, n);
                REQUIRE(std::abs(y.at(n, q, t) - ref) < 1e-12);
            }
    StfGrid bad(4, 2, 1);
    REQUIRE_THROWS_AS(apply_channel(bad, ch, 0.0, rng), std::invalid_argument);
}

TEST_CASE("channel realizations are reproducible from the frame substream") {
    FrameRng r1(9, 42), r2(9, 42);
    const ChannelRealization a = make_channel(uniform_pdp(4), 4, 2, 64, r1, 42);
    const ChannelRealization b = make_channel(uniform_pdp(4), 4, 2, 64, r2, 42);
    REQUIRE(a.taps == b.taps);
    REQUIRE(a.cfr == b.cfr);
}
