#include <catch2/catch_amalgamated.hpp>

#include "qostf/constellation.hpp"

using namespace qostf;

TEST_CASE("mpsk points lie on the unit circle with uniform spacing") {
    for (int m : {2, 4, 8, 16}) {
        const Constellation c = mpsk(m);
        REQUIRE(c.order == m);
        REQUIRE(static_cast<int>(c.points.size()) == m);
        for (int k = 0; k < m; ++k) {
            REQUIRE(std::abs(std::abs(c.points[k]) - 1.0) < 1e-12);
            const cplx ratio = c.points[(k + 1) % m] / c.points[k];
            REQUIRE(std::abs(ratio - std::polar(1.0, 2.0 * std::numbers::pi / m)) < 1e-12);
        }
    }
}

TEST_CASE("mpsk rotation shifts every point by the same angle") {
    const double rot = 0.3;
    const Constellation base = mpsk(4);
    const Constellation rotated = mpsk(4, rot);
    for (int k = 0; k < 4; ++k)
        REQUIRE(std::abs(rotated.points[k] - base.points[k] * std::polar(1.0, rot)) < 1e-12);
}

TEST_CASE("optimal rotation is pi/M for even M and pi/2 for odd M") {
    REQUIRE(optimal_rotation(4) == Catch::Approx(std::numbers::pi / 4));
    REQUIRE(optimal_rotation(8) == Catch::Approx(std::numbers::pi / 8));
    REQUIRE(optimal_rotation(3) == Catch::Approx(std::numbers::pi / 2));
    REQUIRE(optimal_rotation(5) == Catch::Approx(std::numbers::pi / 2));
}

TEST_CASE("invalid constellation orders throw") {
    REQUIRE_THROWS_AS(mpsk(1), std::invalid_argument);
    REQUIRE_THROWS_AS(mpsk(0), std::invalid_argument);
    REQUIRE_THROWS_AS(optimal_rotation(1), std::invalid_argument);
    Constellation c = mpsk(6);  // not a power of two
    REQUIRE_THROWS_AS(c.bits_per_symbol(), std::domain_error);
}

TEST_CASE("gray code round trips and neighbors differ in one bit") {
    for (unsigned v = 0; v < 64; ++v) REQUIRE(gray_decode(gray_encode(v)) == v);
    for (unsigned v = 0; v + 1 < 64; ++v) {
        const unsigned diff = gray_encode(v) ^ gray_encode(v + 1);
        REQUIRE((diff & (diff - 1)) == 0);  // power of two: single bit
        REQUIRE(diff != 0);
    }
}

TEST_CASE("map_bits and demap are inverse for M in {2,4,8}") {
    for (int m : {2, 4, 8}) {
        const Constellation c = mpsk(m, 0.17);
        const int b = c.bits_per_symbol();
        for (unsigned v = 0; v < static_cast<unsigned>(m); ++v) {
            std::vector<int> bits(b);
            for (int i = 0; i < b; ++i) bits[i] = (v >> (b - 1 - i)) & 1;
            REQUIRE(demap(map_bits(bits, c), c) == bits);
        }
    }
}

TEST_CASE("adjacent constellation points decode to bit groups differing in one bit") {
    const Constellation c = mpsk(8);
    for (int k = 0; k < 8; ++k) {
        const auto a = demap(c.points[k], c);
        const auto b = demap(c.points[(k + 1) % 8], c);
        int diff = 0;
        for (size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
        REQUIRE(diff == 1);
    }
}

TEST_CASE("map_bits rejects wrong group length") {
    const Constellation c = mpsk(4);
    REQUIRE_THROWS_AS(map_bits({1}, c), std::invalid_argument);
    REQUIRE_THROWS_AS(map_bits({1, 0, 1}, c), std::invalid_argument);
}
