#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qostf {

using cplx = std::complex<double>;

/// Unit-energy M-PSK constellation, optionally rotated.
/// Point k is exp(i(2*pi*k/M + rotation)); ordering is fixed by k.
struct Constellation {
    int order = 0;
    double rotation = 0.0;
    std::vector<cplx> points;

    int bits_per_symbol() const {
        int b = 0;
        while ((1 << b) < order) ++b;
        if ((1 << b) != order)
            throw std::domain_error("constellation order is not a power of 2");
        return b;
    }
};

inline Constellation mpsk(int order, double rotation = 0.0) {
    if (order < 2)
        throw std::invalid_argument("mpsk: order must be >= 2");
    Constellation c;
    c.order = order;
    c.rotation = rotation;
    c.points.reserve(order);
    for (int k = 0; k < order; ++k) {
        const double phase = 2.0 * std::numbers::pi * k / order + rotation;
        c.points.emplace_back(std::cos(phase), std::sin(phase));
    }
    return c;
}

/// Rotation angle maximizing the coding gain of the rotated-half construction:
/// pi/M for even M, pi/2 for odd M.
inline double optimal_rotation(int order) {
    if (order < 2)
        throw std::invalid_argument("optimal_rotation: order must be >= 2");
    return (order % 2 == 0) ? std::numbers::pi / order : std::numbers::pi / 2.0;
}

inline unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

inline unsigned gray_decode(unsigned g) {
    unsigned v = 0;
    for (; g; g >>= 1) v ^= g;
    return v;
}

/// Gray-coded bit group -> constellation point. bits[0] is the MSB.
inline cplx map_bits(const std::vector<int>& bits, const Constellation& c) {
    const int b = c.bits_per_symbol();
    if (static_cast<int>(bits.size()) != b)
        throw std::invalid_argument("map_bits: bit group length != log2(M)");
    unsigned g = 0;
    for (int bit : bits) g = (g << 1) | (bit & 1);
    return c.points[gray_decode(g)];
}

/// Inverse of map_bits by nearest-point search.
inline std::vector<int> demap(cplx s, const Constellation& c) {
    const int b = c.bits_per_symbol();
    int best = 0;
    double best_d = std::norm(s - c.points[0]);
    for (int k = 1; k < c.order; ++k) {
        const double d = std::norm(s - c.points[k]);
        if (d < best_d) { best_d = d; best = k; }
    }
    const unsigned g = gray_encode(static_cast<unsigned>(best));
    std::vector<int> bits(b);
    for (int i = 0; i < b; ++i) bits[i] = (g >> (b - 1 - i)) & 1;
    return bits;
}

}  // namespace qostf
