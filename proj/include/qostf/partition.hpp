#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qostf/codebook.hpp"
#include "qostf/metrics.hpp"

namespace qostf {

/// Constellation expansion for the trellis code: two codeword families with
/// mirrored rotation patterns. Slots {1,2} and {3,4} carry complementary
/// angles (0 and phi) so the coupled column pairs of the quasi-orthogonal
/// structure never share a rotation; this is what makes every distinct pair
/// within a family full rank.
struct FamilyPair {
    CodewordFamily a;
    CodewordFamily b;
};

inline FamilyPair expand_constellation(const Constellation& base) {
    if (base.order != 4)
        throw std::invalid_argument("expand_constellation: QPSK base required");
    const double phi = optimal_rotation(base.order);
    return {make_family(base, phi, false), make_family(base, phi, true)};
}

constexpr double kSingletonMetric = std::numeric_limits<double>::infinity();

/// Binary-refinement partition of a set of item ids under a pairwise metric.
/// levels.front() is the unsplit set; each subsequent level splits every
/// subset in two.
struct PartitionTree {
    std::vector<std::vector<std::vector<int>>> levels;
    std::vector<double> level_min_metric;  // min intra-subset pairwise metric per level
};

using PairMetricFn = std::function<double(int, int)>;

namespace detail {

inline double min_intra_metric(const std::vector<int>& subset, const PairMetricFn& metric) {
    double m = kSingletonMetric;
    for (size_t i = 0; i < subset.size(); ++i)
        for (size_t j = i + 1; j < subset.size(); ++j)
            m = std::min(m, metric(subset[i], subset[j]));
    return m;
}

/// Optimal balanced split by exhaustive enumeration; the first subset keeps
/// the lowest id so ties break deterministically.
inline std::pair<std::vector<int>, std::vector<int>> split_exhaustive(
    const std::vector<int>& set, const PairMetricFn& metric) {
    const int n = static_cast<int>(set.size());
    const int half = n / 2;
    // enumerate combinations of the remaining n-1 items, element 0 always in A
    std::vector<int> idx(half - 1);
    for (int i = 0; i < half - 1; ++i) idx[i] = i + 1;
    double best = -1.0;
    std::vector<int> best_a;
    while (true) {
        std::vector<int> a{set[0]}, b;
        std::vector<bool> in_a(n, false);
        in_a[0] = true;
        for (int i : idx) {
            a.push_back(set[i]);
            in_a[i] = true;
        }
        for (int i = 0; i < n; ++i)
            if (!in_a[i]) b.push_back(set[i]);
        const double m = std::min(min_intra_metric(a, metric), min_intra_metric(b, metric));
        if (m > best) {
            best = m;
            best_a = a;
        }
        // next combination
        int k = half - 2;
        while (k >= 0 && idx[k] == n - (half - 1) + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < half - 1; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::vector<int> a = best_a, b;
    for (int v : set)
        if (std::find(a.begin(), a.end(), v) == a.end()) b.push_back(v);
    return {a, b};
}

/// Greedy split for larger sets: separate the closest pair, then assign items
/// in id order to whichever side keeps the larger minimum, preferring the
/// emptier side on ties.
inline std::pair<std::vector<int>, std::vector<int>> split_greedy(
    const std::vector<int>& set, const PairMetricFn& metric) {
    const int n = static_cast<int>(set.size());
    int pi = 0, pj = 1;
    double worst = kSingletonMetric;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double m = metric(set[i], set[j]);
            if (m < worst) {
                worst = m;
                pi = i;
                pj = j;
            }
        }
    std::vector<int> a{set[pi]}, b{set[pj]};
    const size_t cap = (set.size() + 1) / 2;
    for (int i = 0; i < n; ++i) {
        if (i == pi || i == pj) continue;
        const int v = set[i];
        double ma = kSingletonMetric, mb = kSingletonMetric;
        for (int w : a) ma = std::min(ma, metric(v, w));
        for (int w : b) mb = std::min(mb, metric(v, w));
        const bool to_a = a.size() >= cap ? false
                          : b.size() >= cap ? true
                          : ma > mb || (ma == mb && a.size() <= b.size());
        (to_a ? a : b).push_back(v);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (b.front() < a.front()) std::swap(a, b);
    return {a, b};
}

}  // namespace detail

/// Build a binary partition tree over `ids`. Splits maximize the minimum
/// intra-subset metric, exhaustively for sets of at most 16 items and greedily
/// above that.
inline PartitionTree partition_set(std::vector<int> ids, const PairMetricFn& metric,
                                   int levels) {
    if (ids.empty())
        throw std::invalid_argument("partition_set: empty family");
    if (levels < 1)
        throw std::invalid_argument("partition_set: levels must be >= 1");
    std::sort(ids.begin(), ids.end());
    PartitionTree tree;
    tree.levels.push_back({ids});
    tree.level_min_metric.push_back(detail::min_intra_metric(ids, metric));
    for (int lv = 1; lv <= levels; ++lv) {
        std::vector<std::vector<int>> next;
        for (const auto& subset : tree.levels.back()) {
            if (subset.size() <= 1) {
                next.push_back(subset);
                continue;
            }
            auto [a, b] = subset.size() <= 16 ? detail::split_exhaustive(subset, metric)
                                              : detail::split_greedy(subset, metric);
            next.push_back(std::move(a));
            next.push_back(std::move(b));
        }
        double m = kSingletonMetric;
        for (const auto& s : next) m = std::min(m, detail::min_intra_metric(s, metric));
        tree.levels.push_back(std::move(next));
        tree.level_min_metric.push_back(m);
    }
    return tree;
}

/// CGD*MPD between the two codewords that differ only at `slot`, holding all
/// other slots at pair id 0.
inline double pair_point_metric(const CodewordFamily& family, int slot, int id_a, int id_b) {
    std::array<int, 4> base{0, 0, 0, 0};
    std::array<int, 4> pa = base, pb = base;
    pa[slot] = id_a;
    pb[slot] = id_b;
    const StfCodeword ca = family.codeword(pa);
    const StfCodeword cb = family.codeword(pb);
    const PairwiseMetrics m = pairwise_metrics({ca}, {cb});
    return m.cgd * m.mpd;
}

/// Set partitioning of one family's 16-point pair alphabet (the per-slot
/// (x, x~) value set). The metric is slot- and rotation-invariant, so slot 0
/// stands in for all four.
inline PartitionTree partition(const CodewordFamily& family, int levels) {
    const int n = family.pair_alphabet_size();
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    // memoized: the split search evaluates each pair many times
    std::vector<double> table(static_cast<size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            table[static_cast<size_t>(a) * n + b] = table[static_cast<size_t>(b) * n + a] =
                pair_point_metric(family, 0, a, b);
    auto metric = [table = std::move(table), n](int a, int b) {
        return table[static_cast<size_t>(a) * n + b];
    };
    return partition_set(ids, metric, levels);
}

}  // namespace qostf
