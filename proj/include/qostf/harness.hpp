#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qostf/transceiver.hpp"

namespace qostf {

/// Flat key-value experiment description. Text form: one `key = value` pair
/// per line, '#' comments.
struct ExperimentConfig {
    std::string scheme = "qostfbc-4tx";  // qostfbc-2tx | qostfbc-4tx | qostftc-4state
    int mr = 1;
    double snr_start = 0.0;
    double snr_stop = 20.0;
    double snr_step = 2.0;
    int taps = 4;
    uint64_t seed = 1;
    long stop_errors = 100;
    long max_frames = 200000;
    int n_subcarriers = 64;
    int n_symbols = 4;
};

inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == '=') c = ' ';
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string value;
        if (!(ls >> value))
            throw std::runtime_error("config line " + std::to_string(lineno) + ": missing value");
        try {
            if (key == "scheme") cfg.scheme = value;
            else if (key == "mr") cfg.mr = std::stoi(value);
            else if (key == "snr_start") cfg.snr_start = std::stod(value);
            else if (key == "snr_stop") cfg.snr_stop = std::stod(value);
            else if (key == "snr_step") cfg.snr_step = std::stod(value);
            else if (key == "taps") cfg.taps = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "stop_errors") cfg.stop_errors = std::stol(value);
            else if (key == "max_frames") cfg.max_frames = std::stol(value);
            else if (key == "n_subcarriers") cfg.n_subcarriers = std::stoi(value);
            else if (key == "n_symbols") cfg.n_symbols = std::stoi(value);
            else throw std::runtime_error("config line " + std::to_string(lineno) +
                                          ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": bad value '" +
                                     value + "' for key '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return parse_config(in);
}

inline std::string config_to_string(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "scheme = " << c.scheme << "\n"
        << "mr = " << c.mr << "\n"
        << "snr_start = " << c.snr_start << "\n"
        << "snr_stop = " << c.snr_stop << "\n"
        << "snr_step = " << c.snr_step << "\n"
        << "taps = " << c.taps << "\n"
        << "seed = " << c.seed << "\n"
        << "stop_errors = " << c.stop_errors << "\n"
        << "max_frames = " << c.max_frames << "\n"
        << "n_subcarriers = " << c.n_subcarriers << "\n"
        << "n_symbols = " << c.n_symbols << "\n";
    return out.str();
}

/// Wilson 95% score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(long errors, long frames,
                                                 double z = 1.959963984540054) {
    if (frames <= 0) throw std::invalid_argument("wilson_interval: frames must be positive");
    if (errors < 0 || errors > frames)
        throw std::invalid_argument("wilson_interval: errors out of range");
    const double n = static_cast<double>(frames);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(center - half, 0.0), std::min(center + half, 1.0)};
}

struct FerPoint {
    double snr_db = 0.0;
    long frames = 0;
    long errors = 0;
    double fer = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct FerCurve {
    ExperimentConfig config;
    std::vector<FerPoint> points;
};

/// Scheme wrapper: builds the codec named in the config and runs single
/// frames. All randomness of a frame (data bits, channel taps, noise) comes
/// from one per-frame substream, so reruns and shared-seed comparisons are
/// deterministic.
class Scheme {
public:
    explicit Scheme(const ExperimentConfig& cfg) : cfg_(cfg) {
        const FrameConfig fc{cfg.n_subcarriers, cfg.n_symbols};
        const Constellation base = mpsk(4);
        if (cfg.scheme == "qostfbc-2tx") {
            block2_ = std::make_unique<Block2Codec>(base, fc);
        } else if (cfg.scheme == "qostfbc-4tx") {
            const FamilyPair fams = expand_constellation(base);
            block4_ = std::make_unique<Block4Codec>(fams.a, fc);
        } else if (cfg.scheme == "qostftc-4state") {
            const FamilyPair fams = expand_constellation(base);
            const PartitionTree tree_a = partition(fams.a, 1);
            const PartitionTree tree_b = partition(fams.b, 1);
            trellis_ = std::make_unique<TrellisCodec>(
                build_trellis(tree_a, tree_b, fams.a, fams.b), fc);
        } else {
            throw std::invalid_argument("unknown scheme '" + cfg.scheme + "'");
        }
        pdp_ = uniform_pdp(cfg.taps);
    }

    int n_tx() const {
        return block2_ ? block2_->n_tx() : block4_ ? block4_->n_tx() : trellis_->n_tx();
    }

    size_t frame_bits() const {
        return block2_ ? block2_->frame_bits()
               : block4_ ? block4_->frame_bits()
                         : trellis_->frame_bits();
    }

    /// Bit errors of one frame at noise level n0. frame_id keys the random
    /// substream; draw order is bits, taps, noise.
    long run_frame(uint64_t frame_id, double n0) const {
        FrameRng rng(cfg_.seed, frame_id);
        BitVec bits(frame_bits());
        for (int& b : bits) b = rng.uniform_int(2);
        StfGrid grid;
        if (block2_) grid = block2_->encode(bits);
        else if (block4_) grid = block4_->encode(bits);
        else grid = trellis_->encode(bits);
        const ChannelRealization ch =
            make_channel(pdp_, n_tx(), cfg_.mr, cfg_.n_subcarriers, rng, frame_id);
        const RxTensor y = apply_channel(grid, ch, n0, rng);
        BitVec out;
        if (block2_) out = block2_->decode(y, ch);
        else if (block4_) out = block4_->decode(y, ch);
        else out = trellis_->decode(y, ch);
        long errs = 0;
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i] != out[i]) ++errs;
        return errs;
    }

    const ExperimentConfig& config() const { return cfg_; }
    const TrellisCodec* trellis_codec() const { return trellis_.get(); }
    const Block4Codec* block4_codec() const { return block4_.get(); }

private:
    ExperimentConfig cfg_;
    PowerDelayProfile pdp_;
    std::unique_ptr<Block2Codec> block2_;
    std::unique_ptr<Block4Codec> block4_;
    std::unique_ptr<TrellisCodec> trellis_;
};

inline double snr_db_to_n0(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

using SweepProgressFn = std::function<void(const FerPoint&)>;

/// FER sweep over the config's SNR grid. Each point stops at stop_errors
/// frame errors or max_frames frames. Frame ids encode (SNR index, frame
/// index), so every point and every rerun sees the same channel and noise
/// realizations.
inline FerCurve run_sweep(const ExperimentConfig& cfg, const SweepProgressFn& progress = {}) {
    if (cfg.snr_step <= 0.0) throw std::invalid_argument("run_sweep: snr_step must be positive");
    const Scheme scheme(cfg);
    FerCurve curve;
    curve.config = cfg;
    int si = 0;
    for (double snr = cfg.snr_start; snr <= cfg.snr_stop + 1e-9; snr += cfg.snr_step, ++si) {
        const double n0 = snr_db_to_n0(snr);
        FerPoint pt;
        pt.snr_db = snr;
        for (long k = 0; k < cfg.max_frames && pt.errors < cfg.stop_errors; ++k) {
            const uint64_t frame_id = (static_cast<uint64_t>(si) << 32) | static_cast<uint64_t>(k);
            if (scheme.run_frame(frame_id, n0) > 0) ++pt.errors;
            ++pt.frames;
        }
        pt.fer = static_cast<double>(pt.errors) / static_cast<double>(pt.frames);
        std::tie(pt.ci_low, pt.ci_high) = wilson_interval(pt.errors, pt.frames);
        curve.points.push_back(pt);
        if (progress) progress(pt);
    }
    return curve;
}

inline constexpr const char* kFerCsvVersion = "qostf-fer v1";

inline void write_fer_csv(const FerCurve& curve, std::ostream& out) {
    const ExperimentConfig& c = curve.config;
    out << "# " << kFerCsvVersion << "\n";
    out << "# scheme=" << c.scheme << " mr=" << c.mr << " taps=" << c.taps << " seed=" << c.seed
        << " stop_errors=" << c.stop_errors << " max_frames=" << c.max_frames
        << " n_subcarriers=" << c.n_subcarriers << " n_symbols=" << c.n_symbols << "\n";
    out << "snr_db,frames,errors,fer,ci_low,ci_high\n";
    out << std::setprecision(10);
    for (const FerPoint& p : curve.points)
        out << p.snr_db << ',' << p.frames << ',' << p.errors << ',' << p.fer << ',' << p.ci_low
            << ',' << p.ci_high << "\n";
}

inline void write_fer_csv(const FerCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_fer_csv(curve, out);
}

inline FerCurve read_fer_csv(std::istream& in) {
    FerCurve curve;
    std::string line;
    if (!std::getline(in, line) || line != std::string("# ") + kFerCsvVersion)
        throw std::runtime_error("bad FER CSV: missing version line");
    bool saw_columns = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_columns) {
            if (line != "snr_db,frames,errors,fer,ci_low,ci_high")
                throw std::runtime_error("bad FER CSV: unexpected column header");
            saw_columns = true;
            continue;
        }
        FerPoint p;
        char c;
        std::istringstream ls(line);
        if (!(ls >> p.snr_db >> c >> p.frames >> c >> p.errors >> c >> p.fer >> c >> p.ci_low >>
              c >> p.ci_high))
            throw std::runtime_error("bad FER CSV row: " + line);
        curve.points.push_back(p);
    }
    if (!saw_columns) throw std::runtime_error("bad FER CSV: no column header");
    return curve;
}

inline FerCurve read_fer_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_fer_csv(in);
}

/// SNR (dB) at which the curve crosses the target FER, interpolating linearly
/// in (snr_db, log10 fer). Extrapolates from the nearest segment when the
/// target lies outside the measured range.
inline double snr_at_fer(const FerCurve& curve, double target_fer) {
    if (target_fer <= 0.0) throw std::invalid_argument("snr_at_fer: target must be positive");
    std::vector<std::pair<double, double>> pts;  // (snr, log10 fer)
    for (const FerPoint& p : curve.points)
        if (p.fer > 0.0) pts.emplace_back(p.snr_db, std::log10(p.fer));
    if (pts.size() < 2) throw std::runtime_error("snr_at_fer: need >= 2 nonzero points");
    const double lt = std::log10(target_fer);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto& [x0, y0] = pts[i];
        const auto& [x1, y1] = pts[i + 1];
        const bool brackets = (y0 - lt) * (y1 - lt) <= 0.0;
        const bool last = i + 2 == pts.size();
        if ((brackets || last) && y0 != y1)
            return x0 + (lt - y0) * (x1 - x0) / (y1 - y0);
    }
    throw std::runtime_error("snr_at_fer: degenerate curve");
}

/// dB advantage of curve a over curve b at the target FER (positive when a
/// needs less SNR).
inline double compare_curves(const FerCurve& a, const FerCurve& b, double target_fer) {
    return snr_at_fer(b, target_fer) - snr_at_fer(a, target_fer);
}

/// Least-squares slope of log10 FER versus SNR, reported as decades of FER
/// per 10 dB: an estimate of the effective diversity order. Points above
/// fer_ceiling (waterfall shoulder) and zero-error points are skipped.
inline double diversity_slope(const FerCurve& curve, double fer_ceiling = 0.3) {
    std::vector<std::pair<double, double>> pts;
    for (const FerPoint& p : curve.points)
        if (p.fer > 0.0 && p.fer <= fer_ceiling) pts.emplace_back(p.snr_db, std::log10(p.fer));
    if (pts.size() < 2) throw std::runtime_error("diversity_slope: need >= 2 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -10.0 * slope;
}

}  // namespace qostf
