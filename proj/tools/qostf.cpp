// qostf: build the codes, run FER sweeps, post-process curves.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qostf/harness.hpp"

namespace {

using namespace qostf;

int cmd_sweep(const std::string& config_path, const std::string& out_path, bool quiet) {
    const ExperimentConfig cfg = parse_config_file(config_path);
    const FerCurve curve = run_sweep(cfg, [&](const FerPoint& p) {
        if (!quiet)
            std::cerr << "snr " << p.snr_db << " dB: fer " << p.fer << " (" << p.errors << "/"
                      << p.frames << ")\n";
    });
    if (out_path.empty() || out_path == "-") {
        write_fer_csv(curve, std::cout);
    } else {
        write_fer_csv(curve, out_path);
        if (!quiet) std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& csv_a, const std::string& csv_b, double target_fer) {
    const FerCurve a = read_fer_csv_file(csv_a);
    const FerCurve b = read_fer_csv_file(csv_b);
    const double gap = compare_curves(a, b, target_fer);
    std::cout << "snr_a_db " << snr_at_fer(a, target_fer) << "\n";
    std::cout << "snr_b_db " << snr_at_fer(b, target_fer) << "\n";
    std::cout << "gap_db " << gap << "\n";
    return 0;
}

int cmd_slope(const std::string& csv_path, double fer_min, double fer_max) {
    FerCurve curve = read_fer_csv_file(csv_path);
    // restrict to the requested FER band, then reuse the fitter
    FerCurve band;
    for (const FerPoint& p : curve.points)
        if (p.fer >= fer_min && p.fer <= fer_max) band.points.push_back(p);
    const double d = diversity_slope(band, 1.0);
    std::cout << "decades_per_10db " << d << "\n";
    std::cout << "implied_diversity_order " << d << "\n";
    return 0;
}

int cmd_design(const std::string& out_path) {
    const FamilyPair fams = expand_constellation(mpsk(4));
    const PartitionTree tree_a = partition(fams.a, 2);
    const PartitionTree tree_b = partition(fams.b, 2);
    const Trellis tr = build_trellis(partition(fams.a, 1), partition(fams.b, 1), fams.a, fams.b);
    const PathMetrics pm = min_path_metrics(tr, 8);
    std::ostringstream out;
    out << partition_to_text(tree_a) << "\n" << partition_to_text(tree_b) << "\n"
        << trellis_to_text(tr) << "\n";
    out << "min_delta_h " << pm.min_delta_h << "\n";
    out << "min_event_cgd_mpd " << pm.min_event_metric << "\n";
    out << "min_parallel_cgd_mpd " << pm.min_parallel_metric << "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
        f << out.str();
    }
    return 0;
}

int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_path) {
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> pts;  // (snr, log10 fer)
    };
    std::vector<Series> series;
    double x0 = 1e30, x1 = -1e30, y0 = 0.0, y1 = -1e30;
    for (const auto& path : csv_paths) {
        const FerCurve c = read_fer_csv_file(path);
        Series s;
        s.name = path;
        for (const FerPoint& p : c.points)
            if (p.fer > 0.0) {
                s.pts.emplace_back(p.snr_db, std::log10(p.fer));
                x0 = std::min(x0, p.snr_db);
                x1 = std::max(x1, p.snr_db);
                y1 = std::min(y1, std::log10(p.fer));
            }
        series.push_back(std::move(s));
    }
    if (series.empty()) throw std::runtime_error("plot: no input curves");
    if (x1 <= x0) x1 = x0 + 1.0;
    y1 = std::floor(y1);
    if (y1 >= y0) y1 = y0 - 1.0;
    const double W = 640, H = 480, ml = 60, mr = 20, mt = 20, mb = 50;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return mt + (y0 - y) / (y0 - y1) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (double y = y0; y >= y1 - 1e-9; y -= 1.0) {
        svg << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\"" << W - mr << "\" y2=\""
            << py(y) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\">1e" << static_cast<int>(y) << "</text>\n";
    }
    for (double x = std::ceil(x0 / 2) * 2; x <= x1 + 1e-9; x += 2.0) {
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << mt << "\" x2=\"" << px(x) << "\" y2=\""
            << H - mb << "\" stroke=\"#eee\"/>\n";
        svg << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18
            << "\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
        << "\" transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\" "
        << "text-anchor=\"middle\">FER</text>\n";
    for (size_t i = 0; i < series.size(); ++i) {
        const char* col = colors[i % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].pts) svg << px(x) << ',' << py(y) << ' ';
        svg << "\"/>\n";
        for (const auto& [x, y] : series[i].pts)
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col
                << "\"/>\n";
        svg << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 16 * i << "\" fill=\"" << col
            << "\">" << series[i].name << "</text>\n";
    }
    svg << "</svg>\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << svg.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
        f << svg.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-orthogonal space-time-frequency code simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_a, csv_b;
    std::vector<std::string> csv_paths;
    double target_fer = 1e-2, fer_min = 1e-3, fer_max = 1e-1;
    bool quiet = false;

    auto* sweep = app.add_subcommand("sweep", "run an FER sweep from a config file");
    sweep->add_option("config", config_path, "key-value config file")->required();
    sweep->add_option("-o,--out", out_path, "output CSV path (default stdout)");
    sweep->add_flag("-q,--quiet", quiet, "suppress progress output");

    auto* compare = app.add_subcommand("compare", "dB gap between two FER curves");
    compare->add_option("csv_a", csv_a, "first curve CSV")->required();
    compare->add_option("csv_b", csv_b, "second curve CSV")->required();
    compare->add_option("-f,--fer", target_fer, "target FER (default 1e-2)");

    auto* slope = app.add_subcommand("slope", "diversity slope of an FER curve");
    slope->add_option("csv", csv_a, "curve CSV")->required();
    slope->add_option("--fer-min", fer_min, "lower FER bound (default 1e-3)");
    slope->add_option("--fer-max", fer_max, "upper FER bound (default 1e-1)");

    auto* design = app.add_subcommand("design", "emit the partition and trellis report");
    design->add_option("-o,--out", out_path, "output path (default stdout)");

    auto* plot = app.add_subcommand("plot", "render FER curves to SVG");
    plot->add_option("csv", csv_paths, "curve CSVs")->required();
    plot->add_option("-o,--out", out_path, "output SVG path (default stdout)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (sweep->parsed()) return cmd_sweep(config_path, out_path, quiet);
        if (compare->parsed()) return cmd_compare(csv_a, csv_b, target_fer);
        if (slope->parsed()) return cmd_slope(csv_a, fer_min, fer_max);
        if (design->parsed()) return cmd_design(out_path);
        if (plot->parsed()) return cmd_plot(csv_paths, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
