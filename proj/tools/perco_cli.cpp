// perco: percolation-based object detection from the command line.
//
// Exit codes: 0 success, 2 usage error, 1 runtime or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perco/perco.hpp"

namespace fs = std::filesystem;
using namespace perco;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
    if (!ok)
        throw UsageError(message);
}

void require_probability(double p, const char* flag) {
    require(p >= 0.0 && p <= 1.0, std::string(flag) + " must lie in [0,1]");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_file(out_path, text);
}

struct ImageInput {
    std::string path;
    std::optional<double> tau;
    std::string direction = "geq";

    void add_flags(CLI::App* cmd) {
        cmd->add_option("-i,--input", path, "Input image: PBM (P1/P4) or PGM (P2/P5)")->required();
        cmd->add_option("--tau", tau,
                        "Grey threshold in [0,1]; required for PGM input. Pixels with "
                        "intensity >= tau are active under --direction geq (ties are active)");
        cmd->add_option("--direction", direction, "Active side of the threshold: geq or lt")
            ->check(CLI::IsMember({"geq", "lt"}))
            ->capture_default_str();
    }

    // Format is picked from the magic number.
    BinaryImage load() const {
        const auto bytes = read_file(path);
        const bool gray = bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5');
        if (!gray) {
            require(!tau.has_value(), "--tau only applies to PGM input");
            try {
                return load_binary(bytes);
            } catch (const ParseError& e) {
                throw ParseError(path + ": " + e.what(), e.offset());
            }
        }
        require(tau.has_value(), "PGM input " + path + " needs --tau");
        require_probability(*tau, "--tau");
        try {
            return threshold(load_gray(bytes), *tau,
                             direction == "lt" ? ThresholdDirection::ActiveIfLt : ThresholdDirection::ActiveIfGeq);
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what(), e.offset());
        }
    }

    void validate() const {
        if (tau)
            require_probability(*tau, "--tau");
    }
};

Topology topology_flag(int value) {
    require(value == 4 || value == 6 || value == 8, "--topology must be 4, 6 or 8");
    return parse_topology(std::to_string(value));
}

std::string probability_tag(double p) { return format_double(p); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percolation-based detection of objects in noisy images"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "perco 0.1.0");

    // percolate
    struct {
        std::size_t rows = 0, cols = 0;
        double p = 0.5;
        std::uint64_t seed = 0;
        std::string out;
    } perc;
    auto* percolate = app.add_subcommand("percolate", "Write a site-percolation image as plain PBM");
    percolate->add_option("--rows", perc.rows, "Image rows")->required();
    percolate->add_option("--cols", perc.cols, "Image columns")->required();
    percolate->add_option("--p", perc.p, "Probability that a pixel is active")->capture_default_str();
    percolate->add_option("--seed", perc.seed, "Random seed")->capture_default_str();
    percolate->add_option("-o,--output", perc.out, "Output PBM path")->required();

    // threshold
    ImageInput thr_in;
    std::string thr_out;
    auto* thresh = app.add_subcommand("threshold", "Threshold a PGM image into a plain PBM");
    thr_in.add_flags(thresh);
    thresh->add_option("-o,--output", thr_out, "Output PBM path")->required();

    // label
    ImageInput lab_in;
    int lab_topology = 4;
    std::string lab_out, lab_mask;
    auto* label = app.add_subcommand("label", "Report the clusters of a binary or thresholded image as JSON");
    lab_in.add_flags(label);
    label->add_option("--topology", lab_topology, "Neighborhood: 4, 6 or 8")->capture_default_str();
    label->add_option("-o,--output", lab_out, "Report path (default: stdout)");
    label->add_option("--mask", lab_mask, "Write the largest cluster as a PBM mask");

    // simulate
    struct {
        std::size_t rows = 55, cols = 55, runs = 1000;
        int topology = 6;
        std::vector<double> probs;
        std::uint64_t seed = 0;
        unsigned threads = 0;
        std::string out_dir = ".";
        bool paper_defaults = false;
        bool fresh = false;
    } sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Estimate the null CDF of the largest cluster size; one k,cdf CSV and JSON sidecar per --p");
    auto* sim_rows = simulate->add_option("--rows", sim.rows, "Lattice rows")->capture_default_str();
    auto* sim_cols = simulate->add_option("--cols", sim.cols, "Lattice columns")->capture_default_str();
    auto* sim_topo = simulate->add_option("--topology", sim.topology, "Neighborhood: 4, 6 or 8")->capture_default_str();
    auto* sim_p = simulate->add_option("--p", sim.probs, "Occupation probabilities (repeatable)");
    auto* sim_runs = simulate->add_option("--runs", sim.runs, "Monte Carlo runs per probability")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master seed; run r uses stream (seed, r)")->capture_default_str();
    simulate->add_option("--threads", sim.threads, "Worker threads, 0 = all cores; output does not depend on it")
        ->capture_default_str();
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();
    simulate->add_flag("--paper-defaults", sim.paper_defaults,
                       "55x55 triangular lattice, 1000 runs, p in {0.1,0.2,0.3,0.4,0.42,...,0.58,0.6,0.7,0.8,0.9}; "
                       "explicit flags still override");
    simulate->add_flag("--fresh-ensembles", sim.fresh, "Simulate new runs for every probability instead of reusing one ensemble");

    // simulate-inhom
    struct {
        std::size_t rows = 55, cols = 55, runs = 100;
        int topology = 6;
        std::size_t top = 19, left = 19, height = 10, width = 10;
        double p_in = 0.6, p_out = 0.4;
        std::uint64_t seed = 0;
        unsigned threads = 0;
        std::string out = "cdf_inhom.csv";
        bool paper_defaults = false;
    } inh;
    auto* simulate_inhom = app.add_subcommand(
        "simulate-inhom", "Estimate the largest-cluster CDF with probability p-in on a rectangle and p-out elsewhere");
    auto* inh_rows = simulate_inhom->add_option("--rows", inh.rows, "Lattice rows")->capture_default_str();
    auto* inh_cols = simulate_inhom->add_option("--cols", inh.cols, "Lattice columns")->capture_default_str();
    auto* inh_topo = simulate_inhom->add_option("--topology", inh.topology, "Neighborhood: 4, 6 or 8")->capture_default_str();
    auto* inh_top = simulate_inhom->add_option("--sub-top", inh.top, "Subgrid top row (0-based)")->capture_default_str();
    auto* inh_left = simulate_inhom->add_option("--sub-left", inh.left, "Subgrid left column (0-based)")->capture_default_str();
    auto* inh_h = simulate_inhom->add_option("--sub-height", inh.height, "Subgrid height")->capture_default_str();
    auto* inh_w = simulate_inhom->add_option("--sub-width", inh.width, "Subgrid width")->capture_default_str();
    auto* inh_pin = simulate_inhom->add_option("--p-in", inh.p_in, "Occupation probability inside")->capture_default_str();
    auto* inh_pout = simulate_inhom->add_option("--p-out", inh.p_out, "Occupation probability outside")->capture_default_str();
    auto* inh_runs = simulate_inhom->add_option("--runs", inh.runs, "Monte Carlo runs")->capture_default_str();
    simulate_inhom->add_option("--seed", inh.seed, "Master seed")->capture_default_str();
    simulate_inhom->add_option("--threads", inh.threads, "Worker threads, 0 = all cores")->capture_default_str();
    simulate_inhom->add_option("-o,--output", inh.out, "Output CSV; metadata goes next to it as .json")->capture_default_str();
    simulate_inhom->add_flag("--paper-defaults", inh.paper_defaults,
                             "55x55 triangular lattice, 10x10 subgrid at 0-based (19,19), p-in 0.6, p-out 0.4, 100 runs");

    // detect
    ImageInput det_in;
    std::string det_null, det_out;
    double det_alpha = 0.05;
    auto* detect_cmd = app.add_subcommand("detect", "Test an image against a simulated null distribution");
    det_in.add_flags(detect_cmd);
    detect_cmd->add_option("--null", det_null, "Null distribution CSV (with its .json sidecar)")->required();
    detect_cmd->add_option("--alpha", det_alpha, "Significance level in (0,1]")->capture_default_str();
    detect_cmd->add_option("-o,--output", det_out, "Result path (default: stdout)");

    // power
    struct {
        std::size_t rows = 55, cols = 55, runs = 100;
        int topology = 6;
        std::size_t top = 19, left = 19, height = 10, width = 10;
        double p_in = 0.6, p_out = 0.4, alpha = 0.05;
        std::uint64_t seed = 0;
        unsigned threads = 0;
        std::string out;
    } pow;
    auto* power = app.add_subcommand("power", "Estimate the type II error against a brighter rectangle");
    power->add_option("--rows", pow.rows, "Lattice rows")->capture_default_str();
    power->add_option("--cols", pow.cols, "Lattice columns")->capture_default_str();
    power->add_option("--topology", pow.topology, "Neighborhood: 4, 6 or 8")->capture_default_str();
    power->add_option("--sub-top", pow.top, "Subgrid top row (0-based)")->capture_default_str();
    power->add_option("--sub-left", pow.left, "Subgrid left column (0-based)")->capture_default_str();
    power->add_option("--sub-height", pow.height, "Subgrid height")->capture_default_str();
    power->add_option("--sub-width", pow.width, "Subgrid width")->capture_default_str();
    power->add_option("--p-in", pow.p_in, "Occupation probability inside")->capture_default_str();
    power->add_option("--p-out", pow.p_out, "Occupation probability outside (the null)")->capture_default_str();
    power->add_option("--alpha", pow.alpha, "Significance level in (0,1]")->capture_default_str();
    power->add_option("--runs", pow.runs, "Monte Carlo runs for null and alternative")->capture_default_str();
    power->add_option("--seed", pow.seed, "Master seed")->capture_default_str();
    power->add_option("--threads", pow.threads, "Worker threads, 0 = all cores")->capture_default_str();
    power->add_option("-o,--output", pow.out, "Result path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*percolate) {
            require(perc.rows > 0 && perc.cols > 0, "--rows and --cols must be positive");
            require_probability(perc.p, "--p");
            RngStream rng(perc.seed, 0);
            write_file(perc.out, save_binary(generate_percolation(perc.p, perc.rows, perc.cols, rng)));
        } else if (*thresh) {
            require(thr_in.tau.has_value(), "threshold needs --tau");
            thr_in.validate();
            write_file(thr_out, save_binary(thr_in.load()));
        } else if (*label) {
            const auto topo = topology_flag(lab_topology);
            lab_in.validate();
            const auto img = lab_in.load();
            const Lattice lat(img.rows(), img.cols(), topo);
            const auto lab = label_components(img, lat);
            std::map<std::uint32_t, std::size_t> histogram;
            for (auto s : lab.cluster_sizes)
                ++histogram[s];
            nlohmann::ordered_json report;
            report["rows"] = img.rows();
            report["cols"] = img.cols();
            report["topology"] = lab_topology;
            report["num_clusters"] = lab.num_clusters();
            report["largest"] = lab.largest;
            report["cluster_sizes"] = nlohmann::ordered_json::object();
            for (const auto& [size, count] : histogram)
                report["cluster_sizes"][std::to_string(size)] = count;
            emit(report.dump(2) + "\n", lab_out);
            if (!lab_mask.empty()) {
                std::vector<std::uint8_t> mask(img.size(), 0);
                if (lab.largest > 0) {
                    const auto it = std::find(lab.cluster_sizes.begin(), lab.cluster_sizes.end(), lab.largest);
                    const auto target = static_cast<std::uint32_t>(it - lab.cluster_sizes.begin() + 1);
                    for (std::size_t s = 0; s < mask.size(); ++s)
                        mask[s] = lab.labels[s] == target;
                }
                write_file(lab_mask, save_binary(BinaryImage(img.rows(), img.cols(), std::move(mask))));
            }
        } else if (*simulate) {
            if (sim.paper_defaults) {
                if (!sim_rows->count())
                    sim.rows = 55;
                if (!sim_cols->count())
                    sim.cols = 55;
                if (!sim_topo->count())
                    sim.topology = 6;
                if (!sim_runs->count())
                    sim.runs = 1000;
                if (!sim_p->count())
                    sim.probs = reference_sweep_probabilities();
            }
            const auto topo = topology_flag(sim.topology);
            require(sim.rows > 0 && sim.cols > 0, "--rows and --cols must be positive");
            require(sim.runs > 0, "--runs must be positive");
            require(!sim.probs.empty(), "give at least one --p (or --paper-defaults)");
            for (double p : sim.probs)
                require_probability(p, "--p");

            const Lattice lat(sim.rows, sim.cols, topo);
            SweepOptions options;
            options.threads = sim.threads;
            options.reuse_curves = !sim.fresh;
            const auto estimates = sweep(lat, sim.probs, sim.runs, sim.seed, options);
            fs::create_directories(sim.out_dir);
            for (std::size_t j = 0; j < estimates.size(); ++j) {
                char index[16];
                std::snprintf(index, sizeof index, "%02zu", j);
                const auto path = fs::path(sim.out_dir) / ("cdf_" + std::string(index) + "_p" +
                                                           probability_tag(sim.probs[j]) + ".csv");
                save_cdf(estimates[j], path);
                std::cout << path.string() << "\n";
            }
        } else if (*simulate_inhom) {
            if (inh.paper_defaults) {
                // Flags given explicitly win over the bundle.
                const std::pair<CLI::Option*, std::function<void()>> bundle[] = {
                    {inh_rows, [&] { inh.rows = 55; }},   {inh_cols, [&] { inh.cols = 55; }},
                    {inh_topo, [&] { inh.topology = 6; }}, {inh_top, [&] { inh.top = 19; }},
                    {inh_left, [&] { inh.left = 19; }},    {inh_h, [&] { inh.height = 10; }},
                    {inh_w, [&] { inh.width = 10; }},      {inh_pin, [&] { inh.p_in = 0.6; }},
                    {inh_pout, [&] { inh.p_out = 0.4; }},  {inh_runs, [&] { inh.runs = 100; }},
                };
                for (const auto& [opt, apply] : bundle)
                    if (!opt->count())
                        apply();
            }
            const auto topo = topology_flag(inh.topology);
            require(inh.rows > 0 && inh.cols > 0, "--rows and --cols must be positive");
            require(inh.runs > 0, "--runs must be positive");
            require_probability(inh.p_in, "--p-in");
            require_probability(inh.p_out, "--p-out");
            const Lattice lat(inh.rows, inh.cols, topo);
            std::optional<Subgrid> sub;
            try {
                sub = rect_subgrid(lat, inh.top, inh.left, inh.height, inh.width);
            } catch (const InvalidArgument& e) {
                throw UsageError(e.what());
            }
            SimulationOptions options;
            options.threads = inh.threads;
            const auto est = estimate_cdf_inhomogeneous(lat, *sub, inh.p_in, inh.p_out, inh.runs, inh.seed, options);
            if (const auto parent = fs::path(inh.out).parent_path(); !parent.empty())
                fs::create_directories(parent);
            save_cdf(est, inh.out);
            std::cout << inh.out << "\n";
        } else if (*detect_cmd) {
            require(det_alpha > 0.0 && det_alpha <= 1.0, "--alpha must lie in (0,1]");
            det_in.validate();
            const NullDistribution null(load_cdf(det_null));
            const auto img = det_in.load();
            const Lattice lat(img.rows(), img.cols(), null.provenance().topology);
            emit(detection_to_json(detect(img, lat, null, det_alpha)), det_out);
        } else if (*power) {
            const auto topo = topology_flag(pow.topology);
            require(pow.rows > 0 && pow.cols > 0, "--rows and --cols must be positive");
            require(pow.runs > 0, "--runs must be positive");
            require_probability(pow.p_in, "--p-in");
            require_probability(pow.p_out, "--p-out");
            require(pow.p_in >= pow.p_out, "--p-in must be at least --p-out");
            require(pow.alpha > 0.0 && pow.alpha <= 1.0, "--alpha must lie in (0,1]");
            const Lattice lat(pow.rows, pow.cols, topo);
            std::optional<Subgrid> sub;
            try {
                sub = rect_subgrid(lat, pow.top, pow.left, pow.height, pow.width);
            } catch (const InvalidArgument& e) {
                throw UsageError(e.what());
            }
            SimulationOptions options;
            options.threads = pow.threads;
            const auto res = power_estimate(lat, *sub, pow.p_in, pow.p_out, pow.alpha, pow.runs, pow.seed, options);
            nlohmann::ordered_json j;
            j["beta"] = res.beta;
            j["power"] = res.power;
            j["critical_value"] = res.critical_value;
            j["achieved_size"] = res.achieved_size;
            j["never_rejects"] = res.never_rejects;
            j["alpha"] = pow.alpha;
            emit(j.dump(2) + "\n", pow.out);
            if (res.never_rejects)
                std::cerr << "warning: no cluster size is significant at this alpha; beta is 1\n";
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
