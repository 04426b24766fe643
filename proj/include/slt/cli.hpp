#pragma once

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slt/harness.hpp"

namespace slt::cli {

namespace detail {

inline std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Rebuilds the Architecture of a stored cell id "<dataset>_<arch>_...".
inline std::optional<Architecture> cell_architecture(const std::string& cell) {
    const auto p1 = cell.find('_');
    if (p1 == std::string::npos) return std::nullopt;
    const auto p2 = cell.find('_', p1 + 1);
    if (p2 == std::string::npos) return std::nullopt;
    const std::string dataset = cell.substr(0, p1);
    const std::string arch = cell.substr(p1 + 1, p2 - p1 - 1);
    int inputs = 2, classes = 2;
    if (dataset.rfind("digits", 0) == 0) {
        inputs = 64;
        classes = std::atoi(dataset.c_str() + 6);
    } else if (dataset.rfind("blobs", 0) == 0) {
        classes = std::atoi(dataset.c_str() + 5);
    } else if (dataset != "moons" && dataset != "circles") {
        return std::nullopt;
    }
    try {
        if (arch.size() == 1) return lettered_architecture(arch[0], inputs, classes);
        std::string widths = arch;
        std::replace(widths.begin(), widths.end(), 'x', ',');
        return Architecture::parse(widths);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

struct DatasetFlags {
    std::string dataset = "moons";
    std::size_t n = 66000;
    double noise = 0.07;
    double factor = 0.8;
    int classes = 0; // 0 = dataset default
    std::size_t per_cluster = 1250;
    double test_fraction = 0.25;
    std::uint64_t data_seed = 42;
    std::string digits_csv;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dataset", dataset, "Dataset: moons|circles|digits|blobs")
            ->check(CLI::IsMember({"moons", "circles", "digits", "blobs"}));
        cmd->add_option("--n", n, "Sample count for moons/circles");
        cmd->add_option("--noise", noise, "Gaussian noise sigma for moons/circles");
        cmd->add_option("--factor", factor, "Inner-circle radius ratio (circles)");
        cmd->add_option("--classes", classes,
                        "Class count: digits label subset 0..k-1, blobs cluster count");
        cmd->add_option("--per-cluster", per_cluster, "Points per blob cluster");
        cmd->add_option("--test-fraction", test_fraction, "Held-out fraction");
        cmd->add_option("--data-seed", data_seed, "Dataset generation/split seed");
        cmd->add_option("--digits-csv", digits_csv,
                        "Digits CSV path (default $SLT_DATA_DIR/digits.csv or data/digits.csv)");
    }

    DatasetSpec to_spec() const {
        DatasetSpec d;
        if (dataset == "moons") {
            d = DatasetSpec::moons();
            d.n = n;
            d.noise = noise;
        } else if (dataset == "circles") {
            d = DatasetSpec::circles();
            d.n = n;
            d.noise = noise;
            d.factor = factor;
        } else if (dataset == "digits") {
            std::optional<std::vector<int>> subset;
            if (classes > 0 && classes < 10) {
                std::vector<int> s;
                for (int c = 0; c < classes; ++c) s.push_back(c);
                subset = std::move(s);
            }
            d = DatasetSpec::digits(subset, digits_csv);
        } else if (dataset == "blobs") {
            d = DatasetSpec::blobs(classes > 0 ? classes : 10);
            d.per_cluster = per_cluster;
        } else {
            throw CLI::ValidationError("--dataset", "unknown dataset " + dataset);
        }
        d.test_fraction = test_fraction;
        d.data_seed = data_seed;
        return d;
    }
};

struct ArchFlags {
    std::string arch = "B";
    std::string layers;

    void attach(CLI::App* cmd) {
        cmd->add_option("--arch", arch, "Architecture id A|B|C|D");
        cmd->add_option("--layers", layers, "Explicit layer widths, e.g. 2,75,2");
    }

    std::string resolve(const DatasetSpec& d) const {
        if (!layers.empty()) {
            std::string id = layers;
            std::replace(id.begin(), id.end(), ',', 'x');
            return id;
        }
        if (d.kind == DatasetSpec::Kind::Blobs)
            return "2x100x" + std::to_string(d.n_classes());
        if (arch.size() != 1 || arch[0] < 'A' || arch[0] > 'D')
            throw CLI::ValidationError("--arch", "invalid architecture id '" + arch +
                                                     "' (expected A, B, C, or D)");
        return arch;
    }
};

struct GaFlags {
    GAConfig ga;
    double adaptive_bound = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pop-size", ga.pop_size, "Population size N");
        cmd->add_option("--rec-rate", ga.rec_rate, "First-parent selection chance");
        cmd->add_option("--par-rate", ga.par_rate, "Second-parent pool fraction");
        cmd->add_option("--mut-rate", ga.mut_rate, "Mutation chance per survivor");
        cmd->add_option("--mig-rate", ga.mig_rate, "Migrant fraction per generation");
        cmd->add_option("--min-generations", ga.min_generations, "Minimum generations");
        cmd->add_option("--max-generations", ga.max_generations,
                        "Generation cap (adaptive-bound mode)");
        cmd->add_option("--stagnation-window", ga.stagnation_window,
                        "Generations without improvement before stopping");
        cmd->add_option("--subsample", ga.fitness_subsample,
                        "Fitness subsample size (0 = full train set)");
        cmd->add_option("--adaptive-bound", adaptive_bound,
                        "Enable the adaptive accuracy bound with this initial value")
            ->expected(0, 1)
            ->default_str("0.85");
    }

    bool adaptive_requested(const CLI::App* cmd) const {
        return cmd->count("--adaptive-bound") > 0;
    }

    GAConfig to_config(int n_classes, bool adaptive) const {
        GAConfig cfg = ga;
        if (adaptive) {
            const double initial = adaptive_bound > 0.0 ? adaptive_bound : 0.85;
            cfg.adaptive_bound = AdaptiveBound{initial, 1.0 / n_classes, 5.0, 1000};
        }
        return cfg;
    }
};

inline void add_config_file(CLI::App* cmd) {
    // Documentation only: --config is consumed before CLI11 parses (see
    // expand_config_args), so the file's flat keys become ordinary flags
    // that explicit command-line flags override.
    cmd->add_option("--config", "Flat key=value file mirroring the flag names (flags win)");
}

// Pulls "--config PATH" out of the raw arguments and splices the file's
// key=value pairs in as "--key value" tokens right after the subcommand,
// ahead of the user's own flags.
inline std::vector<std::string> expand_config_args(const std::vector<std::string>& raw) {
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) {
            config_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        } else {
            rest.push_back(raw[i]);
        }
    }
    if (config_path.empty()) return rest;
    if (rest.empty() || rest.front().empty() || rest.front()[0] == '-')
        throw CLI::ValidationError("--config", "a subcommand must precede --config");

    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + config_path);
    std::vector<std::string> file_args;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "expected key=value, got: " + line);
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        const auto vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        if (key == "config") continue;
        file_args.push_back("--" + key);
        file_args.push_back(value);
    }

    std::vector<std::string> out;
    out.push_back(rest.front());
    out.insert(out.end(), file_args.begin(), file_args.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

inline std::uint64_t resolved_seed(const CLI::App* cmd, std::uint64_t seed) {
    if (cmd->count("--seed") > 0) return seed;
    const std::uint64_t s = entropy_seed();
    std::printf("seed: %llu\n", static_cast<unsigned long long>(s));
    return s;
}

} // namespace detail

// Parses argv and runs one subcommand. Exit codes: 0 success, 1 flag or
// validation error, 2 runtime failure.
inline int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Strong-lottery-ticket search: GA, edge-popup, and backprop runners"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // --- datagen ---
    auto* datagen = app.add_subcommand("datagen", "Generate a dataset CSV");
    detail::DatasetFlags dg_data;
    dg_data.attach(datagen);
    std::string dg_out = "dataset.csv";
    std::uint64_t dg_seed = 0;
    datagen->add_option("--out", dg_out, "Output CSV path");
    datagen->add_option("--seed", dg_seed, "Generator seed");
    detail::add_config_file(datagen);

    // --- evolve ---
    auto* evolve_cmd = app.add_subcommand("evolve", "Run one GA search for a lottery ticket");
    detail::DatasetFlags ev_data;
    detail::ArchFlags ev_arch;
    detail::GaFlags ev_ga;
    ev_data.attach(evolve_cmd);
    ev_arch.attach(evolve_cmd);
    ev_ga.attach(evolve_cmd);
    std::uint64_t ev_seed = 0;
    std::string ev_out = "out";
    evolve_cmd->add_option("--seed", ev_seed, "Run seed (omit for entropy)");
    evolve_cmd->add_option("--out", ev_out, "Output directory");
    detail::add_config_file(evolve_cmd);

    // --- backprop ---
    auto* bp_cmd = app.add_subcommand("backprop", "Train a dense network");
    detail::DatasetFlags bp_data;
    detail::ArchFlags bp_arch;
    bp_data.attach(bp_cmd);
    bp_arch.attach(bp_cmd);
    std::uint64_t bp_seed = 0;
    std::string bp_out = "out";
    std::string bp_solver = "reference";
    BackpropConfig bp_cfg;
    bp_cmd->add_option("--seed", bp_seed, "Run seed (omit for entropy)");
    bp_cmd->add_option("--out", bp_out, "Output directory");
    bp_cmd->add_option("--solver", bp_solver, "reference|adam|sgd")
        ->check(CLI::IsMember({"reference", "adam", "sgd"}));
    std::string bp_schedule = "constant";
    bp_cmd->add_option("--lr", bp_cfg.lr_init, "Initial learning rate");
    bp_cmd->add_option("--lr-schedule", bp_schedule, "constant|adaptive")
        ->check(CLI::IsMember({"constant", "adaptive"}));
    bp_cmd->add_option("--batch-size", bp_cfg.batch_size, "Mini-batch size");
    bp_cmd->add_option("--alpha", bp_cfg.alpha, "L2 penalty");
    bp_cmd->add_option("--epsilon", bp_cfg.epsilon, "Adam epsilon");
    bp_cmd->add_option("--momentum", bp_cfg.momentum, "SGD momentum");
    bp_cmd->add_flag("--nesterov", bp_cfg.nesterov, "Nesterov momentum");
    bp_cmd->add_option("--epochs", bp_cfg.epochs, "Epoch cap");
    detail::add_config_file(bp_cmd);

    // --- edgepopup ---
    auto* ep_cmd = app.add_subcommand("edgepopup", "Run the edge-popup score search");
    detail::DatasetFlags ep_data;
    detail::ArchFlags ep_arch;
    ep_data.attach(ep_cmd);
    ep_arch.attach(ep_cmd);
    std::uint64_t ep_seed = 0;
    std::string ep_out = "out";
    std::string ep_init = "uniform";
    bool ep_zero_bias = false;
    EdgePopupConfig ep_cfg;
    ep_cmd->add_option("--seed", ep_seed, "Run seed (omit for entropy)");
    ep_cmd->add_option("--out", ep_out, "Output directory");
    ep_cmd->add_option("--prune-rate", ep_cfg.keep_fraction,
                       "Kept fraction of edges per layer (k)");
    ep_cmd->add_option("--init", ep_init, "uniform|kaiming_normal|kaiming_signed_const")
        ->check(CLI::IsMember({"uniform", "kaiming_normal", "kaiming_signed_const"}));
    ep_cmd->add_flag("--zero-bias", ep_zero_bias, "Zero the biases (Kaiming ablation)");
    ep_cmd->add_option("--epochs", ep_cfg.epochs, "Training epochs");
    ep_cmd->add_option("--lr", ep_cfg.lr, "Score learning rate");
    ep_cmd->add_option("--batch-size", ep_cfg.batch_size, "Mini-batch size");
    detail::add_config_file(ep_cmd);

    // --- experiment ---
    auto* ex_cmd = app.add_subcommand("experiment", "Run a multi-seed experiment matrix");
    detail::DatasetFlags ex_data;
    detail::ArchFlags ex_arch;
    detail::GaFlags ex_ga;
    ex_data.attach(ex_cmd);
    ex_arch.attach(ex_cmd);
    ex_ga.attach(ex_cmd);
    std::string ex_preset;
    std::string ex_algo = "ga";
    int ex_seeds = 10;
    int ex_workers = 2;
    std::string ex_out = "out";
    bool ex_dry = false;
    ex_cmd->add_option("--preset", ex_preset, "fig3|fig5|fig6|fig7|fig8|backprop");
    ex_cmd->add_option("--algo", ex_algo, "ga|ga_adaptive_ab|backprop|edge_popup");
    ex_cmd->add_option("--seeds", ex_seeds, "Seed count (runs seeds 1..N)");
    ex_cmd->add_option("--workers", ex_workers, "Parallel run workers");
    ex_cmd->add_option("--out", ex_out, "Output directory");
    ex_cmd->add_flag("--dry-run", ex_dry, "Print the planned runs and exit");
    detail::add_config_file(ex_cmd);

    // --- report ---
    auto* rp_cmd = app.add_subcommand("report", "Aggregate results in an output directory");
    std::string rp_out = "out";
    rp_cmd->add_option("--out", rp_out, "Output directory holding runs/ and masks/");
    detail::add_config_file(rp_cmd);

    try {
        const std::vector<std::string> raw(argv + 1, argv + argc);
        const auto expanded = detail::expand_config_args(raw);
        std::vector<const char*> cargv;
        cargv.push_back(argc > 0 ? argv[0] : "slt");
        for (const auto& a : expanded) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*datagen) {
            DatasetSpec spec;
            try {
                spec = dg_data.to_spec();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            Dataset d;
            switch (spec.kind) {
            case DatasetSpec::Kind::Moons: d = gen_moons(spec.n, spec.noise, dg_seed); break;
            case DatasetSpec::Kind::Circles:
                d = gen_circles(spec.n, spec.noise, spec.factor, dg_seed);
                break;
            case DatasetSpec::Kind::Digits:
                d = load_digits(resolve_digits_path(spec.digits_path), spec.digit_subset);
                break;
            case DatasetSpec::Kind::Blobs:
                d = gen_blobs(spec.blob_classes, spec.per_cluster, dg_seed);
                break;
            }
            save_dataset_csv(d, dg_out);
            std::printf("wrote %s (%zu rows, %d classes)\n", dg_out.c_str(), d.rows,
                        d.n_classes);
            return 0;
        }

        if (*evolve_cmd) {
            ExperimentSpec spec;
            try {
                spec.dataset = ev_data.to_spec();
                spec.arch_id = ev_arch.resolve(spec.dataset);
                const bool adaptive = ev_ga.adaptive_requested(evolve_cmd);
                spec.algo = adaptive ? Algorithm::GaAdaptiveAb : Algorithm::Ga;
                spec.ga = ev_ga.to_config(spec.dataset.n_classes(), adaptive);
                spec.ga.validate();
                spec.out_dir = ev_out;
                spec.seeds = {detail::resolved_seed(evolve_cmd, ev_seed)};
                spec.validate();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const auto results = run_experiment(spec, 1);
            const RunResult& r = results.front();
            if (r.failed) {
                std::cerr << "error: run failed\n";
                return 2;
            }
            std::printf("train_acc=%.6f test_acc=%.6f sparsity=%.6f generations=%ld\n",
                        r.train_acc, r.test_acc, r.sparsity, r.steps);
            std::printf("log: %s/logs/%s__s%llu.csv\n", spec.out_dir.c_str(),
                        spec.cell_id().c_str(), static_cast<unsigned long long>(r.seed));
            return 0;
        }

        if (*bp_cmd) {
            ExperimentSpec spec;
            try {
                spec.dataset = bp_data.to_spec();
                spec.arch_id = bp_arch.resolve(spec.dataset);
                spec.algo = Algorithm::Backprop;
                if (bp_solver == "reference") {
                    const std::string family =
                        spec.dataset.kind == DatasetSpec::Kind::Circles ? "circles" : "moons";
                    const char letter =
                        spec.arch_id.size() == 1 ? spec.arch_id[0] : 'B';
                    spec.bp = reference_backprop_config(family, letter);
                    if (bp_cmd->count("--epochs")) spec.bp.epochs = bp_cfg.epochs;
                } else {
                    spec.bp = bp_cfg;
                    spec.bp.solver = bp_solver == "adam" ? Solver::Adam : Solver::Sgd;
                    spec.bp.lr_schedule = bp_schedule == "adaptive" ? LrSchedule::Adaptive
                                                                    : LrSchedule::Constant;
                }
                spec.bp.validate();
                spec.out_dir = bp_out;
                spec.seeds = {detail::resolved_seed(bp_cmd, bp_seed)};
                spec.validate();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const auto results = run_experiment(spec, 1);
            const RunResult& r = results.front();
            if (r.failed) {
                std::cerr << "error: training failed (divergence?)\n";
                return 2;
            }
            std::printf("train_acc=%.6f test_acc=%.6f epochs=%ld\n", r.train_acc, r.test_acc,
                        r.steps);
            return 0;
        }

        if (*ep_cmd) {
            ExperimentSpec spec;
            try {
                spec.dataset = ep_data.to_spec();
                spec.arch_id = ep_arch.resolve(spec.dataset);
                spec.algo = Algorithm::EdgePopup;
                spec.ep = ep_cfg;
                if (ep_init == "uniform")
                    spec.ep.init = InitScheme::uniform();
                else if (ep_init == "kaiming_normal")
                    spec.ep.init = InitScheme::kaiming_normal(spec.ep.keep_fraction, ep_zero_bias);
                else
                    spec.ep.init =
                        InitScheme::signed_kaiming_constant(spec.ep.keep_fraction, ep_zero_bias);
                spec.ep.validate();
                spec.out_dir = ep_out;
                spec.seeds = {detail::resolved_seed(ep_cmd, ep_seed)};
                spec.validate();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const auto results = run_experiment(spec, 1);
            const RunResult& r = results.front();
            if (r.failed) {
                std::cerr << "error: run failed\n";
                return 2;
            }
            std::printf("train_acc=%.6f test_acc=%.6f sparsity=%.6f epochs=%ld\n", r.train_acc,
                        r.test_acc, r.sparsity, r.steps);
            return 0;
        }

        if (*ex_cmd) {
            std::vector<ExperimentSpec> specs;
            int workers = 1;
            try {
                if (!ex_preset.empty()) {
                    specs = preset_specs(ex_preset, ex_seeds, ex_out, ex_data.digits_csv);
                } else {
                    ExperimentSpec spec;
                    spec.dataset = ex_data.to_spec();
                    spec.arch_id = ex_arch.resolve(spec.dataset);
                    spec.algo = parse_algorithm(ex_algo);
                    const bool adaptive = spec.algo == Algorithm::GaAdaptiveAb ||
                                          ex_ga.adaptive_requested(ex_cmd);
                    if (adaptive) spec.algo = Algorithm::GaAdaptiveAb;
                    spec.ga = ex_ga.to_config(spec.dataset.n_classes(), adaptive);
                    if (spec.algo == Algorithm::Backprop) {
                        const std::string family = spec.dataset.kind == DatasetSpec::Kind::Circles
                                                       ? "circles"
                                                       : "moons";
                        if (spec.arch_id.size() == 1)
                            spec.bp = reference_backprop_config(family, spec.arch_id[0]);
                    }
                    spec.out_dir = ex_out;
                    spec.seeds = default_seeds(ex_seeds);
                    specs.push_back(std::move(spec));
                }
                for (auto& s : specs) {
                    s.seeds = default_seeds(ex_seeds);
                    s.validate();
                }
                if (ex_workers < 1)
                    throw CLI::ValidationError("--workers", "must be >= 1");
                workers = ex_workers;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }

            if (ex_dry) {
                std::printf("cell,seed\n");
                for (const auto& s : specs)
                    for (auto seed : s.seeds)
                        std::printf("%s,%llu\n", s.cell_id().c_str(),
                                    static_cast<unsigned long long>(seed));
                return 0;
            }

            std::vector<RunResult> all;
            for (const auto& s : specs) {
                const auto results = run_experiment(s, workers);
                all.insert(all.end(), results.begin(), results.end());
                std::printf("finished %s (%zu runs)\n", s.cell_id().c_str(), results.size());
                std::fflush(stdout);
            }
            emit_report(all, aggregate(all), ex_out);
            std::printf("report written to %s\n", ex_out.c_str());
            return 0;
        }

        if (*rp_cmd) {
            namespace fs = std::filesystem;
            std::vector<RunResult> all;
            const fs::path runs_dir = fs::path(rp_out) / "runs";
            if (!fs::exists(runs_dir)) {
                std::cerr << "error: no runs directory under " << rp_out << "\n";
                return 1;
            }
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(runs_dir))
                if (e.path().extension() == ".csv") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files)
                for (const auto& r : load_results_csv(f.string())) all.push_back(r);
            emit_report(all, aggregate(all), rp_out);

            // consensus exports for every cell with stored masks
            const fs::path masks_dir = fs::path(rp_out) / "masks";
            if (fs::exists(masks_dir)) {
                std::map<std::string, std::vector<Genotype>> cells;
                for (const auto& e : fs::directory_iterator(masks_dir)) {
                    const std::string stem = e.path().stem().string();
                    const auto sep = stem.rfind("__s");
                    if (sep == std::string::npos) continue;
                    std::ifstream in(e.path());
                    std::size_t nbits = 0;
                    std::string hex;
                    if (!(in >> nbits >> hex)) continue;
                    cells[stem.substr(0, sep)].push_back(Genotype::from_hex(nbits, hex));
                }
                fs::create_directories(fs::path(rp_out) / "consensus");
                for (const auto& [cell, masks] : cells) {
                    bool ok = !masks.empty();
                    for (const auto& m : masks) ok = ok && m.size() == masks.front().size();
                    const auto arch = detail::cell_architecture(cell);
                    if (!ok || !arch || arch->weight_count() != masks.front().size()) continue;
                    save_consensus_csv(
                        *arch, mask_consensus(masks),
                        (fs::path(rp_out) / "consensus" / (cell + ".csv")).string());
                }
            }
            std::printf("report written to %s\n", rp_out.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace slt::cli
