// Command-line front end for the estimation pipeline and the Monte Carlo
// experiment runner. All outputs are CSV files with key=value provenance
// sidecars; plotting is left to external tools.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "levyest/csv.hpp"
#include "levyest/errors.hpp"
#include "levyest/experiment.hpp"
#include "levyest/rng.hpp"

namespace {

struct GlobalOpts {
    std::string config_file;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long reps = 0;
    long grid = 0;
};

levyest::ExperimentConfig load_config(const GlobalOpts& g) {
    levyest::ExperimentConfig cfg = g.config_file.empty()
                                        ? levyest::ExperimentConfig::parse_lines({})
                                        : levyest::ExperimentConfig::load(g.config_file);
    if (g.seed_set) cfg.seed = g.seed;
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    if (g.reps > 0) cfg.n_reps = g.reps;
    if (g.grid > 0) cfg.grid_p = g.grid;
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);
    return cfg;
}

void report_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive signal estimation from Levy-noise observations"};
    app.require_subcommand(1);
    app.fallthrough();  // let global flags appear after the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_file, "experiment config file (key=value lines)");
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed (overrides config)");
    app.add_option("--reps", g.reps, "replication count (overrides config)");
    app.add_option("--grid", g.grid, "observation grid size p (overrides config)");

    auto* sim = app.add_subcommand("simulate", "write one observation path per noise level");
    auto* est = app.add_subcommand("estimate", "run the selection pipeline on a path CSV");
    std::string est_input;
    est->add_option("input", est_input, "path CSV produced by `simulate`")->required();
    auto* risk = app.add_subcommand("risk-table", "Monte Carlo risk table over noise levels");
    auto* det = app.add_subcommand("detect-table", "signal-count detection table");
    auto* fig = app.add_subcommand("figure-data", "plot-ready (t, y, S, S_hat) data files");
    auto* ora = app.add_subcommand("oracle-check", "per-candidate oracle risks and bound slack");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    try {
        const auto cfg = load_config(g);

        if (sim->parsed()) {
            const auto signal = cfg.make_signal();
            const auto noise = cfg.make_noise();
            std::vector<std::string> files;
            for (const auto& eps : cfg.epsilons) {
                const auto path = levyest::simulate_path(
                    signal, noise, eps.value, cfg.grid_p, levyest::substream_seed(cfg.seed, 0));
                const std::string file = cfg.output_dir + "/path_eps_" +
                                         levyest::sanitize_label(eps.label) + ".csv";
                levyest::write_path_csv(path, file);
                files.push_back(file);
            }
            report_files(files);
        } else if (est->parsed()) {
            const auto path = levyest::read_path_csv(est_input);
            const auto signal = cfg.make_signal();
            const auto pc = cfg.make_pipeline(signal);
            const auto ctx =
                levyest::make_pipeline_context(path.noise, path.epsilon, path.p, pc);
            const auto trunc =
                path.noise.has_jumps()
                    ? levyest::truncate_path(
                          path, levyest::TruncationConfig{ctx.a_bar, ctx.cfg.trunc_mode})
                    : path;
            const auto theta =
                levyest::fourier_estimates(path, trunc, *ctx.basis, ctx.n_eff);
            const double kappa =
                ctx.cfg.variance == levyest::PipelineConfig::Variance::Known
                    ? ctx.kappa_known
                    : levyest::estimate_variance(trunc);
            auto sel =
                levyest::select_model(ctx.family, theta, kappa, path.epsilon, ctx.delta);
            sel.a_bar = ctx.a_bar;
            const std::string file = cfg.output_dir + "/selection.csv";
            levyest::write_selection_csv(sel, file);
            report_files({file});
        } else if (risk->parsed()) {
            report_files(levyest::run_risk_table(cfg));
        } else if (det->parsed()) {
            report_files(levyest::run_detection_table(cfg));
        } else if (fig->parsed()) {
            std::vector<std::string> files;
            for (const auto& eps : cfg.epsilons)
                files.push_back(levyest::emit_figure_data(cfg, eps));
            report_files(files);
        } else if (ora->parsed()) {
            report_files(levyest::run_oracle_check(cfg));
        }
    } catch (const levyest::IOError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
