#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "levyest/csv.hpp"
#include "levyest/errors.hpp"
#include "levyest/experiment.hpp"

using namespace levyest;

namespace {

std::string temp_dir(const char* leaf) {
    const auto d = std::filesystem::temp_directory_path() / leaf;
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d.string();
}

}  // namespace

TEST_CASE("epsilon labels parse exactly") {
    const auto a = parse_epsilon("1/sqrt(20)");
    CHECK(a.value == doctest::Approx(1.0 / std::sqrt(20.0)));
    CHECK(a.label == "1/sqrt(20)");
    const auto b = parse_epsilon("0.05");
    CHECK(b.value == doctest::Approx(0.05));
    CHECK_THROWS_AS(parse_epsilon("banana"), ConfigError);
    CHECK_THROWS_AS(parse_epsilon("-0.1"), ConfigError);
    CHECK(sanitize_label("1/sqrt(20)") == "1_sqrt20");
    CHECK(sanitize_label("1e-10") == "1e-10");
}

TEST_CASE("defaults cover the four table noise levels") {
    const auto cfg = ExperimentConfig::parse_lines({});
    REQUIRE(cfg.epsilons.size() == 4);
    CHECK(cfg.epsilons[0].label == "1/sqrt(20)");
    CHECK(cfg.epsilons[3].value == doctest::Approx(1.0 / std::sqrt(1000.0)));
    CHECK(cfg.n_reps == 200);
    CHECK(cfg.grid_p == 10000);
}

TEST_CASE("config parsing: comments, overrides, unknown keys") {
    const auto cfg = ExperimentConfig::parse_lines({
        "# comment",
        "",
        "epsilons = 1/sqrt(100),0.1",
        "n_reps = 7",
        "rho2 = 0.6",
        "rho1 = 0.8",
        "jump_dist = two_point",
        "jump_intensity = 4",
        "delta = fixed:0.1",
        "varpi = 0.2",
    });
    CHECK(cfg.epsilons.size() == 2);
    CHECK(cfg.n_reps == 7);
    CHECK(cfg.rho2 == doctest::Approx(0.6));
    const auto noise = cfg.make_noise();
    CHECK(noise.kappa_q == doctest::Approx(1.0));
    CHECK(noise.jump_law->param == doctest::Approx(0.5));  // 1/sqrt(intensity)

    CHECK_THROWS_AS(ExperimentConfig::parse_lines({"bogus_key = 1"}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_lines({"no equals sign"}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_lines({"n_reps = 0"}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_lines({"epsilons = 0.9"}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_lines({"delta = sometimes"}), ConfigError);
}

TEST_CASE("config round-trip and stable hash") {
    const auto cfg = ExperimentConfig::parse_lines({
        "epsilons = 1/sqrt(200),1e-3",
        "n_reps = 5",
        "grid_p = 500",
        "seed = 99",
        "basis = signal",
        "signal = 2:0.4;5:0.1",
        "signal_basis = trig",
        "truncation = sqrt_lambda_star",
        "variance = known",
    });
    const auto back = ExperimentConfig::parse_lines(cfg.serialize());
    CHECK(back.serialize() == cfg.serialize());
    CHECK(back.hash() == cfg.hash());
    CHECK(back.epsilons[1].label == "1e-3");
    CHECK(back.signal_kind == "2:0.4;5:0.1");
    const auto s = back.make_signal();
    CHECK(s.coefficient(2) == doctest::Approx(0.4));
    CHECK(&s.basis() == trig_basis().get());

    auto other = cfg;
    other.seed = 100;
    CHECK(other.hash() != cfg.hash());
}

TEST_CASE("risk table runs and is byte-stable across reruns") {
    auto cfg = ExperimentConfig::parse_lines({
        "epsilons = 1/sqrt(20)",
        "n_reps = 4",
        "grid_p = 300",
        "seed = 12",
        "basis = signal",
        "per_lambda = false",
    });
    cfg.output_dir = temp_dir("levyest_exp_risk");
    const auto files = run_risk_table(cfg);
    REQUIRE(files.size() == 2);
    const auto first = read_lines(files[0]);
    REQUIRE(first.size() == 2);  // header + one epsilon row
    CHECK(first[0] == "epsilon,r_bar,r_bar_rel");

    run_risk_table(cfg);
    CHECK(read_lines(files[0]) == first);

    const auto meta = read_kv(files[1]);
    CHECK(meta.at("seed") == "12");
    CHECK(meta.at("config_hash") == std::to_string(cfg.hash()));
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("single-replication risk table is supported and deterministic") {
    auto cfg = ExperimentConfig::parse_lines(
        {"epsilons = 0.1", "n_reps = 1", "grid_p = 300", "basis = signal"});
    cfg.output_dir = temp_dir("levyest_exp_risk1");
    const auto files = run_risk_table(cfg);
    const auto first = read_lines(files[0]);
    run_risk_table(cfg);
    CHECK(read_lines(files[0]) == first);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("detection table: noiseless counts are exact") {
    auto cfg = ExperimentConfig::parse_lines({
        "epsilons = 1e-10",
        "n_reps = 3",
        "grid_p = 1000",
        "variance = known",
    });
    cfg.output_dir = temp_dir("levyest_exp_det");
    const auto files = run_detection_table(cfg);
    const auto lines = read_lines(files[0]);
    REQUIRE(lines.size() == 2);
    // LSE detector lands on the 10 components; the shrinkage detector
    // names the first sub-threshold index, one past the last component
    CHECK(lines[1] == "1e-10,10,11");

    const auto reps = read_lines(files[2]);
    CHECK(reps[0] == "epsilon,replication,q_hat_1,q_hat_2");
    CHECK(reps.size() == 4);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("figure data: noiseless fit overlays the signal") {
    auto cfg = ExperimentConfig::parse_lines({
        "epsilons = 1e-10",
        "grid_p = 250000",
        "basis = signal",
        "variance = known",
    });
    cfg.output_dir = temp_dir("levyest_exp_fig");
    const auto file = emit_figure_data(cfg, cfg.epsilons[0]);
    const auto lines = read_lines(file);
    REQUIRE(lines.size() == static_cast<std::size_t>(cfg.grid_p) + 2);
    CHECK(lines[0] == "t,y_observed,S_true,S_hat");
    double worst = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_row(lines[i]);
        REQUIRE(f.size() == 4);
        worst = std::max(worst, std::abs(std::stod(f[2]) - std::stod(f[3])));
    }
    CHECK(worst < 1e-6);

    const auto again = emit_figure_data(cfg, cfg.epsilons[0]);
    CHECK(read_lines(again) == lines);
    std::filesystem::remove_all(cfg.output_dir);
}
