#include "sks/io.hpp"
#include "sks/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

using namespace sks;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sks_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

RunConfig quick_config() {
    RunConfig cfg;
    cfg.horizon = 0.05;
    cfg.calibration_samples = 200;
    return cfg;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig cfg = parse_config("# comment\n domain.modes = 32\nnoise.sigma=0.2\n\nsolver.cross_check = true\n");
    CHECK(cfg.domain.modes == 32);
    CHECK(cfg.sigma == 0.2);
    CHECK(cfg.solver.picard_cross_check);
    CHECK(cfg.domain.half_length == 16.0);

    try {
        parse_config("domain.colour = 3\n");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "domain.colour");
    }
    try {
        parse_config("solver.dt = fast\n");
        FAIL("bad number accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "solver.dt");
    }
    CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);

    const RunConfig round = parse_config(serialize(cfg));
    for (const auto& key : config_keys()) CHECK(get_config_value(round, key) == get_config_value(cfg, key));
}

TEST_CASE("validation names the offending key") {
    RunConfig cfg;
    cfg.domain.shift = 0.1;
    try {
        validate(cfg);
        FAIL("c = 0.1 accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "domain.shift");
    }
    cfg = RunConfig{};
    cfg.decay = 1.0;
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("trace-class"), ConfigError);
    cfg = RunConfig{};
    cfg.initial_mode = 65;
    try {
        validate(cfg);
        FAIL("mode out of range accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "initial.mode");
    }
    CHECK_NOTHROW(validate(RunConfig{}));
}

TEST_CASE("environment overrides") {
    CHECK(env_name("solver.picard_tol") == "SKS_SOLVER_PICARD_TOL");
    std::map<std::string, std::string> env = {{"SKS_NOISE_SIGMA", "0.25"}, {"SKS_SOLVER_T", "2"}};
    RunConfig cfg;
    apply_env_overrides(cfg, [&](const std::string& name) -> std::optional<std::string> {
        const auto it = env.find(name);
        return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
    });
    CHECK(cfg.sigma == 0.25);
    CHECK(cfg.horizon == 2.0);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) CHECK(std::stod(io::format_number(v)) == v);
}

TEST_CASE("ledger JSON round trip") {
    const ConstantsLedger a = ConstantsLedger::derive(0.61, 1.0, 2.14);
    const ConstantsLedger b = io::ledger_from_json(io::to_json(a));
    CHECK(b.C1 == a.C1);
    CHECK(b.M == a.M);
    CHECK(b.alpha == a.alpha);
    CHECK(b.C2_source == Provenance::analytic);
    CHECK(io::to_json(a)["provenance"]["L"] == "calibrated");
}

TEST_CASE("simulate: zero data writes zeros") {
    RunConfig cfg = quick_config();
    cfg.sigma = 0.0;
    cfg.initial_amplitude = 0.0;
    RunOptions opts;
    opts.out_dir = scratch("zero");
    const auto out = run_simulate(cfg, opts);
    CHECK(out.files.size() == 2);  // path_0000.csv, constants.json
    const auto rows = read_csv(slurp(opts.out_dir / "path_0000.csv"));
    REQUIRE(rows.size() == 52);
    CHECK(rows[0] == std::vector<std::string>{"t", "norm_H", "norm_V", "norm_L4", "wa_norm_H", "wa_norm_L4",
                                              "bound_H", "bound_V"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 8);
        for (std::size_t c = 1; c < 8; ++c) CHECK(std::stod(rows[i][c]) == 0.0);
    }
    const auto manifest = nlohmann::json::parse(slurp(opts.out_dir / "manifest.json"));
    CHECK(manifest["tool_version"] == tool_version);
    CHECK(manifest["config"]["noise.sigma"] == "0");
    CHECK(manifest.contains("wall_clock_seconds"));
}

TEST_CASE("simulate: identical seeds give identical bytes") {
    RunConfig cfg = quick_config();
    cfg.snapshots = true;
    RunOptions opts;
    opts.paths = 3;
    opts.seed = 99;
    opts.out_dir = scratch("det_a");
    run_simulate(cfg, opts);
    const auto first = opts.out_dir;
    opts.out_dir = scratch("det_b");
    run_simulate(cfg, opts);
    for (const char* name : {"path_0000.csv", "path_0002.csv", "fields_0001.csv", "constants.json"})
        CHECK_MESSAGE(slurp(first / name) == slurp(opts.out_dir / name), name);
    CHECK(slurp(first / "path_0000.csv") != slurp(first / "path_0001.csv"));

    const auto snap = read_csv(slurp(first / "fields_0000.csv"));
    CHECK(snap[0].size() == 65);
    CHECK(snap[0][64] == "u64");
}

TEST_CASE("simulate: bounds dominate the norms") {
    RunConfig cfg = quick_config();
    cfg.horizon = 0.5;
    RunOptions opts;
    opts.out_dir = scratch("bounds");
    run_simulate(cfg, opts);
    const auto rows = read_csv(slurp(opts.out_dir / "path_0000.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) <= std::stod(rows[i][6]));
}

TEST_CASE("unwritable output directory") {
    const auto file = scratch("blocker");
    io::write_file(file, "x");
    RunOptions opts;
    opts.out_dir = file / "sub";
    CHECK_THROWS_AS(run_simulate(quick_config(), opts), ConfigError);
}

TEST_CASE("converge") {
    RunOptions opts;
    opts.levels = 1;
    opts.out_dir = scratch("conv1");
    try {
        run_converge(quick_config(), opts);
        FAIL("levels = 1 accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "--levels");
    }

    RunConfig cfg;
    cfg.sigma = 0.0;
    cfg.initial_amplitude = 0.5;
    cfg.horizon = 0.5;
    opts.levels = 4;
    opts.out_dir = scratch("conv4");
    const ConvergenceStudy det = run_converge(cfg, opts);
    REQUIRE(det.rows.size() == 3);
    CHECK(det.fitted_order >= 1.0);
    CHECK(std::isnan(det.rows.back().order));
    const auto rows = read_csv(slurp(opts.out_dir / "convergence.csv"));
    CHECK(rows[0] == std::vector<std::string>{"dt", "error", "order"});
    CHECK(rows.size() == 4);
}

TEST_CASE("constants subcommand is seed-stable") {
    RunConfig cfg;
    RunOptions opts;
    opts.samples = 200;
    opts.seed = 4;
    opts.out_dir = scratch("const_a");
    const CalibrationResult a = run_constants(cfg, opts);
    opts.out_dir = scratch("const_b");
    const CalibrationResult b = run_constants(cfg, opts);
    CHECK(a.ledger.C1 == b.ledger.C1);
    CHECK(a.ledger.L == b.ledger.L);
    CHECK(a.ledger.C2 == 1.0);
    CHECK(a.ledger.C1 >= a.single_mode_c1);
    CHECK(std::filesystem::exists(opts.out_dir / "constants.json"));
}

TEST_CASE("verify with zero slack lists margins") {
    RunConfig cfg;
    cfg.horizon = 0.1;
    cfg.slack = 0.0;
    cfg.calibration_samples = 200;
    cfg.dependence_paths = 2;
    RunOptions opts;
    opts.paths = 3;
    opts.out_dir = scratch("verify0");
    const auto reports = run_verify(cfg, opts);
    CHECK(reports.size() >= 19);
    const auto rows = read_csv(slurp(opts.out_dir / "summary.csv"));
    CHECK(rows[0] == std::vector<std::string>{"name", "lhs", "rhs", "margin", "pass"});
    CHECK(rows.size() == reports.size() + 1);
    for (const auto& r : reports) {
        CHECK(std::filesystem::exists(opts.out_dir / "reports" / (r.name + ".json")));
        CHECK(r.context.count("slack") == 1);
    }
}
