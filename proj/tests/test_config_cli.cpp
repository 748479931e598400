// SPDX-License-Identifier: Apache-2.0
//
// thzchan: terahertz indoor channel modelling toolkit
// Copyright (C) 2026 thzchan contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include <catch2/catch_amalgamated.hpp>

#include "thzchan/commands.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thz;
namespace fs = std::filesystem;
using Catch::Approx;

namespace
{
    const std::string minimal = "[tx]\nx = 0.4\ny = 0.4\n[rx]\nx = 3.219\ny = 1.843\n";

    fs::path scratch(const std::string &name)
    {
        fs::path p = fs::path(THZCHAN_TEST_TMP) / name;
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    fs::path write_file(const fs::path &p, const std::string &text)
    {
        std::ofstream os(p, std::ios::binary);
        os << text;
        return p;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream is(p, std::ios::binary);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }

    std::size_t count_lines(const std::string &s)
    {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
    }

    std::size_t count_files(const fs::path &dir, const std::string &ext)
    {
        std::size_t n = 0;
        for (const auto &e : fs::directory_iterator(dir))
            n += e.path().extension() == ext;
        return n;
    }

    std::size_t line_of_error(const std::string &text)
    {
        try
        {
            parse_config_string(text);
        }
        catch (const ConfigError &e)
        {
            return e.line();
        }
        FAIL("expected ConfigError");
        return 0;
    }

    int run_cli(const std::string &args)
    {
        std::string cmd = std::string("\"") + THZCHAN_CLI + "\" " + args + " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
} // namespace

// ------------------------------------------------------------------------------------------------
// Configuration
// ------------------------------------------------------------------------------------------------

TEST_CASE("Config - defaults from a minimal file")
{
    auto cfg = parse_config_string(minimal);
    CHECK(cfg.scene.length_m == 10.15);
    CHECK(cfg.scene.width_m == 7.9);
    CHECK(cfg.scene.wall_permittivity == 6.4);
    CHECK(cfg.scene.carrier_frequency_hz == 140e9);
    CHECK(cfg.scene.rx.x == 3.219);
    CHECK(cfg.grid.n_tau == 1301);
    CHECK(cfg.generator.mode == GeneratorMode::hybrid);
    CHECK(cfg.generator.rt.cap_third_order);
    CHECK(cfg.analysis.eps == 0.15);
    CHECK(cfg.analysis.min_points == 6);
    CHECK(cfg.analysis.mcd.zeta == 1000.0);
    CHECK(cfg.seed_count == 1);
    CHECK(cfg.seed_for(3) == cfg.master_seed + 3);
    CHECK(cfg.output_format == "csv");
}

TEST_CASE("Config - shipped example parses")
{
    auto cfg = load_config(fs::path(THZCHAN_SOURCE_DIR) / "configs" / "meeting_room.ini");
    CHECK(cfg.seed_count == 4);
    CHECK(cfg.scene.tx_rx_distance() == Approx(3.16).margin(0.01));
}

TEST_CASE("Config - overrides reach the model")
{
    auto cfg = parse_config_string(minimal + "[model]\nmode = statistical_baseline\nseeds = 7\nmaster_seed = 100\n"
                                             "rt_post_aoa_kappa = 2.5\nlambda_inter = 10\nlambda_unit = rate_per_ns\n"
                                             "[clustering]\neps = 0.2\nzeta = 1\n[grid]\nn_theta = 72\n");
    CHECK(cfg.generator.mode == GeneratorMode::statistical_baseline);
    CHECK(cfg.seed_count == 7);
    CHECK(cfg.seed_for(0) == 100);
    CHECK(cfg.params.intra_params(SubpathCategory::rt_post).aoa.kappa == 2.5);
    CHECK(cfg.params.inter_arrival_rate_per_ns == Approx(10.0));
    // Arrival parameters left at their defaults are reinterpreted in the chosen unit
    CHECK(cfg.params.intra_params(SubpathCategory::rt_pre).arrival_rate_per_ns == Approx(0.0918));
    CHECK(cfg.analysis.eps == 0.2);
    CHECK(cfg.analysis.mcd.zeta == 1.0);
    CHECK(rad2deg(cfg.grid.delta_theta) == Approx(5.0));
}

TEST_CASE("Config - rejects unknown keys, bad values and invalid scenes")
{
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[room]\nheight_m = 3\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[antenna]\ngain = 3\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[room]\nlength_m = ten\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[model]\nmode = gscm\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[output]\nformat = json\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[clustering]\neps = -1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_string("[rx]\nx = 1\ny = 1\n"), ConfigError); // Tx missing, sits on a corner
    REQUIRE_THROWS_AS(parse_config_string(minimal + "[model]\nmax_delay_ns = 500\n"), ConfigError);
    REQUIRE_THROWS_AS(load_config("/nonexistent/thzchan.ini"), ConfigError);

    CHECK(line_of_error(minimal + "[room]\nheight_m = 3\n") == 8);
    CHECK(line_of_error(minimal + "[grid]\nn_tau = 1301\nn_theta = many\n") == 9);

    auto keys = config_keys();
    CHECK(std::find(keys.begin(), keys.end(), "room.length_m") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "model.nonrt_post_amp_b") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "clustering.zeta") != keys.end());
}

// ------------------------------------------------------------------------------------------------
// Helpers
// ------------------------------------------------------------------------------------------------

TEST_CASE("Helpers - SHA-256, error records and globbing")
{
    auto dir = scratch("helpers");
    write_file(dir / "abc.txt", "abc");
    CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    auto rec = nlohmann::json::parse(error_record("config", "bad \"value\"", "a.ini", 3));
    CHECK(rec["error"] == "config");
    CHECK(rec["path"] == "a.ini");
    CHECK(rec["line"] == 3);
    CHECK(error_record("x", "multi\nline").find('\n') == std::string::npos);

    write_file(dir / "b_2.pdap", "");
    write_file(dir / "b_1.pdap", "");
    write_file(dir / "c.csv", "");
    auto g = expand_glob((dir / "b_?.pdap").string());
    REQUIRE(g.size() == 2);
    CHECK(g[0].filename() == "b_1.pdap");
    CHECK(expand_glob((dir / "*.pdap").string()).size() == 2);
    CHECK(expand_glob((dir / "none*.pdap").string()).empty());
    CHECK(expand_glob((dir / "c.csv").string()).size() == 1);
}

// ------------------------------------------------------------------------------------------------
// Commands
// ------------------------------------------------------------------------------------------------

TEST_CASE("Simulate - one PDAP and realization per seed plus a manifest")
{
    auto dir = scratch("simulate");
    auto cfg = write_file(dir / "scene.ini", minimal);
    std::ostringstream err;
    SimulateOptions opt{cfg, 10, std::nullopt, dir / "run", 2};
    REQUIRE(cmd_simulate(opt, err) == exit_ok);
    CHECK(err.str().empty());
    CHECK(count_files(dir / "run", ".pdap") == 10);
    CHECK(fs::exists(dir / "run" / "rt_paths.csv"));

    auto manifest = nlohmann::json::parse(slurp(dir / "run" / "manifest.json"));
    CHECK(manifest["mode"] == "hybrid");
    CHECK(manifest["seeds"] == 10);
    CHECK(manifest["seed_policy"] == "master_seed + index");
    CHECK(manifest["files"][9]["seed"] == manifest["master_seed"].get<int>() + 9);
    CHECK(manifest["config_sha256"] == sha256_file(cfg));
    CHECK(manifest["files"].size() == 10);
    CHECK(manifest["versions"]["thzchan"] == tool_version);

    // A rerun, single-threaded, reproduces every artifact byte for byte
    SimulateOptions again{cfg, 10, std::nullopt, dir / "again", 1};
    REQUIRE(cmd_simulate(again, err) == exit_ok);
    for (const auto &e : fs::directory_iterator(dir / "run"))
        REQUIRE(slurp(e.path()) == slurp(dir / "again" / e.path().filename()));
}

TEST_CASE("Simulate - baseline mode is recorded and has no geometric labels")
{
    auto dir = scratch("baseline");
    auto cfg = write_file(dir / "scene.ini", minimal);
    std::ostringstream err;
    SimulateOptions opt{cfg, 3, std::string("statistical_baseline"), dir / "run", 1};
    REQUIRE(cmd_simulate(opt, err) == exit_ok);
    auto manifest = nlohmann::json::parse(slurp(dir / "run" / "manifest.json"));
    CHECK(manifest["mode"] == "statistical_baseline");
    CHECK_FALSE(fs::exists(dir / "run" / "rt_paths.csv"));
    for (const auto &e : fs::directory_iterator(dir / "run"))
        if (e.path().extension() == ".csv")
        {
            auto text = slurp(e.path());
            REQUIRE(text.find(",rt_center,") == std::string::npos);
            REQUIRE(text.find(",rt_subpath,") == std::string::npos);
        }

    std::ostringstream bad;
    SimulateOptions wrong{cfg, 1, std::string("gscm"), dir / "x", 1};
    CHECK(cmd_simulate(wrong, bad) == exit_fatal);
    CHECK(count_lines(bad.str()) == 1);
    CHECK_NOTHROW(nlohmann::json::parse(bad.str()));
}

TEST_CASE("Analyze - two planted clusters and aggregate reports")
{
    auto dir = scratch("analyze");
    auto cfg = write_file(dir / "scene.ini", minimal);
    GridSpec spec;
    PdapGrid grid(spec);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j)
        {
            grid.set_power(140 + i, 3 + j, dbm_to_watts(-70.0 - i));
            grid.set_power(520 + i, 20 + j, dbm_to_watts(-95.0 - i));
        }
    write_pdap(grid, dir / "two.pdap");

    std::ostringstream err;
    AnalyzeOptions opt{{(dir / "two.pdap").string()}, cfg, std::nullopt, dir / "out", 1};
    REQUIRE(cmd_analyze(opt, err) == exit_ok);
    REQUIRE(fs::exists(dir / "out" / "two_clusters.csv"));
    std::istringstream rows_text(slurp(dir / "out" / "characteristics.csv"));
    auto rows = read_characteristics_csv(rows_text);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_clusters == 2.0);
    CHECK(rows[0].d_m == Approx(3.16).margin(0.01));

    // Empty glob is a usage error
    std::ostringstream usage;
    AnalyzeOptions none{{(dir / "missing*.pdap").string()}, cfg, std::nullopt, dir / "out2", 1};
    CHECK(cmd_analyze(none, usage) != exit_ok);
    CHECK(usage.str().find("usage") != std::string::npos);

    // A corrupt file alongside a good one is logged, the run continues
    write_file(dir / "bad.pdap", "# pdap v1 dtau_ns=1\n");
    std::ostringstream partial;
    AnalyzeOptions mixed{{(dir / "*.pdap").string()}, cfg, std::nullopt, dir / "out3", 1};
    CHECK(cmd_analyze(mixed, partial) == exit_partial);
    CHECK(partial.str().find("bad.pdap") != std::string::npos);
}

TEST_CASE("Analyze - measured rows give the correlation report")
{
    auto dir = scratch("rows");
    auto cfg = write_file(dir / "scene.ini", minimal);
    std::ostringstream err;
    AnalyzeOptions opt{{}, cfg, fs::path(THZCHAN_FIXTURES) / "measured_characteristics.csv", dir / "out", 1};
    REQUIRE(cmd_analyze(opt, err) == exit_ok);
    auto corr = slurp(dir / "out" / "correlation.csv");
    CHECK(corr.rfind("param,d,N,K,DS,AS,R_w\n", 0) == 0);
    CHECK(count_lines(corr) == 7);
    CHECK(fs::exists(dir / "out" / "lognormal_fits.csv"));
    CHECK(fs::exists(dir / "out" / "ci_fit.csv") == false); // no path losses in a rows file
}

TEST_CASE("Compare - identical sets and CDF ordering")
{
    auto dir = scratch("compare");
    auto cfg = write_file(dir / "scene.ini", minimal);
    std::ostringstream err;
    REQUIRE(cmd_simulate(SimulateOptions{cfg, 4, std::nullopt, dir / "ref", 1}, err) == exit_ok);
    REQUIRE(cmd_simulate(SimulateOptions{cfg, 4, std::string("statistical_baseline"), dir / "base", 1}, err) ==
            exit_ok);

    CompareOptions same;
    same.reference = (dir / "ref" / "*.pdap").string();
    same.candidates = {"self=" + (dir / "ref" / "*.pdap").string()};
    same.out = dir / "same";
    REQUIRE(cmd_compare(same, err) == exit_ok);
    std::istringstream metrics(slurp(dir / "same" / "metrics.csv"));
    std::string line;
    std::getline(metrics, line);
    CHECK(line == "pair_id,model,reference,candidate,rmse_db,ssim");
    std::size_t rows = 0;
    while (std::getline(metrics, line))
    {
        ++rows;
        auto last = line.rfind(',');
        auto prev = line.rfind(',', last - 1);
        CHECK(std::stod(line.substr(prev + 1, last - prev - 1)) == 0.0);
        CHECK(std::stod(line.substr(last + 1)) == Approx(1.0).margin(1e-9));
    }
    CHECK(rows == 4);

    CompareOptions two;
    two.reference = same.reference;
    two.candidates = {"self=" + same.reference, "baseline=" + (dir / "base" / "*.pdap").string()};
    two.out = dir / "two";
    REQUIRE(cmd_compare(two, err) == exit_ok);
    std::istringstream cdf(slurp(dir / "two" / "cdf.csv"));
    std::getline(cdf, line);
    CHECK(line == "model,metric,value,quantile");
    std::string prev_key;
    double prev_value = 0.0;
    while (std::getline(cdf, line))
    {
        std::istringstream ls(line);
        std::string model, metric, value;
        std::getline(ls, model, ',');
        std::getline(ls, metric, ',');
        std::getline(ls, value, ',');
        double v = std::stod(value);
        if (model + metric == prev_key)
            REQUIRE(v >= prev_value);
        prev_key = model + metric;
        prev_value = v;
    }
    CHECK(count_lines(slurp(dir / "two" / "summary.csv")) == 3);

    CompareOptions empty;
    empty.reference = (dir / "nothing*.pdap").string();
    empty.candidates = {same.reference};
    empty.out = dir / "empty";
    CHECK(cmd_compare(empty, err) == exit_fatal);
}

TEST_CASE("CLI - exit codes")
{
    auto dir = scratch("cli");
    auto cfg = write_file(dir / "scene.ini", minimal);
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("simulate") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("simulate \"" + cfg.string() + "\" --seeds 2 --out \"" + (dir / "run").string() + "\"") == 0);
    CHECK(count_files(dir / "run", ".pdap") == 2);
    CHECK(run_cli("analyze --config \"" + cfg.string() + "\" \"" + (dir / "none*.pdap").string() + "\"") == 2);
    CHECK(run_cli("analyze --config \"" + cfg.string() + "\" \"" + (dir / "run" / "*.pdap").string() + "\" --out \"" +
                  (dir / "an").string() + "\"") == 0);
    CHECK(run_cli("simulate \"" + (dir / "missing.ini").string() + "\"") == 2);
    CHECK(run_cli("simulate \"" + cfg.string() + "\" --format json") == 2);
}
