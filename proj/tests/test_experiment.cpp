// SPDX-License-Identifier: Apache-2.0
//
// gensm: spectral-efficiency simulation and hybrid precoder optimization
// for generalized-spatial-modulation mmWave MIMO
// Copyright (C) 2026 The gensm authors
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

#include <doctest.h>

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gensm/experiment.hpp"
#include "gensm/linalg.hpp"
#include "gensm/se_metrics.hpp"

using namespace gensm;

namespace
{

std::string temp_path(const std::string &name)
{
    return std::string("/tmp/gensm_exp_") + name;
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path);
    out << content;
}

// CSV body with the volatile timestamp comment stripped; the remainder must
// be byte-identical across runs.
std::vector<std::string> stable_lines(const std::string &path)
{
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# generated", 0) != 0)
            lines.push_back(line);
    return lines;
}

std::vector<std::string> data_rows(const std::vector<std::string> &lines)
{
    std::vector<std::string> rows;
    bool past_header = false;
    for (const std::string &l : lines)
    {
        if (past_header)
            rows.push_back(l);
        else if (!l.empty() && l[0] != '#')
            past_header = true; // this line is the column header
    }
    return rows;
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

const char *tiny_system = "system.n_t = 4\n"
                          "system.n_r = 2\n"
                          "system.n_k = 2\n"
                          "system.n_m = 2\n"
                          "system.n_rf = 1\n";

} // namespace

TEST_CASE("derive_seed separates streams without collisions")
{
    CHECK(derive_seed(1, 0, "channel") == derive_seed(1, 0, "channel"));
    CHECK(derive_seed(1, 0, "channel") != derive_seed(1, 1, "channel"));
    CHECK(derive_seed(1, 0, "channel") != derive_seed(1, 0, "gradcheck"));
    CHECK(derive_seed(1, 0, "channel") != derive_seed(2, 0, "channel"));

    const char *tags[4] = {"channel", "mc:uniform:0", "mc:optimized:0", "gradcheck"};
    std::vector<std::uint64_t> seeds;
    seeds.reserve(1000000);
    for (std::uint64_t i = 0; i < 250000; ++i)
        for (const char *tag : tags)
            seeds.push_back(derive_seed(1, i, tag));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("mode names round trip")
{
    const ExperimentMode modes[] = {ExperimentMode::bound_tightness, ExperimentMode::optimize,
                                    ExperimentMode::sweep, ExperimentMode::partition_select,
                                    ExperimentMode::gradcheck};
    for (ExperimentMode m : modes)
        CHECK(mode_from_name(mode_name(m)) == m);
    CHECK(mode_name(ExperimentMode::bound_tightness) == "bound-tightness");
    CHECK(mode_name(ExperimentMode::partition_select) == "partition-select");
    CHECK_THROWS_AS((void)mode_from_name("boundtightness"), std::invalid_argument);
    CHECK_THROWS_AS((void)mode_from_name(""), std::invalid_argument);
}

TEST_CASE("config files parse every section")
{
    const std::string path = temp_path("full.cfg");
    write_file(path, "# run description\n"
                     "mode = bound-tightness\n"
                     "master_seed = 7\n"
                     "n_channels = 3\n"
                     "n_mc_samples = 1500\n"
                     "threads = 2\n"
                     "snr_grid_db = -10, 0, 10\n"
                     "output_path = /tmp/out.csv\n"
                     "\n"
                     "system.n_t = 8\n"
                     "system.n_r = 6\n"
                     "system.n_k = 2\n"
                     "system.n_m = 4\n"
                     "system.n_rf = 2\n"
                     "system.sigma2 = 0.5\n"
                     "channel.n_cl = 6\n"
                     "channel.n_ray = 9\n"
                     "channel.angle_spread_deg = 10\n"
                     "channel.element_spacing = 0.25\n"
                     "optimizer.t_b = 50\n"
                     "optimizer.p_norm = 8\n"
                     "optimizer.max_inner = 120\n"
                     "optimizer.max_outer = 6\n"
                     "optimizer.grad_tol = 1e-5\n"
                     "optimizer.outer_tol = 0.01\n"
                     "optimizer.step_init = 0.5\n"
                     "optimizer.backtrack_ratio = 0.25\n"
                     "optimizer.armijo_c = 1e-3\n");

    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.mode == ExperimentMode::bound_tightness);
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.n_channels == 3);
    CHECK(cfg.n_mc_samples == 1500);
    CHECK(cfg.threads == 2);
    REQUIRE(cfg.snr_grid_db.size() == 3);
    CHECK(cfg.snr_grid_db[0] == -10.0);
    CHECK(cfg.snr_grid_db[2] == 10.0);
    CHECK(cfg.output_path == "/tmp/out.csv");
    CHECK(cfg.system.n_t == 8);
    CHECK(cfg.system.n_r == 6);
    CHECK(cfg.system.n_k == 2);
    CHECK(cfg.system.n_m == 4);
    CHECK(cfg.system.n_rf == 2);
    CHECK(cfg.system.n_s == 2); // defaults to n_rf
    CHECK(cfg.system.sigma2 == 0.5);
    CHECK(cfg.channel.n_cl == 6);
    CHECK(cfg.channel.n_ray == 9);
    CHECK(cfg.angle_spread_deg == 10.0);
    CHECK(cfg.channel.angle_spread ==
          doctest::Approx(10.0 * 3.14159265358979323846 / 180.0).epsilon(1e-15));
    CHECK(cfg.channel.element_spacing == 0.25);
    CHECK(cfg.optimizer.t_b == 50.0);
    CHECK(cfg.optimizer.p_norm == 8);
    CHECK(cfg.optimizer.max_inner == 120);
    CHECK(cfg.optimizer.max_outer == 6);
    CHECK(cfg.optimizer.grad_tol == 1e-5);
    CHECK(cfg.optimizer.outer_tol == 0.01);
    CHECK(cfg.optimizer.step_init == 0.5);
    CHECK(cfg.optimizer.backtrack_ratio == 0.25);
    CHECK(cfg.optimizer.armijo_c == 1e-3);
    CHECK_NOTHROW(cfg.validate());
    std::remove(path.c_str());
}

TEST_CASE("config parser rejects malformed input")
{
    const std::string path = temp_path("bad.cfg");
    const std::string base = std::string("mode = sweep\nsnr_grid_db = 0\n") + tiny_system;

    auto expect_reject = [&](const std::string &content, const char *needle) {
        write_file(path, content);
        try
        {
            (void)parse_config_file(path);
            FAIL_CHECK("expected rejection for: " << needle);
        }
        catch (const std::invalid_argument &e)
        {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_reject(base + "system.bogus = 1\n", "bogus");
    expect_reject(base + "threads = 2\nthreads = 3\n", "duplicate");
    expect_reject(base + "just a line\n", "key = value");
    expect_reject(base + "system.n_s =\n", "empty");
    expect_reject(base + "n_channels = eight\n", "n_channels");
    expect_reject(base + "n_channels = -3\n", "n_channels");
    expect_reject(base + "master_seed = 1e4\n", "master_seed");
    expect_reject(std::string("snr_grid_db = 0\n") + tiny_system, "mode");
    expect_reject(std::string("mode = sweep\n") + tiny_system, "snr_grid_db");
    expect_reject("mode = sweep\nsnr_grid_db = 0\nsystem.n_t = 4\nsystem.n_r = 2\n", "n_rf");
    expect_reject("mode = sweep\nsnr_grid_db = 0\nsystem.n_t = 4\nsystem.n_r = 2\n"
                  "system.n_rf = 1\n",
                  "n_k");

    // Missing file is an I/O failure, not a parse failure.
    CHECK_THROWS_AS((void)parse_config_file(temp_path("missing.cfg")), IoError);
    std::remove(path.c_str());
}

TEST_CASE("config values keep inline hash characters and skip comment lines")
{
    const std::string path = temp_path("hash.cfg");
    write_file(path, std::string("mode = sweep\n# full-line comment\nsnr_grid_db = 0\n") +
                         tiny_system + "output_path = /tmp/a#b.csv\n");
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.output_path == "/tmp/a#b.csv");
    std::remove(path.c_str());
}

TEST_CASE("partition-select mode does not require a partition")
{
    const std::string path = temp_path("psel.cfg");
    write_file(path, "mode = partition-select\nsnr_grid_db = 0\n"
                     "system.n_t = 4\nsystem.n_r = 2\nsystem.n_rf = 2\n"
                     "output_path = /tmp/psel_out.csv\n");
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.system.n_k == 1);
    CHECK(cfg.system.n_m == 4);
    CHECK_NOTHROW(cfg.validate());
    std::remove(path.c_str());
}

TEST_CASE("experiment config validation")
{
    const std::string path = temp_path("valid.cfg");
    write_file(path, std::string("mode = bound-tightness\nsnr_grid_db = 0, 5\n") + tiny_system +
                         "output_path = /tmp/x.csv\n");
    const ExperimentConfig good = parse_config_file(path);
    CHECK_NOTHROW(good.validate());

    ExperimentConfig bad = good;
    bad.snr_grid_db = {5.0, 5.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.snr_grid_db.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.n_channels = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.n_mc_samples = 999;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.threads = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.output_path.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("random interior precoders respect both barrier domains")
{
    SystemConfig cfg;
    cfg.n_t = 8;
    cfg.n_r = 4;
    cfg.n_k = 2;
    cfg.n_m = 4;
    cfg.n_rf = 2;
    cfg.n_s = 2;
    const AgcTable table = enumerate_agcs(cfg.n_m, cfg.n_rf);

    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial)
    {
        const HybridPrecoder p = random_interior_precoder(cfg, table.m, rng);
        CHECK_NOTHROW(p.validate(cfg, table.m));
        CHECK(p.lambda.min() > 0.0);
        CHECK(std::abs(arma::sum(p.lambda) - double(table.m * cfg.n_s)) <= 1e-9);
        CHECK(lp_norm(p.a, 16.0) <= 0.95 / std::sqrt(double(cfg.n_k)) + 1e-12);
    }

    Rng r1(62), r2(62);
    const HybridPrecoder a = random_interior_precoder(cfg, table.m, r1);
    const HybridPrecoder b = random_interior_precoder(cfg, table.m, r2);
    CHECK(arma::norm(a.lambda - b.lambda) == 0.0);
    CHECK(arma::norm(a.a - b.a) == 0.0);
}

TEST_CASE("experiment runs are deterministic across repeats and thread counts")
{
    const std::string cfg_path = temp_path("det.cfg");
    const std::string out_path = temp_path("det.csv");
    write_file(cfg_path, std::string("mode = bound-tightness\nmaster_seed = 11\n"
                                     "n_channels = 2\nn_mc_samples = 1000\n"
                                     "snr_grid_db = 0, 10\n") +
                             tiny_system);

    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out_path;
    std::ostringstream sink;

    CHECK(run_experiment(cfg, sink) == 0);
    const auto a = stable_lines(out_path);
    CHECK(run_experiment(cfg, sink) == 0);
    const auto b = stable_lines(out_path);
    cfg.threads = 4;
    CHECK(run_experiment(cfg, sink) == 0);
    const auto c = stable_lines(out_path);

    CHECK(a == b);
    // The thread count is an execution detail: it must not appear in the
    // artifact nor perturb any value.
    CHECK(a == c);
    for (const std::string &l : a)
        CHECK(l.find("thread") == std::string::npos);

    const auto rows = data_rows(a);
    REQUIRE(rows.size() == 4); // 2 SNR points x 2 channels
    const auto first = split_csv(rows[0]);
    REQUIRE(first.size() == 7);
    CHECK(first[0] == "0"); // SNR-major ordering
    CHECK(split_csv(rows[2])[0] == "10");

    // r_shifted = r_lb + 0.4427 * n_r must hold field by field.
    for (const std::string &row : rows)
    {
        const auto f = split_csv(row);
        const double r_lb = std::stod(f[2]);
        const double r_shifted = std::stod(f[3]);
        CHECK(r_shifted ==
              doctest::Approx(r_lb + 2.0 * 0.44269504088896340736).epsilon(1e-12));
    }

    std::remove(cfg_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("the echoed configuration precedes the data")
{
    const std::string cfg_path = temp_path("echo.cfg");
    const std::string out = temp_path("echo.csv");
    write_file(cfg_path, std::string("mode = bound-tightness\nmaster_seed = 9\n"
                                     "n_channels = 1\nn_mc_samples = 1000\n"
                                     "snr_grid_db = 5\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    REQUIRE(run_experiment(cfg, sink) == 0);

    std::ifstream in(out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        lines.push_back(line);

    auto has = [&](const std::string &needle) {
        for (const std::string &l : lines)
            if (l.find(needle) != std::string::npos && l.rfind("#", 0) == 0)
                return true;
        return false;
    };
    CHECK(has("mode = bound-tightness"));
    CHECK(has("master_seed = 9"));
    CHECK(has("system.n_t = 4"));
    CHECK(has("channel.angle_spread_deg = 7.5"));
    CHECK(has("optimizer.t_b = 100"));
    CHECK(has("generated"));
    CHECK_FALSE(has("threads"));

    // Header immediately follows the comment block.
    bool seen_header = false;
    for (const std::string &l : lines)
        if (l.rfind("#", 0) != 0)
        {
            CHECK(l == "snr_db,channel_index,r_lb,r_shifted,r_mc,r_mc_stderr,c_wf");
            seen_header = true;
            break;
        }
    CHECK(seen_header);

    // The summary stream reports per-SNR means.
    CHECK(sink.str().find("snr") != std::string::npos);

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("sweep artifacts carry one row per scheme")
{
    const std::string cfg_path = temp_path("sweep.cfg");
    const std::string out = temp_path("sweep.csv");
    write_file(cfg_path, std::string("mode = sweep\nmaster_seed = 3\n"
                                     "n_channels = 1\nn_mc_samples = 1000\n"
                                     "snr_grid_db = 0\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    REQUIRE(run_experiment(cfg, sink) == 0);

    const auto rows = data_rows(stable_lines(out));
    REQUIRE(rows.size() == 3);
    CHECK(split_csv(rows[0])[2] == "uniform");
    CHECK(split_csv(rows[1])[2] == "optimized");
    CHECK(split_csv(rows[2])[2] == "waterfilling");
    CHECK(split_csv(rows[2])[4] == "0"); // the capacity is exact, no stderr

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("optimize artifacts expose the optimization trace summary")
{
    const std::string cfg_path = temp_path("opt.cfg");
    const std::string out = temp_path("opt.csv");
    write_file(cfg_path, std::string("mode = optimize\nmaster_seed = 5\n"
                                     "n_channels = 2\nn_mc_samples = 1000\n"
                                     "snr_grid_db = 5\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    const int rc = run_experiment(cfg, sink);
    CHECK(rc == 0);

    const auto rows = data_rows(stable_lines(out));
    REQUIRE(rows.size() == 2);
    for (const std::string &row : rows)
    {
        const auto f = split_csv(row);
        REQUIRE(f.size() == 9);
        const double r_init = std::stod(f[2]);
        const double r_relaxed = std::stod(f[3]);
        const double r_final = std::stod(f[4]);
        CHECK(r_relaxed >= r_init - 1e-9);
        CHECK(r_final >= r_init - 1e-9);
        CHECK((f[8] == "0" || f[8] == "1"));
    }

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("gradcheck artifacts stay under the release threshold")
{
    const std::string cfg_path = temp_path("grad.cfg");
    const std::string out = temp_path("grad.csv");
    write_file(cfg_path, std::string("mode = gradcheck\nmaster_seed = 2\n"
                                     "n_channels = 4\nn_mc_samples = 1000\n"
                                     "snr_grid_db = -5, 5\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    REQUIRE(run_experiment(cfg, sink) == 0);

    const auto rows = data_rows(stable_lines(out));
    REQUIRE(rows.size() == 8); // lambda and analog row per instance
    for (const std::string &row : rows)
    {
        const auto f = split_csv(row);
        REQUIRE(f.size() == 3);
        CHECK((f[1] == "lambda" || f[1] == "analog"));
        CHECK(std::stod(f[2]) < 1e-5);
    }

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("partition-select artifacts flag exactly one winner per snr")
{
    const std::string cfg_path = temp_path("psel_run.cfg");
    const std::string out = temp_path("psel_run.csv");
    write_file(cfg_path, "mode = partition-select\nmaster_seed = 4\n"
                         "n_channels = 2\nn_mc_samples = 1000\n"
                         "snr_grid_db = 0\n"
                         "system.n_t = 4\nsystem.n_r = 2\nsystem.n_rf = 2\n");
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    REQUIRE(run_experiment(cfg, sink) == 0);

    const auto rows = data_rows(stable_lines(out));
    REQUIRE(rows.size() == 2); // candidates (2,2) and (1,4)
    int winners = 0;
    for (const std::string &row : rows)
    {
        const auto f = split_csv(row);
        REQUIRE(f.size() == 5);
        winners += (f[4] == "1");
    }
    CHECK(winners == 1);

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("unwritable output paths raise io errors")
{
    const std::string cfg_path = temp_path("io.cfg");
    write_file(cfg_path, std::string("mode = bound-tightness\nn_channels = 1\n"
                                     "n_mc_samples = 1000\nsnr_grid_db = 0\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = "/nonexistent_dir_gensm/out.csv";
    std::ostringstream sink;
    CHECK_THROWS_AS((void)run_experiment(cfg, sink), IoError);
    std::remove(cfg_path.c_str());
}

TEST_CASE("starved iteration caps are reported as a numerical failure")
{
    const std::string cfg_path = temp_path("cap.cfg");
    const std::string out = temp_path("cap.csv");
    // An outer tolerance below attainable sweep-to-sweep improvement forces
    // every run to exhaust its two sweeps without converging.
    write_file(cfg_path, std::string("mode = optimize\nmaster_seed = 6\n"
                                     "n_channels = 2\nn_mc_samples = 1000\n"
                                     "snr_grid_db = 10\n"
                                     "optimizer.max_outer = 2\n"
                                     "optimizer.outer_tol = 1e-12\n") +
                             tiny_system);
    ExperimentConfig cfg = parse_config_file(cfg_path);
    cfg.output_path = out;
    std::ostringstream sink;
    CHECK(run_experiment(cfg, sink) == 2);
    CHECK(sink.str().find("cap") != std::string::npos);

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}
