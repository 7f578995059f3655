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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gensm/experiment.hpp"

// Exit codes: 0 success, 1 bad configuration or arguments, 2 numerical
// failure during the run, 3 I/O failure.
int main(int argc, char **argv)
{
    CLI::App app{"gensm-sim: batch spectral-efficiency experiments for "
                 "generalized-spatial-modulation hybrid precoding"};

    std::string config_path;
    std::string mode_override;
    std::string out_override;
    std::uint64_t seed_override = 0;
    std::uint64_t threads_override = 0;

    app.add_option("--config", config_path, "Path to a key = value config file")->required();
    app.add_option("--mode", mode_override,
                   "Override mode: bound-tightness, optimize, sweep, partition-select, gradcheck");
    auto *seed_opt = app.add_option("--seed", seed_override, "Override master_seed");
    app.add_option("--out", out_override, "Override output_path");
    auto *threads_opt = app.add_option("--threads", threads_override, "Override worker count");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        gensm::ExperimentConfig cfg = gensm::parse_config_file(config_path);
        if (!mode_override.empty())
            cfg.mode = gensm::mode_from_name(mode_override);
        if (seed_opt->count() > 0)
            cfg.master_seed = seed_override;
        if (!out_override.empty())
            cfg.output_path = out_override;
        if (threads_opt->count() > 0)
            cfg.threads = threads_override;
        return gensm::run_experiment(cfg, std::cout);
    }
    catch (const gensm::IoError &e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
