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

#ifndef gensm_experiment_H
#define gensm_experiment_H

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gensm/channel.hpp"
#include "gensm/core.hpp"
#include "gensm/precoder_opt.hpp"
#include "gensm/rng.hpp"

namespace gensm
{

enum class ExperimentMode
{
    bound_tightness,
    optimize,
    sweep,
    partition_select,
    gradcheck
};

std::string mode_name(ExperimentMode m);

// Accepts the CLI/config spellings: bound-tightness, optimize, sweep,
// partition-select, gradcheck. Throws std::invalid_argument otherwise.
ExperimentMode mode_from_name(const std::string &name);

// Fully resolved batch-run description. rho on the system config is a
// placeholder; each run point overwrites it via with_snr_db.
struct ExperimentConfig
{
    SystemConfig system;
    ChannelParams channel;
    OptimizerSettings optimizer;
    std::vector<double> snr_grid_db;
    arma::uword n_channels = 1000;
    arma::uword n_mc_samples = 20000;
    std::uint64_t master_seed = 1;
    ExperimentMode mode = ExperimentMode::bound_tightness;
    std::string output_path;
    arma::uword threads = 1;
    double angle_spread_deg = 7.5; // as authored; channel.angle_spread is radians

    // Throws std::invalid_argument on any inconsistency: empty or
    // non-increasing SNR grid, n_channels < 1, n_mc_samples < 1000,
    // threads < 1, missing output path, or invalid nested sections.
    void validate() const;
};

// Flat "key = value" file with dotted section prefixes; '#' starts a
// comment line. Unknown and duplicate keys are errors. Throws IoError when
// the file cannot be read, std::invalid_argument on bad content.
ExperimentConfig parse_config_file(const std::string &path);

// Deterministic stream splitting: channel i keeps one seed per purpose tag,
// identical across modes and runs of the same master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index, std::string_view tag);

// Random precoder strictly inside both barrier domains: positive lambda
// summing to M*n_s, analog entries with ||a||_p <= 0.95/sqrt(n_k) under the
// default p = 16. Draw order: the M*n_s lambda entries, then per antenna a
// magnitude and a phase.
HybridPrecoder random_interior_precoder(const SystemConfig &cfg, arma::uword m, Rng &rng);

// Central-finite-difference validation of both analytic gradients against
// se_lower_bound. Each field is the max coordinate error relative to the
// largest finite-difference coordinate.
struct GradCheckResult
{
    double lambda_rel_err = 0.0;
    double a_rel_err = 0.0;
};

GradCheckResult check_gradients(const arma::cx_mat &h, const HybridPrecoder &p,
                                const AgcTable &table, const SystemConfig &cfg,
                                double lambda_step = 1e-5, double a_step = 1e-6);

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Runs the configured mode, writes the CSV artifact, prints per-SNR means
// to summary. Returns 0 on success or 2 on numerical failure (non-finite
// results, or over half the optimizer runs hitting the iteration cap);
// throws IoError on I/O failure and std::invalid_argument on config errors.
int run_experiment(const ExperimentConfig &cfg, std::ostream &summary);

} // namespace gensm

#endif
