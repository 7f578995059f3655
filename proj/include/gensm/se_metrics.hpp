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

#ifndef gensm_se_metrics_H
#define gensm_se_metrics_H

#include <armadillo>

#include "gensm/core.hpp"
#include "gensm/mixture.hpp"
#include "gensm/rng.hpp"

namespace gensm
{

// Per-(channel, SNR) spectral-efficiency record, all rates in bits/s/Hz.
struct SeReport
{
    double snr_db = 0.0;
    double r_lb = 0.0;
    double r_shifted = 0.0;
    double r_mc = 0.0;
    double r_mc_std_err = 0.0;
    double c_wf = 0.0;
};

// Closed-form lower bound on the GenSM mutual information:
// log2(M/(e*sigma2)^{n_r}) - (1/M) sum_n log2 sum_t 1/det(Sigma_n+Sigma_t).
double se_lower_bound(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                      const SystemConfig &cfg);

// The asymptotic offset n_r*(1 - log2 e) between the lower bound and the
// true rate; r_shifted = r_lb - se_bound_shift(cfg).
double se_bound_shift(const SystemConfig &cfg);

// Monte-Carlo estimate of the mutual information I(y; x, m). Requires
// n_samples >= 1000 (throws std::invalid_argument below that).
McEstimate se_monte_carlo(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                          const SystemConfig &cfg, arma::uword n_samples, Rng &rng);

// Waterfilling capacity of H under total power rho and noise sigma2,
// solved by bisection on the water level to relative tolerance 1e-10.
double waterfilling_capacity(const arma::cx_mat &h, const SystemConfig &cfg);

// Bundles the four metrics for one (channel, precoder, SNR) point.
SeReport se_report(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                   const SystemConfig &cfg, arma::uword n_samples, Rng &rng);

} // namespace gensm

#endif
