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

#ifndef gensm_precoder_opt_H
#define gensm_precoder_opt_H

#include <armadillo>
#include <utility>
#include <vector>

#include "gensm/core.hpp"

namespace gensm
{

struct OptimizerSettings
{
    double t_b = 100.0;            // barrier scale
    arma::uword p_norm = 16;       // even lp exponent approximating l-infinity
    double step_init = 1.0;
    double backtrack_ratio = 0.5;
    double armijo_c = 1e-4;
    double grad_tol = 1e-6;
    arma::uword max_inner = 400;   // per-sub-problem iteration cap
    arma::uword max_outer = 20;    // alternation sweep cap
    double outer_tol = 1e-3;       // bound improvement (bits/s/Hz) to keep alternating

    // Throws std::invalid_argument unless t_b > 0, p_norm is an even
    // integer >= 2, 0 < backtrack_ratio < 1 and all tolerances/steps > 0.
    void validate() const;
};

// Outcome of one gradient-ascent sub-problem. converged is false only when
// the iteration cap stopped it; a stalled line search (no step satisfies
// the sufficient-increase test) counts as converged.
struct InnerResult
{
    arma::uword iterations = 0;
    bool converged = true;
};

// State after one alternation sweep, recorded on the accepted iterate
// (the best pair seen so far, never a rejected downhill move).
struct OuterRecord
{
    double r_lb = 0.0;
    double lambda_residual = 0.0; // |1'lambda - M*n_s|
    double a_residual = 0.0;      // ||a||_inf - 1/sqrt(n_k), <= 0 while relaxed
    arma::uword digital_iterations = 0;
    arma::uword analog_iterations = 0;
    bool digital_converged = true;
    bool analog_converged = true;
};

struct OptimizationTrace
{
    double r_lb_initial = 0.0;
    std::vector<OuterRecord> outer;
    double r_lb_relaxed = 0.0;   // best bound before phase projection
    double r_lb_projected = 0.0; // bound of the returned feasible precoder
    arma::uword final_digital_iterations = 0;
    bool converged = true; // alternation stopped by outer_tol, not the cap
};

// d se_lower_bound / d lambda_m for the AGC with 0-based index m_idx.
// Requires a strictly positive lambda (the barrier interior); throws
// std::invalid_argument otherwise.
arma::vec grad_lambda(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                      const SystemConfig &cfg, arma::uword m_idx);

// Full stacked digital gradient, length M*n_s, same interior precondition.
arma::vec grad_lambda_full(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                           const SystemConfig &cfg);

// Conjugate-coordinate gradient of se_lower_bound in the analog vector;
// a + mu*grad increases the bound to first order, and the derivatives in
// (Re a_k, Im a_k) are (2*Re g_k, 2*Im g_k).
arma::cx_vec grad_a(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                    const SystemConfig &cfg);

// Barrier ascent over the power allocation: maximizes
// R_LB(lambda) + (1/t_b)*sum_i ln(lambda_i) on the plane 1'lambda = M*n_s.
// lambda0 must be strictly positive with that exact sum (tolerance 1e-9).
// The returned vector satisfies the sum constraint to 1e-9.
std::pair<arma::vec, InnerResult> optimize_digital(const arma::cx_mat &h, const arma::cx_vec &a,
                                                   const AgcTable &table, const SystemConfig &cfg,
                                                   const OptimizerSettings &settings,
                                                   const arma::vec &lambda0);

// Barrier ascent over the analog vector: maximizes
// R_LB(a) + (1/t_b)*ln(1/sqrt(n_k) - ||a||_p). a0 must satisfy
// ||a0||_p < 1/sqrt(n_k) strictly; every iterate stays strictly interior.
std::pair<arma::cx_vec, InnerResult> optimize_analog(const arma::cx_mat &h,
                                                     const arma::vec &lambda,
                                                     const AgcTable &table,
                                                     const SystemConfig &cfg,
                                                     const OptimizerSettings &settings,
                                                     const arma::cx_vec &a0);

// Nearest phase-shifter-realizable vector: each entry mapped to
// (1/sqrt(n_k))*e^{j*arg(a_n)}; zero entries map to 1/sqrt(n_k).
arma::cx_vec project_to_feasible(const arma::cx_vec &a, arma::uword n_k);

// Alternating digital/analog ascent from the uniform interior start,
// followed by phase projection and one final digital pass against the
// projected analog vector. The returned precoder is feasible; the trace
// records the accepted bound after every sweep plus the initial, relaxed
// and projected bounds.
std::pair<HybridPrecoder, OptimizationTrace> two_step(const arma::cx_mat &h, const AgcTable &table,
                                                      const SystemConfig &cfg,
                                                      const OptimizerSettings &settings);

struct PartitionReport
{
    arma::uword n_k = 0;
    arma::uword n_m = 0;
    double mean_r_lb = 0.0;
};

struct PartitionSelection
{
    arma::uword n_k = 0;
    arma::uword n_m = 0;
    std::vector<PartitionReport> reports; // candidates in ascending n_m order
};

// Evaluates every factor pair (n_k, n_m) with n_k*n_m = n_t and n_m >= n_rf
// by running two_step on each channel and averaging the feasible
// (post-projection) bound; returns the argmax pair, ties broken toward
// larger n_m. Throws std::invalid_argument if no pair qualifies. When
// traces is non-null, every optimization trace is appended in
// (candidate, channel) order.
PartitionSelection select_partition(const SystemConfig &base,
                                    const std::vector<arma::cx_mat> &channels,
                                    const OptimizerSettings &settings,
                                    std::vector<OptimizationTrace> *traces = nullptr);

} // namespace gensm

#endif
