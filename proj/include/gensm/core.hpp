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

#ifndef gensm_core_H
#define gensm_core_H

#include <armadillo>
#include <vector>

namespace gensm
{

// Array and power dimensioning of one GenSM transmitter/receiver pair.
// The n_t transmit antennas form n_m groups of n_k adjacent antennas each;
// n_rf RF chains drive a selected subset of groups, carrying n_s data
// streams. rho is the average transmit power, sigma2 the noise variance,
// both linear.
struct SystemConfig
{
    arma::uword n_t = 0;
    arma::uword n_r = 0;
    arma::uword n_k = 0;
    arma::uword n_m = 0;
    arma::uword n_rf = 0;
    arma::uword n_s = 0;
    double rho = 1.0;
    double sigma2 = 1.0;

    // Throws std::invalid_argument unless n_t = n_k*n_m, n_m >= n_rf >= 1,
    // n_s = n_rf, n_r >= 1, rho >= 0 and sigma2 > 0.
    void validate() const;

    double snr_db() const;

    // Copy with rho scaled so that 10*log10(rho/sigma2) = snr_db.
    SystemConfig with_snr_db(double snr_db) const;
};

// The M legitimate antenna-group combinations. Each combo lists the active
// group labels, 1-based, strictly increasing.
struct AgcTable
{
    arma::uword m = 0;
    std::vector<arma::uvec> combos;
};

// Group-selection matrix: n_t x n_rf with 0/1 entries, column j selecting
// the n_k antennas of the j-th active group.
struct SelectionMatrix
{
    arma::mat entries;
};

// Hybrid precoder state. lambda stacks the per-AGC power allocations
// [lambda_1; ...; lambda_M], each block of length n_s holding the squared
// diagonal of that AGC's digital precoder. a holds the diagonal of the
// analog precoder; the phase-shifter network admits exactly the vectors
// with |a_n| = 1/sqrt(n_k).
struct HybridPrecoder
{
    arma::vec lambda;
    arma::cx_vec a;

    arma::vec lambda_block(arma::uword m_idx, arma::uword n_s) const;

    // All-ones lambda (total power M*n_s) and a = (1/sqrt(n_k))*ones: the
    // non-optimized reference precoder.
    static HybridPrecoder uniform(const SystemConfig &cfg, arma::uword m);

    // Throws std::invalid_argument if lambda has negative entries, exceeds
    // the total budget M*n_s beyond 1e-9, or any |a_n| > 1/sqrt(n_k) beyond
    // 1e-9; also checks vector lengths.
    void validate(const SystemConfig &cfg, arma::uword m) const;
};

// First M = 2^floor(log2 C(n_m, n_rf)) subsets of {1..n_m} of size n_rf,
// in lexicographic order. Throws std::invalid_argument if n_rf > n_m or
// n_rf = 0.
AgcTable enumerate_agcs(arma::uword n_m, arma::uword n_rf);

// Selection matrix for the combo u (1-based strictly increasing group
// labels): kron([e_{u1},...,e_{uL}], ones(n_k,1)). Throws on out-of-range
// or non-increasing u.
SelectionMatrix selection_matrix(const arma::uvec &u, arma::uword n_k, arma::uword n_m);

// Columns of H * diag(a) * C for the combo u: column j is the a-weighted
// sum of H's columns over the j-th active group. Shared kernel of the
// effective-gain and covariance computations.
arma::cx_mat agc_response(const arma::cx_mat &h, const arma::cx_vec &a, const arma::uvec &u,
                          arma::uword n_k);

// Effective gain G_m = H * diag(a) * C_m * D_m of the AGC with 0-based
// index m_idx, where D_m = diag(sqrt(lambda_m)). Throws on negative lambda
// entries.
arma::cx_mat effective_gain(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                            arma::uword m_idx, const SystemConfig &cfg);

// Receive covariance of the AGC with 0-based index n_idx:
// Sigma_n = sigma2*I + (rho/n_s) * G_n * G_n^H. Hermitian positive definite
// for sigma2 > 0.
arma::cx_mat covariance(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                        arma::uword n_idx, const SystemConfig &cfg);

} // namespace gensm

#endif
