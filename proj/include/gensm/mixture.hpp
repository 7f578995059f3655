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

#ifndef gensm_mixture_H
#define gensm_mixture_H

#include <armadillo>
#include <vector>

#include "gensm/core.hpp"
#include "gensm/rng.hpp"

namespace gensm
{

struct McEstimate
{
    double estimate = 0.0;
    double std_err = 0.0;
};

// Shared workspace for the Gaussian mixture induced by the M AGCs: caches
// the response columns T_n = H*diag(a)*C_n, the covariances
// Sigma_n = sigma2*I + (rho/n_s)*T_n*diag(lambda_n)*T_n^H, their Cholesky
// factors, the pairwise log-determinants ln|Sigma_n + Sigma_t|, and the
// normalized mixture weights. The spectral-efficiency bound, its gradients
// and the Monte-Carlo estimator all read from this one set of
// factorizations.
//
// The referenced channel matrix must outlive the workspace. set_lambda must
// be called before any evaluation; it may be called repeatedly to re-point
// the workspace at a new power allocation without rebuilding T_n.
class AgcMixture
{
  public:
    AgcMixture(const arma::cx_mat &h, const arma::cx_vec &a, const AgcTable &table,
               const SystemConfig &cfg);

    // Installs the stacked power allocation (length M*n_s, entries >= 0)
    // and refreshes every cached factorization. Throws std::invalid_argument
    // on wrong length or negative entries.
    void set_lambda(const arma::vec &lambda);

    // log2(M / (e*sigma2)^{n_r}) - (1/M) sum_n log2 sum_t 1/det(Sigma_n+Sigma_t),
    // evaluated entirely in the log domain.
    double lower_bound() const;

    // d lower_bound / d lambda, full stacked vector of length M*n_s.
    arma::vec grad_lambda_full() const;

    // Conjugate-coordinate gradient of lower_bound in a; the update
    // a + mu*grad increases the bound to first order, and the derivative
    // with respect to (Re a_k, Im a_k) is (2*Re g_k, 2*Im g_k).
    arma::cx_vec grad_a() const;

    // Sample-mean estimate of the mutual information I(y; x, m) in
    // bits/s/Hz, with its standard error. Draw order per sample: the AGC
    // index, the n_s symbol entries, then the n_r noise entries.
    McEstimate monte_carlo(arma::uword n_samples, Rng &rng) const;

    arma::uword m() const { return m_; }
    arma::uword n_r() const { return n_r_; }
    const arma::cx_mat &t_mat(arma::uword n) const { return t_[n]; }

  private:
    const arma::cx_mat *h_;
    arma::cx_vec a_;
    AgcTable table_;
    SystemConfig cfg_;
    arma::uword m_, n_r_, n_s_;

    std::vector<arma::cx_mat> t_;          // T_n, n_r x n_s
    std::vector<arma::ivec> col_of_;       // antenna -> combo column, -1 if inactive
    arma::mat lam_;                        // n_s x M, block n in column n
    std::vector<arma::cx_mat> g_;          // T_n * diag(sqrt(lambda_n))
    std::vector<arma::cx_mat> comp_chol_;  // chol(Sigma_n)
    arma::vec comp_logdet_;                // ln det Sigma_n
    std::vector<arma::cx_mat> pair_chol_;  // chol(Sigma_n+Sigma_t), n <= t, packed
    arma::mat pair_logdet_;                // ln det(Sigma_n+Sigma_t), full symmetric
    arma::vec lse_;                        // ln sum_t exp(-pair_logdet(n,t))
    arma::mat w_;                          // w(n,t) = exp(-pair_logdet(n,t) - lse_n)
    bool lambda_set_ = false;

    arma::uword pair_index(arma::uword n, arma::uword t) const
    {
        return t * (t + 1) / 2 + n; // requires n <= t
    }
    void require_lambda() const;
};

} // namespace gensm

#endif
