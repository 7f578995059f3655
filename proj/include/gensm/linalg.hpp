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

#ifndef gensm_linalg_H
#define gensm_linalg_H

#include <armadillo>
#include <complex>
#include <vector>

namespace gensm
{

// Lower Cholesky factor of a Hermitian positive-definite matrix.
// Throws std::runtime_error if the factorization fails.
arma::cx_mat chol_hpd(const arma::cx_mat &A);

// ln det(A) given its lower Cholesky factor L (A = L L^H).
double logdet_from_chol(const arma::cx_mat &L);

// ln det(A) for Hermitian positive-definite A.
double logdet_hpd(const arma::cx_mat &A);

// Solves A x = b via a precomputed lower Cholesky factor of A.
arma::cx_vec chol_solve(const arma::cx_mat &L, const arma::cx_vec &b);

// Solves L y = b in place, L lower-triangular. Hot path of the Monte-Carlo
// density evaluation; written out by hand to skip the LAPACK dispatch cost
// on small systems.
void forward_subst(const arma::cx_mat &L, std::complex<double> *y, arma::uword n);

// ln(sum_i exp(v[i])), shifted by the maximum for stability.
double logsumexp(const std::vector<double> &v);

// p-norm of a complex vector, scaled by the largest modulus to avoid
// overflow of |a_k|^p for large p.
double lp_norm(const arma::cx_vec &a, double p);

} // namespace gensm

#endif
