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

#include "gensm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gensm
{

arma::cx_mat chol_hpd(const arma::cx_mat &A)
{
    arma::cx_mat L;
    if (!arma::chol(L, A, "lower"))
        throw std::runtime_error("chol_hpd: matrix is not positive definite");
    return L;
}

double logdet_from_chol(const arma::cx_mat &L)
{
    double s = 0.0;
    for (arma::uword i = 0; i < L.n_rows; ++i)
        s += std::log(L(i, i).real());
    return 2.0 * s;
}

double logdet_hpd(const arma::cx_mat &A)
{
    return logdet_from_chol(chol_hpd(A));
}

arma::cx_vec chol_solve(const arma::cx_mat &L, const arma::cx_vec &b)
{
    arma::cx_vec y = arma::solve(arma::trimatl(L), b);
    return arma::solve(arma::trimatu(L.t()), y);
}

void forward_subst(const arma::cx_mat &L, std::complex<double> *y, arma::uword n)
{
    const std::complex<double> *Lp = L.memptr(); // column-major
    for (arma::uword j = 0; j < n; ++j)
    {
        y[j] /= Lp[j + j * n];
        const std::complex<double> yj = y[j];
        for (arma::uword i = j + 1; i < n; ++i)
            y[i] -= Lp[i + j * n] * yj;
    }
}

double logsumexp(const std::vector<double> &v)
{
    double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s);
}

double lp_norm(const arma::cx_vec &a, double p)
{
    double mx = 0.0;
    for (arma::uword k = 0; k < a.n_elem; ++k)
        mx = std::max(mx, std::abs(a(k)));
    if (mx == 0.0)
        return 0.0;
    double s = 0.0;
    for (arma::uword k = 0; k < a.n_elem; ++k)
        s += std::pow(std::abs(a(k)) / mx, p);
    return mx * std::pow(s, 1.0 / p);
}

} // namespace gensm
