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

#include "gensm/core.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gensm
{

void SystemConfig::validate() const
{
    if (n_t == 0 || n_r == 0 || n_k == 0 || n_m == 0 || n_rf == 0)
        throw std::invalid_argument("SystemConfig: all antenna/group/RF counts must be >= 1");
    if (n_t != n_k * n_m)
        throw std::invalid_argument("SystemConfig: n_t = " + std::to_string(n_t) +
                                    " but n_k*n_m = " + std::to_string(n_k * n_m));
    if (n_m < n_rf)
        throw std::invalid_argument("SystemConfig: requires n_m >= n_rf, got n_m = " +
                                    std::to_string(n_m) + ", n_rf = " + std::to_string(n_rf));
    if (n_s != n_rf)
        throw std::invalid_argument("SystemConfig: n_s must equal n_rf, got n_s = " +
                                    std::to_string(n_s) + ", n_rf = " + std::to_string(n_rf));
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("SystemConfig: rho must be finite and >= 0");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("SystemConfig: sigma2 must be finite and > 0");
}

double SystemConfig::snr_db() const
{
    return 10.0 * std::log10(rho / sigma2);
}

SystemConfig SystemConfig::with_snr_db(double snr_db) const
{
    SystemConfig out = *this;
    out.rho = sigma2 * std::pow(10.0, snr_db / 10.0);
    return out;
}

// C(n, k) computed exactly; the running product after step i equals
// C(n-k+i, i), so every division is exact.
static std::uint64_t binomial(arma::uword n, arma::uword k)
{
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    unsigned __int128 c = 1;
    for (arma::uword i = 1; i <= k; ++i)
    {
        c = c * (n - k + i) / i;
        if (c > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("enumerate_agcs: C(n_m, n_rf) exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

AgcTable enumerate_agcs(arma::uword n_m, arma::uword n_rf)
{
    if (n_rf == 0)
        throw std::invalid_argument("enumerate_agcs: n_rf must be >= 1");
    if (n_rf > n_m)
        throw std::invalid_argument("enumerate_agcs: n_rf = " + std::to_string(n_rf) +
                                    " exceeds n_m = " + std::to_string(n_m));

    const std::uint64_t total = binomial(n_m, n_rf);
    const arma::uword m = arma::uword(1) << (std::bit_width(total) - 1);

    AgcTable table;
    table.m = m;
    table.combos.reserve(m);

    arma::uvec u(n_rf);
    for (arma::uword j = 0; j < n_rf; ++j)
        u(j) = j + 1;

    for (arma::uword count = 0; count < m; ++count)
    {
        table.combos.push_back(u);
        // Lexicographic successor: bump the rightmost label with headroom,
        // then reset everything to its right.
        arma::uword j = n_rf;
        while (j > 0)
        {
            --j;
            if (u(j) < n_m - (n_rf - 1 - j))
            {
                ++u(j);
                for (arma::uword i = j + 1; i < n_rf; ++i)
                    u(i) = u(i - 1) + 1;
                break;
            }
        }
    }
    return table;
}

SelectionMatrix selection_matrix(const arma::uvec &u, arma::uword n_k, arma::uword n_m)
{
    if (u.n_elem == 0)
        throw std::invalid_argument("selection_matrix: empty group selection");
    for (arma::uword j = 0; j < u.n_elem; ++j)
    {
        if (u(j) < 1 || u(j) > n_m)
            throw std::invalid_argument("selection_matrix: group label " + std::to_string(u(j)) +
                                        " out of range 1.." + std::to_string(n_m));
        if (j > 0 && u(j) <= u(j - 1))
            throw std::invalid_argument("selection_matrix: group labels must be strictly increasing");
    }

    SelectionMatrix c;
    c.entries.zeros(n_k * n_m, u.n_elem);
    for (arma::uword j = 0; j < u.n_elem; ++j)
    {
        const arma::uword base = (u(j) - 1) * n_k;
        for (arma::uword i = 0; i < n_k; ++i)
            c.entries(base + i, j) = 1.0;
    }
    return c;
}

arma::cx_mat agc_response(const arma::cx_mat &h, const arma::cx_vec &a, const arma::uvec &u,
                          arma::uword n_k)
{
    if (a.n_elem != h.n_cols)
        throw std::invalid_argument("agc_response: analog vector length " +
                                    std::to_string(a.n_elem) + " does not match n_t = " +
                                    std::to_string(h.n_cols));

    arma::cx_mat t(h.n_rows, u.n_elem, arma::fill::zeros);
    for (arma::uword j = 0; j < u.n_elem; ++j)
    {
        const arma::uword base = (u(j) - 1) * n_k;
        if (base + n_k > h.n_cols)
            throw std::invalid_argument("agc_response: group label " + std::to_string(u(j)) +
                                        " addresses columns beyond n_t");
        for (arma::uword i = 0; i < n_k; ++i)
            t.col(j) += a(base + i) * h.col(base + i);
    }
    return t;
}

arma::vec HybridPrecoder::lambda_block(arma::uword m_idx, arma::uword n_s) const
{
    const arma::uword first = m_idx * n_s;
    if (first + n_s > lambda.n_elem)
        throw std::out_of_range("lambda_block: block " + std::to_string(m_idx + 1) +
                                " exceeds stacked length " + std::to_string(lambda.n_elem));
    return lambda.subvec(first, first + n_s - 1);
}

HybridPrecoder HybridPrecoder::uniform(const SystemConfig &cfg, arma::uword m)
{
    HybridPrecoder p;
    p.lambda.ones(m * cfg.n_s);
    p.a.set_size(cfg.n_t);
    p.a.fill(std::complex<double>(1.0 / std::sqrt(double(cfg.n_k)), 0.0));
    return p;
}

void HybridPrecoder::validate(const SystemConfig &cfg, arma::uword m) const
{
    if (lambda.n_elem != m * cfg.n_s)
        throw std::invalid_argument("HybridPrecoder: lambda length " +
                                    std::to_string(lambda.n_elem) + " != M*n_s = " +
                                    std::to_string(m * cfg.n_s));
    if (a.n_elem != cfg.n_t)
        throw std::invalid_argument("HybridPrecoder: analog length " + std::to_string(a.n_elem) +
                                    " != n_t = " + std::to_string(cfg.n_t));
    if (lambda.min() < 0.0)
        throw std::invalid_argument("HybridPrecoder: lambda has negative entries");
    const double budget = double(m * cfg.n_s);
    if (arma::accu(lambda) > budget + 1e-9)
        throw std::invalid_argument("HybridPrecoder: total power " +
                                    std::to_string(arma::accu(lambda)) + " exceeds budget " +
                                    std::to_string(budget));
    const double cap = 1.0 / std::sqrt(double(cfg.n_k)) + 1e-9;
    for (arma::uword k = 0; k < a.n_elem; ++k)
        if (std::abs(a(k)) > cap)
            throw std::invalid_argument("HybridPrecoder: |a_" + std::to_string(k + 1) +
                                        "| exceeds 1/sqrt(n_k)");
}

arma::cx_mat effective_gain(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                            arma::uword m_idx, const SystemConfig &cfg)
{
    if (m_idx >= table.m)
        throw std::out_of_range("effective_gain: AGC index " + std::to_string(m_idx + 1) +
                                " exceeds M = " + std::to_string(table.m));
    const arma::vec lam = p.lambda_block(m_idx, cfg.n_s);
    if (lam.min() < 0.0)
        throw std::invalid_argument("effective_gain: lambda has negative entries");

    arma::cx_mat g = agc_response(h, p.a, table.combos[m_idx], cfg.n_k);
    for (arma::uword j = 0; j < g.n_cols; ++j)
        g.col(j) *= std::sqrt(lam(j));
    return g;
}

arma::cx_mat covariance(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                        arma::uword n_idx, const SystemConfig &cfg)
{
    if (n_idx >= table.m)
        throw std::out_of_range("covariance: AGC index " + std::to_string(n_idx + 1) +
                                " exceeds M = " + std::to_string(table.m));
    const arma::cx_mat g = effective_gain(h, p, table, n_idx, cfg);
    arma::cx_mat sigma = (cfg.rho / double(cfg.n_s)) * (g * g.t());
    sigma.diag() += cfg.sigma2;
    return sigma;
}

} // namespace gensm
