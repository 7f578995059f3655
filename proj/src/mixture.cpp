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

#include "gensm/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "gensm/linalg.hpp"

namespace gensm
{

namespace
{
constexpr double log2e = 1.4426950408889634074;
constexpr double ln2 = 0.69314718055994530942;
} // namespace

AgcMixture::AgcMixture(const arma::cx_mat &h, const arma::cx_vec &a, const AgcTable &table,
                       const SystemConfig &cfg)
    : h_(&h), a_(a), table_(table), cfg_(cfg), m_(table.m), n_r_(h.n_rows), n_s_(cfg.n_s)
{
    if (h.n_cols != cfg.n_t || a.n_elem != cfg.n_t)
        throw std::invalid_argument("AgcMixture: channel/analog dimensions do not match n_t");
    if (table.combos.size() != m_ || m_ == 0)
        throw std::invalid_argument("AgcMixture: empty or inconsistent AGC table");

    t_.reserve(m_);
    col_of_.reserve(m_);
    for (arma::uword n = 0; n < m_; ++n)
    {
        const arma::uvec &u = table_.combos[n];
        if (u.n_elem != n_s_)
            throw std::invalid_argument("AgcMixture: combo size does not match n_s");
        t_.push_back(agc_response(h, a_, u, cfg_.n_k));

        arma::ivec cols(cfg_.n_t);
        cols.fill(-1);
        for (arma::uword j = 0; j < u.n_elem; ++j)
        {
            const arma::uword base = (u(j) - 1) * cfg_.n_k;
            for (arma::uword i = 0; i < cfg_.n_k; ++i)
                cols(base + i) = arma::sword(j);
        }
        col_of_.push_back(std::move(cols));
    }
}

void AgcMixture::require_lambda() const
{
    if (!lambda_set_)
        throw std::logic_error("AgcMixture: set_lambda has not been called");
}

void AgcMixture::set_lambda(const arma::vec &lambda)
{
    if (lambda.n_elem != m_ * n_s_)
        throw std::invalid_argument("AgcMixture: lambda length " + std::to_string(lambda.n_elem) +
                                    " != M*n_s = " + std::to_string(m_ * n_s_));
    if (lambda.min() < 0.0)
        throw std::invalid_argument("AgcMixture: lambda has negative entries");

    lam_.set_size(n_s_, m_);
    for (arma::uword n = 0; n < m_; ++n)
        lam_.col(n) = lambda.subvec(n * n_s_, (n + 1) * n_s_ - 1);

    const double scale = cfg_.rho / double(cfg_.n_s);
    g_.assign(m_, arma::cx_mat());
    comp_chol_.assign(m_, arma::cx_mat());
    comp_logdet_.set_size(m_);
    std::vector<arma::cx_mat> sigma(m_);

    for (arma::uword n = 0; n < m_; ++n)
    {
        g_[n] = t_[n];
        for (arma::uword j = 0; j < n_s_; ++j)
            g_[n].col(j) *= std::sqrt(lam_(j, n));

        sigma[n] = scale * (g_[n] * g_[n].t());
        sigma[n].diag() += cfg_.sigma2;
        comp_chol_[n] = chol_hpd(sigma[n]);
        comp_logdet_(n) = logdet_from_chol(comp_chol_[n]);
    }

    pair_chol_.assign(m_ * (m_ + 1) / 2, arma::cx_mat());
    pair_logdet_.set_size(m_, m_);
    const double sqrt2 = std::sqrt(2.0);
    for (arma::uword t = 0; t < m_; ++t)
    {
        for (arma::uword n = 0; n < t; ++n)
        {
            arma::cx_mat &l = pair_chol_[pair_index(n, t)];
            l = chol_hpd(sigma[n] + sigma[t]);
            const double ld = logdet_from_chol(l);
            pair_logdet_(n, t) = ld;
            pair_logdet_(t, n) = ld;
        }
        // Sigma_t + Sigma_t = 2*Sigma_t, whose factor is sqrt(2)*chol(Sigma_t).
        pair_chol_[pair_index(t, t)] = sqrt2 * comp_chol_[t];
        pair_logdet_(t, t) = comp_logdet_(t) + double(n_r_) * ln2;
    }

    lse_.set_size(m_);
    w_.set_size(m_, m_);
    std::vector<double> neg(m_);
    for (arma::uword n = 0; n < m_; ++n)
    {
        for (arma::uword t = 0; t < m_; ++t)
            neg[t] = -pair_logdet_(n, t);
        lse_(n) = logsumexp(neg);
        for (arma::uword t = 0; t < m_; ++t)
            w_(n, t) = std::exp(neg[t] - lse_(n));
    }
    lambda_set_ = true;
}

double AgcMixture::lower_bound() const
{
    require_lambda();
    const double nr = double(n_r_);
    double acc = 0.0;
    for (arma::uword n = 0; n < m_; ++n)
        acc += lse_(n);
    return std::log2(double(m_)) - nr * (log2e + std::log2(cfg_.sigma2)) -
           acc / (double(m_) * ln2);
}

arma::vec AgcMixture::grad_lambda_full() const
{
    require_lambda();
    arma::vec g(m_ * n_s_, arma::fill::zeros);
    if (cfg_.rho == 0.0)
        return g;

    for (arma::uword t = 0; t < m_; ++t)
    {
        for (arma::uword n = 0; n <= t; ++n)
        {
            const arma::cx_mat &l = pair_chol_[pair_index(n, t)];
            // The diagonal pair carries both delta terms of the ordered sum,
            // so its weight w(n,n) enters twice; off-diagonal unordered pairs
            // collect w(n,t) + w(t,n).
            const double wsum = w_(n, t) + w_(t, n);
            if (wsum == 0.0)
                continue;

            const arma::cx_mat xn = arma::solve(arma::trimatl(l), t_[n]);
            for (arma::uword i = 0; i < n_s_; ++i)
            {
                const double q = arma::norm(xn.col(i));
                g(n * n_s_ + i) += wsum * q * q;
            }
            if (n != t)
            {
                const arma::cx_mat xt = arma::solve(arma::trimatl(l), t_[t]);
                for (arma::uword i = 0; i < n_s_; ++i)
                {
                    const double q = arma::norm(xt.col(i));
                    g(t * n_s_ + i) += wsum * q * q;
                }
            }
        }
    }
    return (cfg_.rho * log2e / (double(m_) * double(cfg_.n_s))) * g;
}

arma::cx_vec AgcMixture::grad_a() const
{
    require_lambda();
    arma::cx_vec g(cfg_.n_t, arma::fill::zeros);
    if (cfg_.rho == 0.0)
        return g;

    // d ln det(Sigma_n + Sigma_t) / d conj(a_k) couples antenna k to the
    // whole transmit column its group feeds: the selection blocks are
    // rank-one over each group, so the derivative is
    // (rho/n_s) * lambda_{n,j} * h_k^H (Sigma_n+Sigma_t)^{-1} T_n.col(j)
    // summed over both mixture members that keep antenna k active.
    for (arma::uword t = 0; t < m_; ++t)
    {
        for (arma::uword n = 0; n <= t; ++n)
        {
            // One ordered (n,n) term versus two ordered terms for n < t.
            const double factor = (n == t) ? w_(n, n) : (w_(n, t) + w_(t, n));
            if (factor == 0.0)
                continue;

            const arma::cx_mat &l = pair_chol_[pair_index(n, t)];
            const arma::cx_mat x = arma::solve(arma::trimatl(l), *h_);
            const arma::cx_mat yn = arma::solve(arma::trimatl(l), t_[n]);
            const arma::cx_mat yt = arma::solve(arma::trimatl(l), t_[t]);

            for (arma::uword k = 0; k < cfg_.n_t; ++k)
            {
                std::complex<double> d(0.0, 0.0);
                const arma::sword jn = col_of_[n](k);
                const arma::sword jt = col_of_[t](k);
                if (jn >= 0)
                    d += lam_(arma::uword(jn), n) * arma::cdot(x.col(k), yn.col(arma::uword(jn)));
                if (jt >= 0)
                    d += lam_(arma::uword(jt), t) * arma::cdot(x.col(k), yt.col(arma::uword(jt)));
                g(k) += factor * d;
            }
        }
    }

    g *= cfg_.rho * log2e / (double(m_) * double(cfg_.n_s));
    return g;
}

McEstimate AgcMixture::monte_carlo(arma::uword n_samples, Rng &rng) const
{
    require_lambda();
    const double inv_sqrt_ns = 1.0 / std::sqrt(double(cfg_.n_s));
    const double sqrt_rho = std::sqrt(cfg_.rho);
    const double sigma = std::sqrt(cfg_.sigma2);
    const double base = std::log2(double(m_)) - double(n_r_) * (log2e + std::log2(cfg_.sigma2));

    arma::cx_vec x(n_s_), y(n_r_);
    std::vector<std::complex<double>> z(n_r_);
    std::vector<double> logc(m_);

    double mean = 0.0, m2 = 0.0;
    for (arma::uword s = 0; s < n_samples; ++s)
    {
        const arma::uword midx = rng.uniform_index(m_);
        for (arma::uword j = 0; j < n_s_; ++j)
            x(j) = rng.cgauss() * inv_sqrt_ns;
        y = sqrt_rho * (g_[midx] * x);
        for (arma::uword i = 0; i < n_r_; ++i)
            y(i) += rng.cgauss() * sigma;

        for (arma::uword t = 0; t < m_; ++t)
        {
            for (arma::uword i = 0; i < n_r_; ++i)
                z[i] = y(i);
            forward_subst(comp_chol_[t], z.data(), n_r_);
            double q = 0.0;
            for (arma::uword i = 0; i < n_r_; ++i)
                q += std::norm(z[i]);
            logc[t] = -q - comp_logdet_(t);
        }
        // -log2 p(y) - n_r*log2(pi*e*sigma2); the pi^{n_r} density factor
        // cancels against the entropy constant, leaving base - lse/ln2.
        const double sample = base - logsumexp(logc) / ln2;
        const double delta = sample - mean;
        mean += delta / double(s + 1);
        m2 += delta * (sample - mean);
    }

    McEstimate est;
    est.estimate = mean;
    est.std_err = (n_samples > 1) ? std::sqrt(m2 / double(n_samples - 1) / double(n_samples)) : 0.0;
    return est;
}

} // namespace gensm
