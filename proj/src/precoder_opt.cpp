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

#include "gensm/precoder_opt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "gensm/linalg.hpp"
#include "gensm/mixture.hpp"

namespace gensm
{

namespace
{

constexpr arma::uword max_backtracks = 80;

void require_interior_lambda(const arma::vec &lambda, const char *who)
{
    if (lambda.n_elem == 0 || lambda.min() <= 0.0)
        throw std::invalid_argument(std::string(who) + ": lambda must be strictly positive");
}

// Conjugate-coordinate gradient of (1/t_b)*ln(c - ||a||_p). The ratio form
// (|a_k|/norm)^{p-1} keeps the large-p powers in [0, 1].
arma::cx_vec barrier_grad_a(const arma::cx_vec &a, double p, double c, double t_b, double norm_p)
{
    arma::cx_vec g(a.n_elem, arma::fill::zeros);
    if (norm_p <= 0.0)
        return g;
    const double denom = 2.0 * t_b * (c - norm_p);
    for (arma::uword k = 0; k < a.n_elem; ++k)
    {
        const double mag = std::abs(a(k));
        if (mag == 0.0)
            continue;
        const double radial = std::pow(mag / norm_p, p - 1.0) / denom;
        g(k) = -(a(k) / mag) * radial;
    }
    return g;
}

} // namespace

void OptimizerSettings::validate() const
{
    if (!(t_b > 0.0))
        throw std::invalid_argument("OptimizerSettings: t_b must be > 0");
    if (p_norm < 2 || p_norm % 2 != 0)
        throw std::invalid_argument("OptimizerSettings: p_norm must be an even integer >= 2");
    if (!(step_init > 0.0))
        throw std::invalid_argument("OptimizerSettings: step_init must be > 0");
    if (!(backtrack_ratio > 0.0 && backtrack_ratio < 1.0))
        throw std::invalid_argument("OptimizerSettings: backtrack_ratio must lie in (0, 1)");
    if (!(armijo_c > 0.0))
        throw std::invalid_argument("OptimizerSettings: armijo_c must be > 0");
    if (!(grad_tol > 0.0))
        throw std::invalid_argument("OptimizerSettings: grad_tol must be > 0");
    if (max_inner < 1 || max_outer < 1)
        throw std::invalid_argument("OptimizerSettings: iteration caps must be >= 1");
    if (!(outer_tol > 0.0))
        throw std::invalid_argument("OptimizerSettings: outer_tol must be > 0");
}

arma::vec grad_lambda_full(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                           const SystemConfig &cfg)
{
    require_interior_lambda(p.lambda, "grad_lambda");
    AgcMixture mix(h, p.a, table, cfg);
    mix.set_lambda(p.lambda);
    return mix.grad_lambda_full();
}

arma::vec grad_lambda(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                      const SystemConfig &cfg, arma::uword m_idx)
{
    if (m_idx >= table.m)
        throw std::out_of_range("grad_lambda: AGC index " + std::to_string(m_idx + 1) +
                                " exceeds M = " + std::to_string(table.m));
    const arma::vec full = grad_lambda_full(h, p, table, cfg);
    return full.subvec(m_idx * cfg.n_s, (m_idx + 1) * cfg.n_s - 1);
}

arma::cx_vec grad_a(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                    const SystemConfig &cfg)
{
    AgcMixture mix(h, p.a, table, cfg);
    mix.set_lambda(p.lambda);
    return mix.grad_a();
}

std::pair<arma::vec, InnerResult> optimize_digital(const arma::cx_mat &h, const arma::cx_vec &a,
                                                   const AgcTable &table, const SystemConfig &cfg,
                                                   const OptimizerSettings &settings,
                                                   const arma::vec &lambda0)
{
    settings.validate();
    require_interior_lambda(lambda0, "optimize_digital");
    const double budget = double(table.m * cfg.n_s);
    if (std::abs(arma::accu(lambda0) - budget) > 1e-9)
        throw std::invalid_argument("optimize_digital: lambda0 must sum to M*n_s");

    AgcMixture mix(h, a, table, cfg);
    arma::vec lambda = lambda0;
    mix.set_lambda(lambda);
    double f = mix.lower_bound() + arma::accu(arma::log(lambda)) / settings.t_b;

    InnerResult res;
    res.converged = false;
    arma::uword iter = 0;
    for (; iter < settings.max_inner; ++iter)
    {
        arma::vec grad = mix.grad_lambda_full();
        grad += (1.0 / settings.t_b) / lambda;
        const arma::vec dir = grad - arma::mean(grad); // projected onto 1'dir = 0
        const double slope = arma::dot(dir, dir);
        if (std::sqrt(slope) < settings.grad_tol)
        {
            res.converged = true;
            break;
        }

        double mu = settings.step_init;
        bool accepted = false;
        for (arma::uword bt = 0; bt < max_backtracks; ++bt)
        {
            const arma::vec cand = lambda + mu * dir;
            if (cand.min() > 0.0)
            {
                mix.set_lambda(cand);
                const double f_cand =
                    mix.lower_bound() + arma::accu(arma::log(cand)) / settings.t_b;
                if (f_cand >= f + settings.armijo_c * mu * slope)
                {
                    lambda = cand;
                    f = f_cand;
                    accepted = true;
                    break;
                }
            }
            mu *= settings.backtrack_ratio;
        }
        if (!accepted)
        {
            // No step of any magnitude clears the sufficient-increase test:
            // the objective is flat at working precision.
            res.converged = true;
            ++iter;
            break;
        }
    }
    res.iterations = iter;

    lambda *= budget / arma::accu(lambda);
    return {lambda, res};
}

std::pair<arma::cx_vec, InnerResult> optimize_analog(const arma::cx_mat &h,
                                                     const arma::vec &lambda,
                                                     const AgcTable &table,
                                                     const SystemConfig &cfg,
                                                     const OptimizerSettings &settings,
                                                     const arma::cx_vec &a0)
{
    settings.validate();
    const double c = 1.0 / std::sqrt(double(cfg.n_k));
    const double p = double(settings.p_norm);
    double norm_p = lp_norm(a0, p);
    if (!(norm_p < c))
        throw std::invalid_argument("optimize_analog: ||a0||_p must be strictly below 1/sqrt(n_k)");

    arma::cx_vec a = a0;
    auto objective = [&](const arma::cx_vec &v, double np) {
        AgcMixture mix(h, v, table, cfg);
        mix.set_lambda(lambda);
        return mix.lower_bound() + std::log(c - np) / settings.t_b;
    };
    double f = objective(a, norm_p);

    InnerResult res;
    res.converged = false;
    arma::uword iter = 0;
    for (; iter < settings.max_inner; ++iter)
    {
        AgcMixture mix(h, a, table, cfg);
        mix.set_lambda(lambda);
        arma::cx_vec grad = mix.grad_a() + barrier_grad_a(a, p, c, settings.t_b, norm_p);
        const double gnorm = arma::norm(grad);
        if (gnorm < settings.grad_tol)
        {
            res.converged = true;
            break;
        }
        const double slope = 2.0 * gnorm * gnorm;

        double mu = settings.step_init;
        bool accepted = false;
        for (arma::uword bt = 0; bt < max_backtracks; ++bt)
        {
            const arma::cx_vec cand = a + mu * grad;
            const double cand_norm = lp_norm(cand, p);
            if (cand_norm < c)
            {
                const double f_cand = objective(cand, cand_norm);
                if (f_cand >= f + settings.armijo_c * mu * slope)
                {
                    a = cand;
                    norm_p = cand_norm;
                    f = f_cand;
                    accepted = true;
                    break;
                }
            }
            mu *= settings.backtrack_ratio;
        }
        if (!accepted)
        {
            res.converged = true;
            ++iter;
            break;
        }
    }
    res.iterations = iter;
    return {a, res};
}

arma::cx_vec project_to_feasible(const arma::cx_vec &a, arma::uword n_k)
{
    const double c = 1.0 / std::sqrt(double(n_k));
    arma::cx_vec out(a.n_elem);
    for (arma::uword k = 0; k < a.n_elem; ++k)
        out(k) = std::polar(c, std::arg(a(k)));
    return out;
}

std::pair<HybridPrecoder, OptimizationTrace> two_step(const arma::cx_mat &h, const AgcTable &table,
                                                      const SystemConfig &cfg,
                                                      const OptimizerSettings &settings)
{
    settings.validate();
    const double budget = double(table.m * cfg.n_s);
    const double c = 1.0 / std::sqrt(double(cfg.n_k));
    const double p = double(settings.p_norm);

    arma::vec lambda(table.m * cfg.n_s, arma::fill::ones);
    // Uniform start scaled so ||a||_p = (1 - 1e-3)*c: strictly interior for
    // the lp barrier.
    const double mag = (1.0 - 1e-3) * c * std::pow(double(cfg.n_t), -1.0 / p);
    arma::cx_vec a(cfg.n_t);
    a.fill(std::complex<double>(mag, 0.0));

    auto bound_of = [&](const arma::vec &lam, const arma::cx_vec &av) {
        AgcMixture mix(h, av, table, cfg);
        mix.set_lambda(lam);
        return mix.lower_bound();
    };

    OptimizationTrace trace;
    trace.r_lb_initial = bound_of(lambda, a);

    arma::vec best_lambda = lambda;
    arma::cx_vec best_a = a;
    double best_r = trace.r_lb_initial;

    trace.converged = false;
    for (arma::uword sweep = 0; sweep < settings.max_outer; ++sweep)
    {
        auto [lam_next, dres] = optimize_digital(h, a, table, cfg, settings, lambda);
        lambda = lam_next;
        auto [a_next, ares] = optimize_analog(h, lambda, table, cfg, settings, a);
        a = a_next;

        const double r = bound_of(lambda, a);
        const double improvement = r - best_r;
        if (r > best_r)
        {
            best_lambda = lambda;
            best_a = a;
            best_r = r;
        }

        OuterRecord rec;
        rec.r_lb = best_r;
        rec.lambda_residual = std::abs(arma::accu(best_lambda) - budget);
        rec.a_residual = arma::abs(best_a).max() - c;
        rec.digital_iterations = dres.iterations;
        rec.analog_iterations = ares.iterations;
        rec.digital_converged = dres.converged;
        rec.analog_converged = ares.converged;
        trace.outer.push_back(rec);

        if (improvement < settings.outer_tol)
        {
            trace.converged = true;
            break;
        }
    }
    trace.r_lb_relaxed = best_r;

    const arma::cx_vec a_proj = project_to_feasible(best_a, cfg.n_k);
    auto [lam_final, fres] = optimize_digital(h, a_proj, table, cfg, settings, best_lambda);
    trace.final_digital_iterations = fres.iterations;

    HybridPrecoder out;
    out.lambda = lam_final;
    out.a = a_proj;
    trace.r_lb_projected = bound_of(out.lambda, out.a);
    return {out, trace};
}

PartitionSelection select_partition(const SystemConfig &base,
                                    const std::vector<arma::cx_mat> &channels,
                                    const OptimizerSettings &settings,
                                    std::vector<OptimizationTrace> *traces)
{
    if (channels.empty())
        throw std::invalid_argument("select_partition: channel ensemble is empty");

    std::vector<std::pair<arma::uword, arma::uword>> candidates; // (n_k, n_m)
    for (arma::uword n_k = 1; n_k <= base.n_t; ++n_k)
    {
        if (base.n_t % n_k != 0)
            continue;
        const arma::uword n_m = base.n_t / n_k;
        if (n_m >= base.n_rf)
            candidates.emplace_back(n_k, n_m);
    }
    if (candidates.empty())
        throw std::invalid_argument("select_partition: no factorization of n_t supports n_rf");
    std::sort(candidates.begin(), candidates.end(),
              [](const auto &x, const auto &y) { return x.second < y.second; });

    PartitionSelection sel;
    double best_mean = -arma::datum::inf;
    for (const auto &[n_k, n_m] : candidates)
    {
        SystemConfig cfg = base;
        cfg.n_k = n_k;
        cfg.n_m = n_m;
        cfg.validate();
        const AgcTable table = enumerate_agcs(n_m, cfg.n_rf);

        double acc = 0.0;
        for (const arma::cx_mat &h : channels)
        {
            auto [prec, trace] = two_step(h, table, cfg, settings);
            acc += trace.r_lb_projected;
            if (traces != nullptr)
                traces->push_back(std::move(trace));
        }
        const double mean = acc / double(channels.size());
        sel.reports.push_back({n_k, n_m, mean});

        // >= so exact ties fall to the larger n_m, listed later.
        if (mean >= best_mean)
        {
            best_mean = mean;
            sel.n_k = n_k;
            sel.n_m = n_m;
        }
    }
    return sel;
}

} // namespace gensm
