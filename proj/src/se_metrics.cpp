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

#include "gensm/se_metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gensm
{

double se_lower_bound(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                      const SystemConfig &cfg)
{
    AgcMixture mix(h, p.a, table, cfg);
    mix.set_lambda(p.lambda);
    return mix.lower_bound();
}

double se_bound_shift(const SystemConfig &cfg)
{
    constexpr double log2e = 1.4426950408889634074;
    return double(cfg.n_r) * (1.0 - log2e);
}

McEstimate se_monte_carlo(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                          const SystemConfig &cfg, arma::uword n_samples, Rng &rng)
{
    if (n_samples < 1000)
        throw std::invalid_argument("se_monte_carlo: needs n_samples >= 1000, got " +
                                    std::to_string(n_samples));
    AgcMixture mix(h, p.a, table, cfg);
    mix.set_lambda(p.lambda);
    return mix.monte_carlo(n_samples, rng);
}

double waterfilling_capacity(const arma::cx_mat &h, const SystemConfig &cfg)
{
    arma::vec s = arma::svd(h);
    if (s.n_elem == 0 || s(0) <= 0.0 || cfg.rho == 0.0)
        return 0.0;

    // Channel gains per eigenmode; modes below numerical rank carry none.
    std::vector<double> gain;
    for (arma::uword i = 0; i < s.n_elem; ++i)
        if (s(i) > 1e-14 * s(0))
            gain.push_back(cfg.rho * s(i) * s(i) / cfg.sigma2);
    if (gain.empty())
        return 0.0;

    auto allocated = [&](double level) {
        double total = 0.0;
        for (double g : gain)
            total += std::max(0.0, level - 1.0 / g);
        return total;
    };

    // allocated() is increasing in the water level; bracket then bisect.
    double lo = 1.0 / gain.front(); // largest gain -> smallest inverse
    for (double g : gain)
        lo = std::min(lo, 1.0 / g);
    double hi = lo + 1.0;
    while (allocated(hi) < 1.0)
        hi = lo + 2.0 * (hi - lo);
    while ((hi - lo) > 1e-10 * hi)
    {
        const double mid = 0.5 * (lo + hi);
        (allocated(mid) < 1.0 ? lo : hi) = mid;
    }

    const double level = 0.5 * (lo + hi);
    double cap = 0.0;
    for (double g : gain)
    {
        const double pwr = std::max(0.0, level - 1.0 / g);
        cap += std::log2(1.0 + g * pwr);
    }
    return cap;
}

SeReport se_report(const arma::cx_mat &h, const HybridPrecoder &p, const AgcTable &table,
                   const SystemConfig &cfg, arma::uword n_samples, Rng &rng)
{
    SeReport rep;
    rep.snr_db = cfg.snr_db();
    rep.r_lb = se_lower_bound(h, p, table, cfg);
    rep.r_shifted = rep.r_lb - se_bound_shift(cfg);
    const McEstimate mc = se_monte_carlo(h, p, table, cfg, n_samples, rng);
    rep.r_mc = mc.estimate;
    rep.r_mc_std_err = mc.std_err;
    rep.c_wf = waterfilling_capacity(h, cfg);
    return rep;
}

} // namespace gensm
