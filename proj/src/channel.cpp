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

#include "gensm/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gensm
{

void ChannelParams::validate() const
{
    if (n_cl < 1 || n_ray < 1)
        throw std::invalid_argument("ChannelParams: n_cl and n_ray must be >= 1");
    if (!(angle_spread >= 0.0) || !std::isfinite(angle_spread))
        throw std::invalid_argument("ChannelParams: angle_spread must be finite and >= 0");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        throw std::invalid_argument("ChannelParams: element_spacing must be finite and > 0");
}

arma::cx_vec array_response(double angle, arma::uword n, double spacing)
{
    if (n < 1)
        throw std::invalid_argument("array_response: antenna count must be >= 1");

    const double step = 2.0 * 3.14159265358979323846 * spacing * std::sin(angle);
    const double scale = 1.0 / std::sqrt(double(n));
    arma::cx_vec b(n);
    for (arma::uword k = 0; k < n; ++k)
        b(k) = std::polar(scale, step * double(k));
    return b;
}

arma::cx_mat sample_channel(const ChannelParams &params, const SystemConfig &cfg, Rng &rng)
{
    params.validate();

    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    // Laplace scale giving the requested per-dimension standard deviation.
    const double lap_scale = params.angle_spread / std::sqrt(2.0);

    arma::cx_mat h(cfg.n_r, cfg.n_t, arma::fill::zeros);
    for (arma::uword p = 0; p < params.n_cl; ++p)
    {
        const double mean_t = two_pi * rng.uniform();
        const double mean_r = two_pi * rng.uniform();
        for (arma::uword q = 0; q < params.n_ray; ++q)
        {
            const double phi_t = mean_t + rng.laplace(lap_scale);
            const double phi_r = mean_r + rng.laplace(lap_scale);
            const std::complex<double> alpha = rng.cgauss();

            const arma::cx_vec bt = array_response(phi_t, cfg.n_t, params.element_spacing);
            const arma::cx_vec br = array_response(phi_r, cfg.n_r, params.element_spacing);
            h += alpha * br * bt.t();
        }
    }

    const double gamma =
        std::sqrt(double(cfg.n_t * cfg.n_r) / double(params.n_cl * params.n_ray));
    return gamma * h;
}

arma::cx_mat sample_channel(const ChannelParams &params, const SystemConfig &cfg)
{
    Rng rng(params.seed);
    return sample_channel(params, cfg, rng);
}

void save_channel(const arma::cx_mat &h, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_channel: cannot open " + path);

    out << h.n_rows << " " << h.n_cols << "\n";
    char buf[128];
    for (arma::uword i = 0; i < h.n_rows; ++i)
    {
        for (arma::uword j = 0; j < h.n_cols; ++j)
        {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", h(i, j).real(), h(i, j).imag());
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("save_channel: write failure on " + path);
}

arma::cx_mat load_channel(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_channel: cannot open " + path);

    arma::uword n_r = 0, n_t = 0;
    if (!(in >> n_r >> n_t) || n_r < 1 || n_t < 1)
        throw std::runtime_error("load_channel: malformed header in " + path);

    arma::cx_mat h(n_r, n_t);
    std::string tok;
    for (arma::uword i = 0; i < n_r; ++i)
    {
        for (arma::uword j = 0; j < n_t; ++j)
        {
            if (!(in >> tok))
                throw std::runtime_error("load_channel: truncated data in " + path);
            double re = 0.0, im = 0.0;
            if (std::sscanf(tok.c_str(), "%lg,%lg", &re, &im) != 2)
                throw std::runtime_error("load_channel: bad entry '" + tok + "' in " + path);
            h(i, j) = {re, im};
        }
    }
    return h;
}

} // namespace gensm
