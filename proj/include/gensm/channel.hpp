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

#ifndef gensm_channel_H
#define gensm_channel_H

#include <armadillo>
#include <cstdint>
#include <string>

#include "gensm/core.hpp"
#include "gensm/rng.hpp"

namespace gensm
{

// Clustered geometric channel parameters. angle_spread is the per-dimension
// angular standard deviation (radians) of rays about their cluster mean;
// element_spacing is in wavelengths.
struct ChannelParams
{
    arma::uword n_cl = 8;
    arma::uword n_ray = 10;
    double angle_spread = 7.5 * 3.14159265358979323846 / 180.0;
    double element_spacing = 0.5;
    std::uint64_t seed = 1;

    // Throws std::invalid_argument unless n_cl >= 1, n_ray >= 1,
    // angle_spread >= 0 and element_spacing > 0.
    void validate() const;
};

// Uniform-linear-array steering vector
// (1/sqrt(n)) * [1, e^{j*2*pi*spacing*sin(angle)}, ...,
//                e^{j*2*pi*spacing*(n-1)*sin(angle)}]^T; unit Euclidean norm.
arma::cx_vec array_response(double angle, arma::uword n, double spacing);

// One n_r x n_t clustered narrowband channel draw
//   H = gamma * sum_{p,q} alpha_pq * b_r(phi_r) * b_t(phi_t)^H,
// alpha_pq complex standard normal, cluster mean angles uniform on [0, 2pi),
// ray offsets Laplacian with standard deviation angle_spread, and
// gamma = sqrt(n_t*n_r/(n_cl*n_ray)) so that E{||H||_F^2} = n_t*n_r.
//
// Draw order is part of the reproducibility contract: per cluster, the
// transmit then receive mean angle; per ray, the transmit offset, the
// receive offset, then the path gain.
arma::cx_mat sample_channel(const ChannelParams &params, const SystemConfig &cfg, Rng &rng);

// Convenience overload seeding a fresh stream from params.seed.
arma::cx_mat sample_channel(const ChannelParams &params, const SystemConfig &cfg);

// Text dump: one "n_r n_t" header line, then n_r rows of n_t "re,im" pairs
// separated by single spaces, full round-trip precision. load_channel
// throws std::runtime_error on malformed input or I/O failure.
void save_channel(const arma::cx_mat &h, const std::string &path);
arma::cx_mat load_channel(const std::string &path);

} // namespace gensm

#endif
