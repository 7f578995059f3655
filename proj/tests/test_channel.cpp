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

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include "gensm/channel.hpp"

using namespace gensm;

namespace
{

constexpr double two_pi = 6.283185307179586476925286766559;

SystemConfig make_cfg(arma::uword n_t, arma::uword n_r, arma::uword n_k, arma::uword n_m,
                      arma::uword n_rf)
{
    SystemConfig cfg;
    cfg.n_t = n_t;
    cfg.n_r = n_r;
    cfg.n_k = n_k;
    cfg.n_m = n_m;
    cfg.n_rf = n_rf;
    cfg.n_s = n_rf;
    return cfg;
}

std::string temp_path(const std::string &name)
{
    return std::string("/tmp/gensm_test_") + name;
}

} // namespace

TEST_CASE("steering vector has unit norm and linear phase progression")
{
    SUBCASE("explicit entries")
    {
        const double angle = 0.7, spacing = 0.5;
        const arma::uword n = 4;
        const arma::cx_vec b = array_response(angle, n, spacing);
        REQUIRE(b.n_elem == n);
        for (arma::uword k = 0; k < n; ++k)
        {
            const double phase = two_pi * spacing * double(k) * std::sin(angle);
            const std::complex<double> want =
                std::complex<double>(std::cos(phase), std::sin(phase)) / 2.0;
            CHECK(std::abs(b(k) - want) < 1e-14);
        }
    }
    SUBCASE("broadside and degenerate array")
    {
        const arma::cx_vec b0 = array_response(0.0, 5, 0.5);
        for (const auto &v : b0)
            CHECK(std::abs(v - std::complex<double>(1.0 / std::sqrt(5.0), 0.0)) < 1e-15);

        const arma::cx_vec b1 = array_response(1.234, 1, 0.5);
        CHECK(std::abs(b1(0) - std::complex<double>(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("unit norm at arbitrary angles")
    {
        for (double angle : {-1.2, 0.3, 2.9})
            CHECK(arma::norm(array_response(angle, 7, 0.37)) ==
                  doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("single-path draw reproduces the documented sampling order")
{
    ChannelParams params;
    params.n_cl = 1;
    params.n_ray = 1;
    const SystemConfig cfg = make_cfg(4, 3, 2, 2, 1);

    Rng rng(7);
    const arma::cx_mat h = sample_channel(params, cfg, rng);

    Rng ref(7);
    const double lap_scale = params.angle_spread / std::sqrt(2.0);
    const double mean_t = two_pi * ref.uniform();
    const double mean_r = two_pi * ref.uniform();
    const double phi_t = mean_t + ref.laplace(lap_scale);
    const double phi_r = mean_r + ref.laplace(lap_scale);
    const std::complex<double> alpha = ref.cgauss();
    const double gamma = std::sqrt(double(cfg.n_t * cfg.n_r));
    const arma::cx_mat want = gamma * alpha *
                              array_response(phi_r, cfg.n_r, params.element_spacing) *
                              array_response(phi_t, cfg.n_t, params.element_spacing).t();

    CHECK(arma::norm(h - want, "fro") < 1e-14 * arma::norm(h, "fro"));

    arma::vec sv = arma::svd(h);
    CHECK(sv(1) < 1e-12 * sv(0)); // rank one
}

TEST_CASE("ensemble frobenius power matches the array dimensions")
{
    ChannelParams params; // defaults: 8 clusters, 10 rays
    const SystemConfig cfg = make_cfg(4, 4, 1, 4, 1);
    Rng rng(99);
    const int n_draws = 10000;
    double acc = 0.0;
    for (int i = 0; i < n_draws; ++i)
    {
        const arma::cx_mat h = sample_channel(params, cfg, rng);
        acc += arma::accu(arma::square(arma::abs(h)));
    }
    const double mean_ratio = acc / (double(n_draws) * double(cfg.n_t * cfg.n_r));
    CHECK(mean_ratio > 0.97);
    CHECK(mean_ratio < 1.03);
}

TEST_CASE("channel rank is bounded by the path count")
{
    ChannelParams params;
    params.n_cl = 1;
    params.n_ray = 2;
    const SystemConfig cfg = make_cfg(6, 6, 1, 6, 1);
    Rng rng(55);
    const arma::cx_mat h = sample_channel(params, cfg, rng);
    const arma::vec sv = arma::svd(h);
    CHECK(sv(2) < 1e-10 * sv(0));
}

TEST_CASE("seeded draws are reproducible and seed-sensitive")
{
    ChannelParams params;
    params.seed = 5;
    const SystemConfig cfg = make_cfg(4, 3, 2, 2, 1);

    const arma::cx_mat h1 = sample_channel(params, cfg);
    const arma::cx_mat h2 = sample_channel(params, cfg);
    CHECK(arma::norm(h1 - h2, "fro") == 0.0);

    params.seed = 6;
    const arma::cx_mat h3 = sample_channel(params, cfg);
    CHECK(arma::norm(h1 - h3, "fro") > 0.0);
}

TEST_CASE("channel dumps round-trip exactly")
{
    ChannelParams params;
    params.seed = 17;
    const SystemConfig cfg = make_cfg(5, 3, 1, 5, 2);
    const arma::cx_mat h = sample_channel(params, cfg);

    const std::string path = temp_path("dump.txt");
    save_channel(h, path);

    std::ifstream peek(path);
    std::string header;
    std::getline(peek, header);
    CHECK(header == "3 5");
    peek.close();

    const arma::cx_mat back = load_channel(path);
    REQUIRE(back.n_rows == h.n_rows);
    REQUIRE(back.n_cols == h.n_cols);
    CHECK(arma::norm(back - h, "fro") == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("malformed channel dumps are rejected")
{
    const std::string path = temp_path("bad_dump.txt");

    {
        std::ofstream out(path);
        out << "2 2\n1,0 2,0\n"; // missing second row
    }
    CHECK_THROWS_AS((void)load_channel(path), std::runtime_error);

    {
        std::ofstream out(path);
        out << "x y\n";
    }
    CHECK_THROWS_AS((void)load_channel(path), std::runtime_error);

    CHECK_THROWS_AS((void)load_channel(temp_path("no_such_file.txt")), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("channel parameter validation")
{
    ChannelParams p;
    CHECK_NOTHROW(p.validate());

    ChannelParams no_cl = p;
    no_cl.n_cl = 0;
    CHECK_THROWS_AS(no_cl.validate(), std::invalid_argument);

    ChannelParams no_ray = p;
    no_ray.n_ray = 0;
    CHECK_THROWS_AS(no_ray.validate(), std::invalid_argument);

    ChannelParams bad_spread = p;
    bad_spread.angle_spread = -0.1;
    CHECK_THROWS_AS(bad_spread.validate(), std::invalid_argument);

    ChannelParams zero_spread = p; // rays collapse onto the cluster mean
    zero_spread.angle_spread = 0.0;
    CHECK_NOTHROW(zero_spread.validate());

    ChannelParams bad_spacing = p;
    bad_spacing.element_spacing = 0.0;
    CHECK_THROWS_AS(bad_spacing.validate(), std::invalid_argument);
}
