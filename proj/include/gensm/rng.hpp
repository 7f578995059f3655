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

#ifndef gensm_rng_H
#define gensm_rng_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace gensm
{

// SplitMix64 finalizer. Used as a seed mixer and by derive_seed().
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a string hash, for folding purpose tags into seed material.
inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic stream RNG. The engine is std::mt19937_64, whose output
// sequence is pinned by the C++ standard; all output maps (uniform, normal,
// Laplace) are implemented here rather than with std:: distributions, whose
// algorithms are implementation-defined. Identical seeds therefore produce
// identical draws on every platform and standard library.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1); both endpoints excluded.
    double uniform_open() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Circularly-symmetric complex normal CN(0, 1): Re and Im each N(0, 1/2).
    std::complex<double> cgauss()
    {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        double re = normal();
        double im = normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    // Zero-mean Laplace with the given scale b (standard deviation b*sqrt(2)).
    double laplace(double scale)
    {
        double p = uniform_open();
        return (p < 0.5) ? scale * std::log(2.0 * p) : -scale * std::log(2.0 * (1.0 - p));
    }

    // Uniform index in 0..n-1 (n <= 2^32; modulo bias is negligible here).
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace gensm

#endif
