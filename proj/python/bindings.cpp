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
//
// Python module _gensm. Armadillo state crosses the boundary as numpy
// arrays by copy, so Python-side mutation of a returned array never aliases
// C++ state; write back through the exposed properties instead.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gensm/channel.hpp"
#include "gensm/core.hpp"
#include "gensm/experiment.hpp"
#include "gensm/precoder_opt.hpp"
#include "gensm/rng.hpp"
#include "gensm/se_metrics.hpp"

namespace py = pybind11;
using namespace gensm;

namespace
{

using cx = std::complex<double>;
using f_cx_array = py::array_t<cx, py::array::f_style | py::array::forcecast>;
using f_real_array = py::array_t<double, py::array::f_style | py::array::forcecast>;

arma::cx_mat to_cx_mat(const f_cx_array &arr)
{
    if (arr.ndim() != 2)
        throw std::invalid_argument("expected a 2-d complex array");
    arma::cx_mat out(arma::uword(arr.shape(0)), arma::uword(arr.shape(1)));
    std::memcpy(out.memptr(), arr.data(), sizeof(cx) * out.n_elem);
    return out;
}

arma::cx_vec to_cx_vec(const f_cx_array &arr)
{
    if (arr.ndim() != 1)
        throw std::invalid_argument("expected a 1-d complex array");
    arma::cx_vec out(arma::uword(arr.shape(0)));
    std::memcpy(out.memptr(), arr.data(), sizeof(cx) * out.n_elem);
    return out;
}

arma::vec to_vec(const f_real_array &arr)
{
    if (arr.ndim() != 1)
        throw std::invalid_argument("expected a 1-d real array");
    arma::vec out(arma::uword(arr.shape(0)));
    std::memcpy(out.memptr(), arr.data(), sizeof(double) * out.n_elem);
    return out;
}

py::array_t<cx> from_cx_mat(const arma::cx_mat &m)
{
    constexpr py::ssize_t isz = sizeof(cx);
    py::array_t<cx> out({py::ssize_t(m.n_rows), py::ssize_t(m.n_cols)},
                        {isz, isz * py::ssize_t(m.n_rows)});
    std::memcpy(out.mutable_data(), m.memptr(), sizeof(cx) * m.n_elem);
    return out;
}

py::array_t<double> from_mat(const arma::mat &m)
{
    constexpr py::ssize_t isz = sizeof(double);
    py::array_t<double> out({py::ssize_t(m.n_rows), py::ssize_t(m.n_cols)},
                            {isz, isz * py::ssize_t(m.n_rows)});
    std::memcpy(out.mutable_data(), m.memptr(), sizeof(double) * m.n_elem);
    return out;
}

py::array_t<cx> from_cx_vec(const arma::cx_vec &v)
{
    py::array_t<cx> out(py::ssize_t(v.n_elem));
    std::memcpy(out.mutable_data(), v.memptr(), sizeof(cx) * v.n_elem);
    return out;
}

py::array_t<double> from_vec(const arma::vec &v)
{
    py::array_t<double> out(py::ssize_t(v.n_elem));
    std::memcpy(out.mutable_data(), v.memptr(), sizeof(double) * v.n_elem);
    return out;
}

arma::uvec to_uvec(const std::vector<arma::uword> &v)
{
    arma::uvec out(v.size());
    for (arma::uword i = 0; i < out.n_elem; ++i)
        out(i) = v[i];
    return out;
}

std::vector<arma::cx_mat> to_channel_list(const std::vector<f_cx_array> &arrays)
{
    std::vector<arma::cx_mat> out;
    out.reserve(arrays.size());
    for (const auto &arr : arrays)
        out.push_back(to_cx_mat(arr));
    return out;
}

} // namespace

PYBIND11_MODULE(_gensm, m)
{
    m.doc() = "Spectral-efficiency simulation and hybrid precoder optimization for "
              "generalized-spatial-modulation mmWave MIMO. Matrices cross the boundary "
              "as numpy arrays (complex128, any layout; returned arrays are copies).";
    m.attr("__version__") = "1.0.0";

    py::class_<SystemConfig>(m, "SystemConfig",
                             "Array and power dimensioning: n_t transmit antennas in n_m "
                             "groups of n_k, n_rf chains carrying n_s streams, transmit "
                             "power rho and noise variance sigma2 (both linear).")
        .def(py::init<>())
        .def_readwrite("n_t", &SystemConfig::n_t)
        .def_readwrite("n_r", &SystemConfig::n_r)
        .def_readwrite("n_k", &SystemConfig::n_k)
        .def_readwrite("n_m", &SystemConfig::n_m)
        .def_readwrite("n_rf", &SystemConfig::n_rf)
        .def_readwrite("n_s", &SystemConfig::n_s)
        .def_readwrite("rho", &SystemConfig::rho)
        .def_readwrite("sigma2", &SystemConfig::sigma2)
        .def("validate", &SystemConfig::validate)
        .def("snr_db", &SystemConfig::snr_db)
        .def("with_snr_db", &SystemConfig::with_snr_db, py::arg("snr_db"),
             "Copy with rho scaled so that 10*log10(rho/sigma2) equals snr_db.")
        .def("__repr__", [](const SystemConfig &c) {
            std::ostringstream s;
            s << "SystemConfig(n_t=" << c.n_t << ", n_r=" << c.n_r << ", n_k=" << c.n_k
              << ", n_m=" << c.n_m << ", n_rf=" << c.n_rf << ", n_s=" << c.n_s
              << ", rho=" << c.rho << ", sigma2=" << c.sigma2 << ")";
            return s.str();
        });

    py::class_<AgcTable>(m, "AgcTable",
                         "The M legitimate antenna-group combinations; build with "
                         "enumerate_agcs().")
        .def_readonly("m", &AgcTable::m)
        .def_property_readonly(
            "combos",
            [](const AgcTable &t) {
                py::list out;
                for (const arma::uvec &u : t.combos)
                {
                    py::list combo;
                    for (arma::uword i = 0; i < u.n_elem; ++i)
                        combo.append(u(i));
                    out.append(combo);
                }
                return out;
            },
            "Active group labels per combination, 1-based, strictly increasing.");

    py::class_<HybridPrecoder>(m, "HybridPrecoder",
                               "Power allocation lambda_ (stacked per-combination blocks "
                               "of length n_s) and analog diagonal a.")
        .def(py::init<>())
        .def_property(
            "lambda_", [](const HybridPrecoder &p) { return from_vec(p.lambda); },
            [](HybridPrecoder &p, const f_real_array &v) { p.lambda = to_vec(v); },
            "Stacked power allocation; reassign to mutate.")
        .def_property(
            "a", [](const HybridPrecoder &p) { return from_cx_vec(p.a); },
            [](HybridPrecoder &p, const f_cx_array &v) { p.a = to_cx_vec(v); },
            "Analog precoder diagonal; reassign to mutate.")
        .def(
            "lambda_block",
            [](const HybridPrecoder &p, arma::uword m_idx, arma::uword n_s) {
                return from_vec(p.lambda_block(m_idx, n_s));
            },
            py::arg("m_idx"), py::arg("n_s"))
        .def_static("uniform", &HybridPrecoder::uniform, py::arg("cfg"), py::arg("m"),
                    "All-ones allocation with the constant-magnitude analog vector: the "
                    "non-optimized reference precoder.")
        .def("validate", &HybridPrecoder::validate, py::arg("cfg"), py::arg("m"));

    py::class_<ChannelParams>(m, "ChannelParams",
                              "Clustered channel draw parameters; angle_spread is in "
                              "radians, element_spacing in wavelengths.")
        .def(py::init<>())
        .def_readwrite("n_cl", &ChannelParams::n_cl)
        .def_readwrite("n_ray", &ChannelParams::n_ray)
        .def_readwrite("angle_spread", &ChannelParams::angle_spread)
        .def_readwrite("element_spacing", &ChannelParams::element_spacing)
        .def_readwrite("seed", &ChannelParams::seed)
        .def("validate", &ChannelParams::validate);

    py::class_<Rng>(m, "Rng",
                    "Deterministic stream generator; identical seeds produce identical "
                    "draws on every platform.")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("uniform", &Rng::uniform)
        .def("normal", &Rng::normal)
        .def("cgauss", &Rng::cgauss)
        .def("laplace", &Rng::laplace, py::arg("scale"));

    py::class_<McEstimate>(m, "McEstimate", "Monte-Carlo mean with its standard error.")
        .def_readonly("estimate", &McEstimate::estimate)
        .def_readonly("std_err", &McEstimate::std_err);

    py::class_<SeReport>(m, "SeReport",
                         "Spectral-efficiency metrics for one (channel, precoder, snr) "
                         "point, all in bits/s/Hz.")
        .def_readonly("snr_db", &SeReport::snr_db)
        .def_readonly("r_lb", &SeReport::r_lb)
        .def_readonly("r_shifted", &SeReport::r_shifted)
        .def_readonly("r_mc", &SeReport::r_mc)
        .def_readonly("r_mc_std_err", &SeReport::r_mc_std_err)
        .def_readonly("c_wf", &SeReport::c_wf);

    py::class_<OptimizerSettings>(m, "OptimizerSettings",
                                  "Barrier scales, line-search constants and iteration "
                                  "caps of the two-step ascent.")
        .def(py::init<>())
        .def_readwrite("t_b", &OptimizerSettings::t_b)
        .def_readwrite("p_norm", &OptimizerSettings::p_norm)
        .def_readwrite("step_init", &OptimizerSettings::step_init)
        .def_readwrite("backtrack_ratio", &OptimizerSettings::backtrack_ratio)
        .def_readwrite("armijo_c", &OptimizerSettings::armijo_c)
        .def_readwrite("grad_tol", &OptimizerSettings::grad_tol)
        .def_readwrite("max_inner", &OptimizerSettings::max_inner)
        .def_readwrite("max_outer", &OptimizerSettings::max_outer)
        .def_readwrite("outer_tol", &OptimizerSettings::outer_tol)
        .def("validate", &OptimizerSettings::validate);

    py::class_<InnerResult>(m, "InnerResult",
                            "Outcome of one gradient-ascent sub-problem; converged is "
                            "false only when the iteration cap stopped it.")
        .def_readonly("iterations", &InnerResult::iterations)
        .def_readonly("converged", &InnerResult::converged);

    py::class_<OuterRecord>(m, "OuterRecord",
                            "Accepted state after one alternation sweep.")
        .def_readonly("r_lb", &OuterRecord::r_lb)
        .def_readonly("lambda_residual", &OuterRecord::lambda_residual)
        .def_readonly("a_residual", &OuterRecord::a_residual)
        .def_readonly("digital_iterations", &OuterRecord::digital_iterations)
        .def_readonly("analog_iterations", &OuterRecord::analog_iterations)
        .def_readonly("digital_converged", &OuterRecord::digital_converged)
        .def_readonly("analog_converged", &OuterRecord::analog_converged);

    py::class_<OptimizationTrace>(m, "OptimizationTrace",
                                  "Initial, per-sweep, relaxed and projected bounds of "
                                  "one two-step run.")
        .def_readonly("r_lb_initial", &OptimizationTrace::r_lb_initial)
        .def_readonly("outer", &OptimizationTrace::outer)
        .def_readonly("r_lb_relaxed", &OptimizationTrace::r_lb_relaxed)
        .def_readonly("r_lb_projected", &OptimizationTrace::r_lb_projected)
        .def_readonly("final_digital_iterations", &OptimizationTrace::final_digital_iterations)
        .def_readonly("converged", &OptimizationTrace::converged);

    py::class_<PartitionReport>(m, "PartitionReport",
                                "Ensemble-mean bound of one (n_k, n_m) candidate.")
        .def_readonly("n_k", &PartitionReport::n_k)
        .def_readonly("n_m", &PartitionReport::n_m)
        .def_readonly("mean_r_lb", &PartitionReport::mean_r_lb);

    py::class_<PartitionSelection>(m, "PartitionSelection",
                                   "Winning partition plus the per-candidate reports in "
                                   "ascending n_m order.")
        .def_readonly("n_k", &PartitionSelection::n_k)
        .def_readonly("n_m", &PartitionSelection::n_m)
        .def_readonly("reports", &PartitionSelection::reports);

    py::class_<GradCheckResult>(m, "GradCheckResult",
                                "Max relative coordinate error of each analytic gradient "
                                "against central finite differences.")
        .def_readonly("lambda_rel_err", &GradCheckResult::lambda_rel_err)
        .def_readonly("a_rel_err", &GradCheckResult::a_rel_err);

    py::enum_<ExperimentMode>(m, "ExperimentMode")
        .value("bound_tightness", ExperimentMode::bound_tightness)
        .value("optimize", ExperimentMode::optimize)
        .value("sweep", ExperimentMode::sweep)
        .value("partition_select", ExperimentMode::partition_select)
        .value("gradcheck", ExperimentMode::gradcheck);

    py::class_<ExperimentConfig>(m, "ExperimentConfig",
                                 "Fully resolved batch-run description; rho on the "
                                 "system config is overwritten per snr point.")
        .def(py::init<>())
        .def_readwrite("system", &ExperimentConfig::system)
        .def_readwrite("channel", &ExperimentConfig::channel)
        .def_readwrite("optimizer", &ExperimentConfig::optimizer)
        .def_readwrite("snr_grid_db", &ExperimentConfig::snr_grid_db)
        .def_readwrite("n_channels", &ExperimentConfig::n_channels)
        .def_readwrite("n_mc_samples", &ExperimentConfig::n_mc_samples)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("mode", &ExperimentConfig::mode)
        .def_readwrite("output_path", &ExperimentConfig::output_path)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("angle_spread_deg", &ExperimentConfig::angle_spread_deg)
        .def("validate", &ExperimentConfig::validate);

    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("enumerate_agcs", &enumerate_agcs, py::arg("n_m"), py::arg("n_rf"),
          "First 2^floor(log2 C(n_m, n_rf)) subsets of {1..n_m} of size n_rf, in "
          "lexicographic order.");

    m.def(
        "selection_matrix",
        [](const std::vector<arma::uword> &u, arma::uword n_k, arma::uword n_m) {
            return from_mat(selection_matrix(to_uvec(u), n_k, n_m).entries);
        },
        py::arg("u"), py::arg("n_k"), py::arg("n_m"),
        "0/1 group-selection matrix for the 1-based combo u, as an (n_t, len(u)) array.");

    m.def(
        "agc_response",
        [](const f_cx_array &h, const f_cx_array &a, const std::vector<arma::uword> &u,
           arma::uword n_k) {
            return from_cx_mat(agc_response(to_cx_mat(h), to_cx_vec(a), to_uvec(u), n_k));
        },
        py::arg("h"), py::arg("a"), py::arg("u"), py::arg("n_k"),
        "Columns of H @ diag(a) @ C for the combo u.");

    m.def(
        "effective_gain",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           arma::uword m_idx, const SystemConfig &cfg) {
            return from_cx_mat(effective_gain(to_cx_mat(h), p, table, m_idx, cfg));
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("m_idx"), py::arg("cfg"),
        "Effective gain H @ diag(a) @ C_m @ diag(sqrt(lambda_m)) of combination m_idx.");

    m.def(
        "covariance",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           arma::uword n_idx, const SystemConfig &cfg) {
            return from_cx_mat(covariance(to_cx_mat(h), p, table, n_idx, cfg));
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("n_idx"), py::arg("cfg"),
        "Receive covariance sigma2*I + (rho/n_s) G_n G_n^H of combination n_idx.");

    m.def(
        "array_response",
        [](double angle, arma::uword n, double spacing) {
            return from_cx_vec(array_response(angle, n, spacing));
        },
        py::arg("angle"), py::arg("n"), py::arg("spacing"),
        "Unit-norm uniform-linear-array steering vector.");

    m.def(
        "sample_channel",
        [](const ChannelParams &params, const SystemConfig &cfg) {
            return from_cx_mat(sample_channel(params, cfg));
        },
        py::arg("params"), py::arg("cfg"),
        "One clustered channel draw seeded from params.seed.");

    m.def(
        "sample_channel_with",
        [](const ChannelParams &params, const SystemConfig &cfg, Rng &rng) {
            return from_cx_mat(sample_channel(params, cfg, rng));
        },
        py::arg("params"), py::arg("cfg"), py::arg("rng"),
        "One clustered channel draw consuming the given stream.");

    m.def(
        "save_channel",
        [](const f_cx_array &h, const std::string &path) { save_channel(to_cx_mat(h), path); },
        py::arg("h"), py::arg("path"), "Full-precision text dump of a channel matrix.");

    m.def(
        "load_channel", [](const std::string &path) { return from_cx_mat(load_channel(path)); },
        py::arg("path"));

    m.def(
        "se_lower_bound",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg) { return se_lower_bound(to_cx_mat(h), p, table, cfg); },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"),
        "Closed-form lower bound on the mutual information, bits/s/Hz.");

    m.def("se_bound_shift", &se_bound_shift, py::arg("cfg"),
          "Asymptotic offset n_r*(1 - log2 e); r_shifted = r_lb - se_bound_shift(cfg).");

    m.def(
        "se_monte_carlo",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg, arma::uword n_samples, Rng &rng) {
            return se_monte_carlo(to_cx_mat(h), p, table, cfg, n_samples, rng);
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"), py::arg("n_samples"),
        py::arg("rng"), "Monte-Carlo estimate of the mutual information (>= 1000 samples).");

    m.def(
        "waterfilling_capacity",
        [](const f_cx_array &h, const SystemConfig &cfg) {
            return waterfilling_capacity(to_cx_mat(h), cfg);
        },
        py::arg("h"), py::arg("cfg"),
        "Waterfilling capacity of the unconstrained channel under total power rho.");

    m.def(
        "se_report",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg, arma::uword n_samples, Rng &rng) {
            return se_report(to_cx_mat(h), p, table, cfg, n_samples, rng);
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"), py::arg("n_samples"),
        py::arg("rng"), "Bundles bound, shifted bound, Monte-Carlo rate and capacity.");

    m.def(
        "grad_lambda",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg, arma::uword m_idx) {
            return from_vec(grad_lambda(to_cx_mat(h), p, table, cfg, m_idx));
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"), py::arg("m_idx"),
        "Gradient of the bound in one allocation block; requires lambda_ > 0.");

    m.def(
        "grad_lambda_full",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg) {
            return from_vec(grad_lambda_full(to_cx_mat(h), p, table, cfg));
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"),
        "Stacked gradient of the bound in the full allocation; requires lambda_ > 0.");

    m.def(
        "grad_a",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg) { return from_cx_vec(grad_a(to_cx_mat(h), p, table, cfg)); },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"),
        "Conjugate-coordinate gradient of the bound in the analog vector.");

    m.def(
        "optimize_digital",
        [](const f_cx_array &h, const f_cx_array &a, const AgcTable &table,
           const SystemConfig &cfg, const OptimizerSettings &settings,
           const f_real_array &lambda0) {
            auto [lam, res] =
                optimize_digital(to_cx_mat(h), to_cx_vec(a), table, cfg, settings, to_vec(lambda0));
            return py::make_tuple(from_vec(lam), res);
        },
        py::arg("h"), py::arg("a"), py::arg("table"), py::arg("cfg"), py::arg("settings"),
        py::arg("lambda0"),
        "Barrier ascent over the power allocation on the fixed-sum plane.");

    m.def(
        "optimize_analog",
        [](const f_cx_array &h, const f_real_array &lambda, const AgcTable &table,
           const SystemConfig &cfg, const OptimizerSettings &settings, const f_cx_array &a0) {
            auto [a, res] =
                optimize_analog(to_cx_mat(h), to_vec(lambda), table, cfg, settings, to_cx_vec(a0));
            return py::make_tuple(from_cx_vec(a), res);
        },
        py::arg("h"), py::arg("lambda_"), py::arg("table"), py::arg("cfg"), py::arg("settings"),
        py::arg("a0"), "Barrier ascent over the analog vector, strictly inside the norm ball.");

    m.def(
        "project_to_feasible",
        [](const f_cx_array &a, arma::uword n_k) {
            return from_cx_vec(project_to_feasible(to_cx_vec(a), n_k));
        },
        py::arg("a"), py::arg("n_k"),
        "Nearest phase-shifter-realizable vector: constant modulus 1/sqrt(n_k).");

    m.def(
        "two_step",
        [](const f_cx_array &h, const AgcTable &table, const SystemConfig &cfg,
           const OptimizerSettings &settings) {
            return two_step(to_cx_mat(h), table, cfg, settings);
        },
        py::arg("h"), py::arg("table"), py::arg("cfg"),
        py::arg("settings") = OptimizerSettings{},
        "Alternating digital/analog ascent plus projection; returns (precoder, trace).");

    m.def(
        "select_partition",
        [](const SystemConfig &base, const std::vector<f_cx_array> &channels,
           const OptimizerSettings &settings, bool collect_traces) {
            std::vector<OptimizationTrace> traces;
            const PartitionSelection sel =
                select_partition(base, to_channel_list(channels), settings,
                                 collect_traces ? &traces : nullptr);
            return py::make_tuple(sel, traces);
        },
        py::arg("base"), py::arg("channels"), py::arg("settings") = OptimizerSettings{},
        py::arg("collect_traces") = false,
        "Best (n_k, n_m) factorization of n_t by ensemble-mean optimized bound; returns "
        "(selection, traces).");

    m.def("mode_name", &mode_name, py::arg("mode"));
    m.def("mode_from_name", &mode_from_name, py::arg("name"));

    m.def("parse_config_file", &parse_config_file, py::arg("path"),
          "Parses a flat 'key = value' experiment config; unknown keys are errors.");

    m.def(
        "derive_seed",
        [](std::uint64_t master_seed, std::uint64_t index, const std::string &tag) {
            return derive_seed(master_seed, index, tag);
        },
        py::arg("master_seed"), py::arg("index"), py::arg("tag"),
        "Deterministic per-(index, tag) stream seed, identical across modes and runs.");

    m.def("random_interior_precoder", &random_interior_precoder, py::arg("cfg"), py::arg("m"),
          py::arg("rng"), "Random precoder strictly inside both barrier domains.");

    m.def(
        "check_gradients",
        [](const f_cx_array &h, const HybridPrecoder &p, const AgcTable &table,
           const SystemConfig &cfg, double lambda_step, double a_step) {
            return check_gradients(to_cx_mat(h), p, table, cfg, lambda_step, a_step);
        },
        py::arg("h"), py::arg("p"), py::arg("table"), py::arg("cfg"),
        py::arg("lambda_step") = 1e-5, py::arg("a_step") = 1e-6,
        "Central-finite-difference validation of both analytic gradients.");

    m.def(
        "run_experiment",
        [](const ExperimentConfig &cfg) {
            std::ostringstream summary;
            const int rc = run_experiment(cfg, summary);
            return py::make_tuple(rc, summary.str());
        },
        py::arg("config"),
        "Runs the configured mode and writes the CSV artifact; returns (exit_code, "
        "summary_text).");
}
