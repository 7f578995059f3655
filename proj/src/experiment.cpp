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

#include "gensm/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gensm/se_metrics.hpp"

namespace gensm
{

namespace
{

constexpr double pi = 3.14159265358979323846;

std::string g17(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(const std::string &key, const std::string &value)
{
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try
    {
        v = std::stoull(value, &pos);
    }
    catch (const std::exception &)
    {
        pos = std::string::npos;
    }
    if (pos != value.size() || value.empty() || value[0] == '-')
        throw std::invalid_argument("config: key '" + key + "' needs a non-negative integer, got '" +
                                    value + "'");
    return v;
}

double parse_double(const std::string &key, const std::string &value)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(value, &pos);
    }
    catch (const std::exception &)
    {
        pos = std::string::npos;
    }
    if (pos != value.size() || value.empty())
        throw std::invalid_argument("config: key '" + key + "' needs a number, got '" + value +
                                    "'");
    return v;
}

std::vector<double> parse_double_list(const std::string &key, const std::string &value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw std::invalid_argument("config: key '" + key + "' needs a comma-separated list");
    return out;
}

std::string timestamp_utc()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Runs fn(0..n-1) across up to `threads` workers. Each index owns its output
// slot and RNG streams, so scheduling never affects results; the first
// exception wins and is rethrown after all workers join.
template <typename Fn> void parallel_for(arma::uword n, arma::uword threads, Fn &&fn)
{
    if (threads <= 1 || n <= 1)
    {
        for (arma::uword i = 0; i < n; ++i)
            fn(i);
        return;
    }
    threads = std::min<arma::uword>(threads, n);
    std::atomic<arma::uword> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;)
        {
            const arma::uword i = next.fetch_add(1);
            if (i >= n)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err)
                    err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (arma::uword t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

// The resolved configuration, echoed atop every artifact in a fixed key
// order. The thread count is execution detail, not configuration, and is
// deliberately absent so parallelism cannot alter the file.
std::string echo_block(const ExperimentConfig &cfg)
{
    std::ostringstream out;
    out << "# gensm-sim results\n";
    out << "# mode = " << mode_name(cfg.mode) << "\n";
    out << "# master_seed = " << cfg.master_seed << "\n";
    out << "# n_channels = " << cfg.n_channels << "\n";
    out << "# n_mc_samples = " << cfg.n_mc_samples << "\n";
    out << "# snr_grid_db = ";
    for (std::size_t j = 0; j < cfg.snr_grid_db.size(); ++j)
        out << (j ? "," : "") << g17(cfg.snr_grid_db[j]);
    out << "\n";
    out << "# output_path = " << cfg.output_path << "\n";
    out << "# system.n_t = " << cfg.system.n_t << "\n";
    out << "# system.n_r = " << cfg.system.n_r << "\n";
    out << "# system.n_k = " << cfg.system.n_k << "\n";
    out << "# system.n_m = " << cfg.system.n_m << "\n";
    out << "# system.n_rf = " << cfg.system.n_rf << "\n";
    out << "# system.n_s = " << cfg.system.n_s << "\n";
    out << "# system.sigma2 = " << g17(cfg.system.sigma2) << "\n";
    out << "# channel.n_cl = " << cfg.channel.n_cl << "\n";
    out << "# channel.n_ray = " << cfg.channel.n_ray << "\n";
    out << "# channel.angle_spread_deg = " << g17(cfg.angle_spread_deg) << "\n";
    out << "# channel.element_spacing = " << g17(cfg.channel.element_spacing) << "\n";
    out << "# optimizer.t_b = " << g17(cfg.optimizer.t_b) << "\n";
    out << "# optimizer.p_norm = " << cfg.optimizer.p_norm << "\n";
    out << "# optimizer.step_init = " << g17(cfg.optimizer.step_init) << "\n";
    out << "# optimizer.backtrack_ratio = " << g17(cfg.optimizer.backtrack_ratio) << "\n";
    out << "# optimizer.armijo_c = " << g17(cfg.optimizer.armijo_c) << "\n";
    out << "# optimizer.grad_tol = " << g17(cfg.optimizer.grad_tol) << "\n";
    out << "# optimizer.max_inner = " << cfg.optimizer.max_inner << "\n";
    out << "# optimizer.max_outer = " << cfg.optimizer.max_outer << "\n";
    out << "# optimizer.outer_tol = " << g17(cfg.optimizer.outer_tol) << "\n";
    return out.str();
}

struct ModeOutput
{
    std::string header;
    std::vector<std::string> lines;
    bool finite_ok = true;
    arma::uword optimizer_runs = 0;
    arma::uword capped_runs = 0;
};

bool all_finite(std::initializer_list<double> vals)
{
    for (double v : vals)
        if (!std::isfinite(v))
            return false;
    return true;
}

ModeOutput run_bound_tightness(const ExperimentConfig &cfg, std::ostream &summary)
{
    const arma::uword nj = cfg.snr_grid_db.size();
    const AgcTable table = enumerate_agcs(cfg.system.n_m, cfg.system.n_rf);
    const HybridPrecoder prec = HybridPrecoder::uniform(cfg.system, table.m);

    struct Rec
    {
        double r_lb, r_shifted, r_mc, r_mc_se, c_wf;
    };
    std::vector<Rec> recs(cfg.n_channels * nj);

    parallel_for(cfg.n_channels, cfg.threads, [&](arma::uword i) {
        Rng ch_rng(derive_seed(cfg.master_seed, i, "channel"));
        const arma::cx_mat h = sample_channel(cfg.channel, cfg.system, ch_rng);
        for (arma::uword j = 0; j < nj; ++j)
        {
            const SystemConfig sys = cfg.system.with_snr_db(cfg.snr_grid_db[j]);
            const double r_lb = se_lower_bound(h, prec, table, sys);
            Rng mc_rng(derive_seed(cfg.master_seed, i, "mc:uniform:" + std::to_string(j)));
            const McEstimate mc = se_monte_carlo(h, prec, table, sys, cfg.n_mc_samples, mc_rng);
            recs[i * nj + j] = {r_lb, r_lb - se_bound_shift(sys), mc.estimate, mc.std_err,
                                waterfilling_capacity(h, sys)};
        }
    });

    ModeOutput out;
    out.header = "snr_db,channel_index,r_lb,r_shifted,r_mc,r_mc_stderr,c_wf";
    summary << "bound-tightness: " << cfg.n_channels << " channels, " << cfg.n_mc_samples
            << " MC samples per point\n";
    summary << "   snr_db  mean_r_lb  mean_r_shifted  mean_r_mc  mean_c_wf\n";
    for (arma::uword j = 0; j < nj; ++j)
    {
        double s_lb = 0.0, s_sh = 0.0, s_mc = 0.0, s_wf = 0.0;
        for (arma::uword i = 0; i < cfg.n_channels; ++i)
        {
            const Rec &r = recs[i * nj + j];
            out.finite_ok =
                out.finite_ok && all_finite({r.r_lb, r.r_shifted, r.r_mc, r.r_mc_se, r.c_wf});
            out.lines.push_back(g17(cfg.snr_grid_db[j]) + "," + std::to_string(i) + "," +
                                g17(r.r_lb) + "," + g17(r.r_shifted) + "," + g17(r.r_mc) + "," +
                                g17(r.r_mc_se) + "," + g17(r.c_wf));
            s_lb += r.r_lb;
            s_sh += r.r_shifted;
            s_mc += r.r_mc;
            s_wf += r.c_wf;
        }
        const double n = double(cfg.n_channels);
        char buf[128];
        std::snprintf(buf, sizeof(buf), " %8.2f %10.4f %15.4f %10.4f %10.4f\n",
                      cfg.snr_grid_db[j], s_lb / n, s_sh / n, s_mc / n, s_wf / n);
        summary << buf;
    }
    return out;
}

ModeOutput run_optimize(const ExperimentConfig &cfg, std::ostream &summary)
{
    const arma::uword nj = cfg.snr_grid_db.size();
    const AgcTable table = enumerate_agcs(cfg.system.n_m, cfg.system.n_rf);

    struct Rec
    {
        double r_init, r_relaxed, r_final, r_mc, r_mc_se;
        arma::uword sweeps;
        bool converged;
    };
    std::vector<Rec> recs(cfg.n_channels * nj);

    parallel_for(cfg.n_channels, cfg.threads, [&](arma::uword i) {
        Rng ch_rng(derive_seed(cfg.master_seed, i, "channel"));
        const arma::cx_mat h = sample_channel(cfg.channel, cfg.system, ch_rng);
        for (arma::uword j = 0; j < nj; ++j)
        {
            const SystemConfig sys = cfg.system.with_snr_db(cfg.snr_grid_db[j]);
            auto [prec, trace] = two_step(h, table, sys, cfg.optimizer);
            Rng mc_rng(derive_seed(cfg.master_seed, i, "mc:optimized:" + std::to_string(j)));
            const McEstimate mc = se_monte_carlo(h, prec, table, sys, cfg.n_mc_samples, mc_rng);
            recs[i * nj + j] = {trace.r_lb_initial, trace.r_lb_relaxed, trace.r_lb_projected,
                                mc.estimate,        mc.std_err,         trace.outer.size(),
                                trace.converged};
        }
    });

    ModeOutput out;
    out.header = "snr_db,channel_index,r_lb_initial,r_lb_relaxed,r_lb_final,r_mc,r_mc_stderr,"
                 "outer_sweeps,converged";
    summary << "optimize: " << cfg.n_channels << " channels\n";
    summary << "   snr_db  mean_r_lb_final  mean_r_mc  converged\n";
    for (arma::uword j = 0; j < nj; ++j)
    {
        double s_fin = 0.0, s_mc = 0.0;
        arma::uword conv = 0;
        for (arma::uword i = 0; i < cfg.n_channels; ++i)
        {
            const Rec &r = recs[i * nj + j];
            out.finite_ok =
                out.finite_ok && all_finite({r.r_init, r.r_relaxed, r.r_final, r.r_mc, r.r_mc_se});
            ++out.optimizer_runs;
            if (!r.converged)
                ++out.capped_runs;
            out.lines.push_back(g17(cfg.snr_grid_db[j]) + "," + std::to_string(i) + "," +
                                g17(r.r_init) + "," + g17(r.r_relaxed) + "," + g17(r.r_final) +
                                "," + g17(r.r_mc) + "," + g17(r.r_mc_se) + "," +
                                std::to_string(r.sweeps) + "," + (r.converged ? "1" : "0"));
            s_fin += r.r_final;
            s_mc += r.r_mc;
            conv += r.converged ? 1 : 0;
        }
        const double n = double(cfg.n_channels);
        char buf[128];
        std::snprintf(buf, sizeof(buf), " %8.2f %16.4f %10.4f  %llu/%llu\n", cfg.snr_grid_db[j],
                      s_fin / n, s_mc / n, static_cast<unsigned long long>(conv),
                      static_cast<unsigned long long>(cfg.n_channels));
        summary << buf;
    }
    return out;
}

ModeOutput run_sweep(const ExperimentConfig &cfg, std::ostream &summary)
{
    const arma::uword nj = cfg.snr_grid_db.size();
    const AgcTable table = enumerate_agcs(cfg.system.n_m, cfg.system.n_rf);
    const HybridPrecoder uniform = HybridPrecoder::uniform(cfg.system, table.m);

    struct Rec
    {
        double uni, uni_se, opt, opt_se, wf;
        bool converged;
    };
    std::vector<Rec> recs(cfg.n_channels * nj);

    parallel_for(cfg.n_channels, cfg.threads, [&](arma::uword i) {
        Rng ch_rng(derive_seed(cfg.master_seed, i, "channel"));
        const arma::cx_mat h = sample_channel(cfg.channel, cfg.system, ch_rng);
        for (arma::uword j = 0; j < nj; ++j)
        {
            const SystemConfig sys = cfg.system.with_snr_db(cfg.snr_grid_db[j]);
            Rng mc_u(derive_seed(cfg.master_seed, i, "mc:uniform:" + std::to_string(j)));
            const McEstimate mu = se_monte_carlo(h, uniform, table, sys, cfg.n_mc_samples, mc_u);
            auto [prec, trace] = two_step(h, table, sys, cfg.optimizer);
            Rng mc_o(derive_seed(cfg.master_seed, i, "mc:optimized:" + std::to_string(j)));
            const McEstimate mo = se_monte_carlo(h, prec, table, sys, cfg.n_mc_samples, mc_o);
            recs[i * nj + j] = {mu.estimate, mu.std_err,
                                mo.estimate, mo.std_err,
                                waterfilling_capacity(h, sys), trace.converged};
        }
    });

    ModeOutput out;
    out.header = "snr_db,channel_index,scheme,se,se_stderr";
    summary << "sweep: " << cfg.n_channels << " channels\n";
    summary << "   snr_db  mean_uniform  mean_optimized  mean_waterfilling\n";
    for (arma::uword j = 0; j < nj; ++j)
    {
        double s_u = 0.0, s_o = 0.0, s_w = 0.0;
        for (arma::uword i = 0; i < cfg.n_channels; ++i)
        {
            const Rec &r = recs[i * nj + j];
            out.finite_ok = out.finite_ok && all_finite({r.uni, r.opt, r.wf});
            ++out.optimizer_runs;
            if (!r.converged)
                ++out.capped_runs;
            const std::string prefix = g17(cfg.snr_grid_db[j]) + "," + std::to_string(i) + ",";
            out.lines.push_back(prefix + "uniform," + g17(r.uni) + "," + g17(r.uni_se));
            out.lines.push_back(prefix + "optimized," + g17(r.opt) + "," + g17(r.opt_se));
            out.lines.push_back(prefix + "waterfilling," + g17(r.wf) + ",0");
            s_u += r.uni;
            s_o += r.opt;
            s_w += r.wf;
        }
        const double n = double(cfg.n_channels);
        char buf[128];
        std::snprintf(buf, sizeof(buf), " %8.2f %13.4f %15.4f %18.4f\n", cfg.snr_grid_db[j],
                      s_u / n, s_o / n, s_w / n);
        summary << buf;
    }
    return out;
}

ModeOutput run_partition_select(const ExperimentConfig &cfg, std::ostream &summary)
{
    const arma::uword nj = cfg.snr_grid_db.size();

    std::vector<arma::cx_mat> channels(cfg.n_channels);
    for (arma::uword i = 0; i < cfg.n_channels; ++i)
    {
        Rng ch_rng(derive_seed(cfg.master_seed, i, "channel"));
        channels[i] = sample_channel(cfg.channel, cfg.system, ch_rng);
    }

    std::vector<PartitionSelection> sels(nj);
    std::vector<std::vector<OptimizationTrace>> traces(nj);
    parallel_for(nj, cfg.threads, [&](arma::uword j) {
        const SystemConfig sys = cfg.system.with_snr_db(cfg.snr_grid_db[j]);
        sels[j] = select_partition(sys, channels, cfg.optimizer, &traces[j]);
    });

    ModeOutput out;
    out.header = "snr_db,n_k,n_m,mean_r_lb,selected";
    summary << "partition-select: " << cfg.n_channels << " channels\n";
    for (arma::uword j = 0; j < nj; ++j)
    {
        const PartitionSelection &sel = sels[j];
        for (const PartitionReport &rep : sel.reports)
        {
            out.finite_ok = out.finite_ok && std::isfinite(rep.mean_r_lb);
            const bool chosen = (rep.n_k == sel.n_k && rep.n_m == sel.n_m);
            out.lines.push_back(g17(cfg.snr_grid_db[j]) + "," + std::to_string(rep.n_k) + "," +
                                std::to_string(rep.n_m) + "," + g17(rep.mean_r_lb) + "," +
                                (chosen ? "1" : "0"));
        }
        for (const OptimizationTrace &tr : traces[j])
        {
            ++out.optimizer_runs;
            if (!tr.converged)
                ++out.capped_runs;
        }

        std::ostringstream line;
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %8.2f  selected (%llu,%llu) ", cfg.snr_grid_db[j],
                      static_cast<unsigned long long>(sel.n_k),
                      static_cast<unsigned long long>(sel.n_m));
        line << buf;
        for (const PartitionReport &rep : sel.reports)
        {
            std::snprintf(buf, sizeof(buf), " (%llu,%llu)=%.4f",
                          static_cast<unsigned long long>(rep.n_k),
                          static_cast<unsigned long long>(rep.n_m), rep.mean_r_lb);
            line << buf;
        }
        summary << line.str() << "\n";
    }
    return out;
}

ModeOutput run_gradcheck(const ExperimentConfig &cfg, std::ostream &summary)
{
    const arma::uword nj = cfg.snr_grid_db.size();
    const AgcTable table = enumerate_agcs(cfg.system.n_m, cfg.system.n_rf);

    struct Rec
    {
        double lam_err, a_err;
    };
    std::vector<Rec> recs(cfg.n_channels);

    parallel_for(cfg.n_channels, cfg.threads, [&](arma::uword i) {
        Rng ch_rng(derive_seed(cfg.master_seed, i, "channel"));
        const arma::cx_mat h = sample_channel(cfg.channel, cfg.system, ch_rng);
        const SystemConfig sys = cfg.system.with_snr_db(cfg.snr_grid_db[i % nj]);
        Rng prec_rng(derive_seed(cfg.master_seed, i, "gradcheck"));
        const HybridPrecoder p = random_interior_precoder(sys, table.m, prec_rng);
        const GradCheckResult res = check_gradients(h, p, table, sys);
        recs[i] = {res.lambda_rel_err, res.a_rel_err};
    });

    ModeOutput out;
    out.header = "instance,kind,rel_err";
    double max_lam = 0.0, max_a = 0.0;
    for (arma::uword i = 0; i < cfg.n_channels; ++i)
    {
        out.finite_ok = out.finite_ok && all_finite({recs[i].lam_err, recs[i].a_err});
        out.lines.push_back(std::to_string(i) + ",lambda," + g17(recs[i].lam_err));
        out.lines.push_back(std::to_string(i) + ",analog," + g17(recs[i].a_err));
        max_lam = std::max(max_lam, recs[i].lam_err);
        max_a = std::max(max_a, recs[i].a_err);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "gradcheck: %llu instances, max lambda rel err = %.3e, max analog rel err = "
                  "%.3e\n",
                  static_cast<unsigned long long>(cfg.n_channels), max_lam, max_a);
    summary << buf;
    return out;
}

} // namespace

std::string mode_name(ExperimentMode m)
{
    switch (m)
    {
        case ExperimentMode::bound_tightness: return "bound-tightness";
        case ExperimentMode::optimize: return "optimize";
        case ExperimentMode::sweep: return "sweep";
        case ExperimentMode::partition_select: return "partition-select";
        case ExperimentMode::gradcheck: return "gradcheck";
    }
    return "unknown";
}

ExperimentMode mode_from_name(const std::string &name)
{
    if (name == "bound-tightness")
        return ExperimentMode::bound_tightness;
    if (name == "optimize")
        return ExperimentMode::optimize;
    if (name == "sweep")
        return ExperimentMode::sweep;
    if (name == "partition-select")
        return ExperimentMode::partition_select;
    if (name == "gradcheck")
        return ExperimentMode::gradcheck;
    throw std::invalid_argument(
        "unknown mode '" + name +
        "' (expected bound-tightness, optimize, sweep, partition-select or gradcheck)");
}

void ExperimentConfig::validate() const
{
    system.validate();
    channel.validate();
    optimizer.validate();
    if (snr_grid_db.empty())
        throw std::invalid_argument("config: snr_grid_db must not be empty");
    for (std::size_t j = 1; j < snr_grid_db.size(); ++j)
        if (!(snr_grid_db[j] > snr_grid_db[j - 1]))
            throw std::invalid_argument("config: snr_grid_db must be strictly increasing");
    for (double s : snr_grid_db)
        if (!std::isfinite(s))
            throw std::invalid_argument("config: snr_grid_db entries must be finite");
    if (n_channels < 1)
        throw std::invalid_argument("config: n_channels must be >= 1");
    if (n_mc_samples < 1000)
        throw std::invalid_argument("config: n_mc_samples must be >= 1000");
    if (threads < 1)
        throw std::invalid_argument("config: threads must be >= 1");
    if (output_path.empty())
        throw std::invalid_argument("config: output_path is required (or pass --out)");
}

ExperimentConfig parse_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path);

    ExperimentConfig cfg;
    std::set<std::string> seen;
    bool has_mode = false, has_grid = false;
    bool has_nt = false, has_nr = false, has_nrf = false, has_nk = false, has_nm = false,
         has_ns = false;

    std::string line;
    arma::uword lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": empty key or value");
        if (!seen.insert(key).second)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");

        if (key == "mode")
        {
            cfg.mode = mode_from_name(value);
            has_mode = true;
        }
        else if (key == "master_seed")
            cfg.master_seed = parse_u64(key, value);
        else if (key == "n_channels")
            cfg.n_channels = parse_u64(key, value);
        else if (key == "n_mc_samples")
            cfg.n_mc_samples = parse_u64(key, value);
        else if (key == "threads")
            cfg.threads = parse_u64(key, value);
        else if (key == "snr_grid_db")
        {
            cfg.snr_grid_db = parse_double_list(key, value);
            has_grid = true;
        }
        else if (key == "output_path")
            cfg.output_path = value;
        else if (key == "system.n_t")
        {
            cfg.system.n_t = parse_u64(key, value);
            has_nt = true;
        }
        else if (key == "system.n_r")
        {
            cfg.system.n_r = parse_u64(key, value);
            has_nr = true;
        }
        else if (key == "system.n_k")
        {
            cfg.system.n_k = parse_u64(key, value);
            has_nk = true;
        }
        else if (key == "system.n_m")
        {
            cfg.system.n_m = parse_u64(key, value);
            has_nm = true;
        }
        else if (key == "system.n_rf")
        {
            cfg.system.n_rf = parse_u64(key, value);
            has_nrf = true;
        }
        else if (key == "system.n_s")
        {
            cfg.system.n_s = parse_u64(key, value);
            has_ns = true;
        }
        else if (key == "system.sigma2")
            cfg.system.sigma2 = parse_double(key, value);
        else if (key == "channel.n_cl")
            cfg.channel.n_cl = parse_u64(key, value);
        else if (key == "channel.n_ray")
            cfg.channel.n_ray = parse_u64(key, value);
        else if (key == "channel.angle_spread_deg")
        {
            cfg.angle_spread_deg = parse_double(key, value);
            cfg.channel.angle_spread = cfg.angle_spread_deg * pi / 180.0;
        }
        else if (key == "channel.element_spacing")
            cfg.channel.element_spacing = parse_double(key, value);
        else if (key == "optimizer.t_b")
            cfg.optimizer.t_b = parse_double(key, value);
        else if (key == "optimizer.p_norm")
            cfg.optimizer.p_norm = parse_u64(key, value);
        else if (key == "optimizer.step_init")
            cfg.optimizer.step_init = parse_double(key, value);
        else if (key == "optimizer.backtrack_ratio")
            cfg.optimizer.backtrack_ratio = parse_double(key, value);
        else if (key == "optimizer.armijo_c")
            cfg.optimizer.armijo_c = parse_double(key, value);
        else if (key == "optimizer.grad_tol")
            cfg.optimizer.grad_tol = parse_double(key, value);
        else if (key == "optimizer.max_inner")
            cfg.optimizer.max_inner = parse_u64(key, value);
        else if (key == "optimizer.max_outer")
            cfg.optimizer.max_outer = parse_u64(key, value);
        else if (key == "optimizer.outer_tol")
            cfg.optimizer.outer_tol = parse_double(key, value);
        else
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }

    if (!has_mode)
        throw std::invalid_argument("config: missing required key 'mode'");
    if (!has_grid)
        throw std::invalid_argument("config: missing required key 'snr_grid_db'");
    if (!has_nt || !has_nr || !has_nrf)
        throw std::invalid_argument(
            "config: system.n_t, system.n_r and system.n_rf are required");

    // The partition search chooses (n_k, n_m) itself; any valid placeholder
    // keeps validation meaningful.
    if (cfg.mode == ExperimentMode::partition_select)
    {
        if (!has_nk)
            cfg.system.n_k = 1;
        if (!has_nm)
            cfg.system.n_m = cfg.system.n_t / cfg.system.n_k;
    }
    else if (!has_nk || !has_nm)
        throw std::invalid_argument("config: system.n_k and system.n_m are required");
    if (!has_ns)
        cfg.system.n_s = cfg.system.n_rf;

    cfg.system.rho = cfg.system.sigma2; // placeholder; set per SNR point
    return cfg;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index, std::string_view tag)
{
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    s = splitmix64(s ^ fnv1a(tag));
    return s;
}

HybridPrecoder random_interior_precoder(const SystemConfig &cfg, arma::uword m, Rng &rng)
{
    HybridPrecoder p;
    p.lambda.set_size(m * cfg.n_s);
    for (arma::uword i = 0; i < p.lambda.n_elem; ++i)
        p.lambda(i) = 0.25 + rng.uniform();
    p.lambda *= double(m * cfg.n_s) / arma::accu(p.lambda);

    const double c = 1.0 / std::sqrt(double(cfg.n_k));
    const double shrink = std::pow(double(cfg.n_t), -1.0 / 16.0);
    p.a.set_size(cfg.n_t);
    for (arma::uword k = 0; k < cfg.n_t; ++k)
    {
        const double mag = c * shrink * (0.35 + 0.6 * rng.uniform());
        const double phase = 2.0 * pi * rng.uniform();
        p.a(k) = std::polar(mag, phase);
    }
    return p;
}

GradCheckResult check_gradients(const arma::cx_mat &h, const HybridPrecoder &p,
                                const AgcTable &table, const SystemConfig &cfg,
                                double lambda_step, double a_step)
{
    GradCheckResult res;

    const arma::vec ga = grad_lambda_full(h, p, table, cfg);
    arma::vec fd(ga.n_elem);
    HybridPrecoder q = p;
    for (arma::uword i = 0; i < ga.n_elem; ++i)
    {
        q.lambda(i) = p.lambda(i) + lambda_step;
        const double up = se_lower_bound(h, q, table, cfg);
        q.lambda(i) = p.lambda(i) - lambda_step;
        const double dn = se_lower_bound(h, q, table, cfg);
        q.lambda(i) = p.lambda(i);
        fd(i) = (up - dn) / (2.0 * lambda_step);
    }
    const double lam_scale = std::max(arma::abs(fd).max(), 1e-300);
    res.lambda_rel_err = arma::abs(ga - fd).max() / lam_scale;

    const arma::cx_vec gc = grad_a(h, p, table, cfg);
    arma::vec ana(2 * cfg.n_t), num(2 * cfg.n_t);
    q = p;
    for (arma::uword k = 0; k < cfg.n_t; ++k)
    {
        ana(2 * k) = 2.0 * gc(k).real();
        ana(2 * k + 1) = 2.0 * gc(k).imag();

        q.a(k) = p.a(k) + a_step;
        const double re_up = se_lower_bound(h, q, table, cfg);
        q.a(k) = p.a(k) - a_step;
        const double re_dn = se_lower_bound(h, q, table, cfg);
        num(2 * k) = (re_up - re_dn) / (2.0 * a_step);

        q.a(k) = p.a(k) + std::complex<double>(0.0, a_step);
        const double im_up = se_lower_bound(h, q, table, cfg);
        q.a(k) = p.a(k) - std::complex<double>(0.0, a_step);
        const double im_dn = se_lower_bound(h, q, table, cfg);
        num(2 * k + 1) = (im_up - im_dn) / (2.0 * a_step);

        q.a(k) = p.a(k);
    }
    const double a_scale = std::max(arma::abs(num).max(), 1e-300);
    res.a_rel_err = arma::abs(ana - num).max() / a_scale;
    return res;
}

int run_experiment(const ExperimentConfig &cfg, std::ostream &summary)
{
    cfg.validate();

    ModeOutput out;
    switch (cfg.mode)
    {
        case ExperimentMode::bound_tightness: out = run_bound_tightness(cfg, summary); break;
        case ExperimentMode::optimize: out = run_optimize(cfg, summary); break;
        case ExperimentMode::sweep: out = run_sweep(cfg, summary); break;
        case ExperimentMode::partition_select: out = run_partition_select(cfg, summary); break;
        case ExperimentMode::gradcheck: out = run_gradcheck(cfg, summary); break;
    }

    std::ofstream file(cfg.output_path);
    if (!file)
        throw IoError("cannot open output file " + cfg.output_path);
    file << echo_block(cfg);
    file << "# generated: " << timestamp_utc() << "\n";
    file << out.header << "\n";
    for (const std::string &l : out.lines)
        file << l << "\n";
    file.flush();
    if (!file)
        throw IoError("write failure on " + cfg.output_path);

    if (!out.finite_ok)
    {
        summary << "error: non-finite results detected\n";
        return 2;
    }
    if (out.optimizer_runs > 0 && 2 * out.capped_runs > out.optimizer_runs)
    {
        summary << "error: " << out.capped_runs << " of " << out.optimizer_runs
                << " optimizer runs hit the iteration cap\n";
        return 2;
    }
    return 0;
}

} // namespace gensm
