// SPDX-License-Identifier: Apache-2.0
//
// thzchan: terahertz indoor channel modelling toolkit
// Copyright (C) 2026 thzchan contributors
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


#include "thzchan/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace thz
{
    double fspl_db(double d_m, double f_hz)
    {
        if (!(d_m > 0.0) || !(f_hz > 0.0))
            throw std::invalid_argument("FSPL needs positive distance and frequency.");
        return -20.0 * std::log10(speed_of_light / (4.0 * pi * f_hz * d_m));
    }

    double ci_sigma_db(std::span<const PathLossSample> samples, double ple, double f_hz, double d0_m)
    {
        if (samples.empty())
            throw std::invalid_argument("No path-loss samples.");
        double ref = fspl_db(d0_m, f_hz);
        double ss = 0.0;
        for (const auto &s : samples)
        {
            double r = s.path_loss_db - ref - ple * 10.0 * std::log10(s.d_m / d0_m);
            ss += r * r;
        }
        return std::sqrt(ss / static_cast<double>(samples.size()));
    }

    CiFit fit_ci(std::span<const PathLossSample> samples, double f_hz, double d0_m)
    {
        if (samples.size() < 2)
            throw std::invalid_argument("CI fit needs at least two samples.");
        bool distinct = false;
        for (const auto &s : samples)
        {
            if (!(s.d_m > 0.0))
                throw std::invalid_argument("CI fit distances must be positive.");
            distinct = distinct || s.d_m != samples.front().d_m;
        }
        if (!distinct)
            throw std::invalid_argument("Degenerate CI fit: all distances are equal.");

        double ref = fspl_db(d0_m, f_hz);
        double sxy = 0.0, sxx = 0.0;
        for (const auto &s : samples)
        {
            double x = 10.0 * std::log10(s.d_m / d0_m);
            sxy += x * (s.path_loss_db - ref);
            sxx += x * x;
        }
        if (sxx == 0.0)
            throw std::invalid_argument("Degenerate CI fit: all samples sit at the reference distance.");

        CiFit fit;
        fit.d0_m = d0_m;
        fit.ple = sxy / sxx;
        fit.sigma_sf_db = ci_sigma_db(samples, fit.ple, f_hz, d0_m);
        return fit;
    }

    namespace
    {
        double weighted_spread(std::span<const double> values, std::span<const double> weights)
        {
            double sum_w = 0.0, mean = 0.0;
            for (std::size_t k = 0; k < values.size(); ++k)
            {
                sum_w += weights[k];
                mean += weights[k] * values[k];
            }
            if (!(sum_w > 0.0))
                throw std::invalid_argument("Spread of a profile with zero total power.");
            mean /= sum_w;
            double m2 = 0.0;
            for (std::size_t k = 0; k < values.size(); ++k)
                m2 += weights[k] * (values[k] - mean) * (values[k] - mean);
            return std::sqrt(std::max(m2 / sum_w, 0.0));
        }

        double circular_spread(std::span<const double> angles, std::span<const double> weights)
        {
            double sx = 0.0, sy = 0.0;
            for (std::size_t k = 0; k < angles.size(); ++k)
            {
                sx += weights[k] * std::cos(angles[k]);
                sy += weights[k] * std::sin(angles[k]);
            }
            double center = std::atan2(sy, sx);
            std::vector<double> unwrapped(angles.size());
            for (std::size_t k = 0; k < angles.size(); ++k)
                unwrapped[k] = wrap_pi(angles[k] - center);
            return weighted_spread(unwrapped, weights);
        }
    } // namespace

    double rms_delay_spread(std::span<const double> pdp, double bin_s)
    {
        std::vector<double> delays(pdp.size());
        for (std::size_t i = 0; i < pdp.size(); ++i)
            delays[i] = static_cast<double>(i) * bin_s;
        return weighted_spread(delays, pdp);
    }

    double rms_delay_spread(std::span<const Mpc> mpcs)
    {
        std::vector<double> delays, powers;
        for (const auto &m : mpcs)
        {
            delays.push_back(m.toa_s);
            powers.push_back(m.power_w);
        }
        return weighted_spread(delays, powers);
    }

    double angular_spread(std::span<const double> pap, double bin_rad)
    {
        std::vector<double> angles(pap.size());
        for (std::size_t j = 0; j < pap.size(); ++j)
            angles[j] = static_cast<double>(j) * bin_rad;
        return circular_spread(angles, pap);
    }

    double angular_spread(std::span<const Mpc> mpcs)
    {
        std::vector<double> angles, powers;
        for (const auto &m : mpcs)
        {
            angles.push_back(m.aoa_az);
            powers.push_back(m.power_w);
        }
        return circular_spread(angles, powers);
    }

    std::optional<std::size_t> find_los_cluster(const ClusterSet &set, std::span<const Mpc> mpcs)
    {
        std::optional<std::size_t> best;
        double best_power = -1.0;
        for (std::size_t c = 0; c < set.clusters.size(); ++c)
        {
            double peak = 0.0;
            for (std::size_t m : set.clusters[c].members)
                peak = std::max(peak, mpcs[m].power_w);
            if (peak > best_power ||
                (peak == best_power && set.clusters[c].centroid_toa_s < set.clusters[*best].centroid_toa_s))
            {
                best = c;
                best_power = peak;
            }
        }
        return best;
    }

    namespace
    {
        double cluster_power(const Cluster &c, std::span<const Mpc> mpcs)
        {
            double p = 0.0;
            for (std::size_t m : c.members)
                p += mpcs[m].power_w;
            return p;
        }
    } // namespace

    double k_factor(const ClusterSet &set, std::span<const Mpc> mpcs)
    {
        auto los = find_los_cluster(set, mpcs);
        if (!los)
            throw std::invalid_argument("K-factor needs at least one cluster.");
        double p_los = 0.0, p_nlos = 0.0;
        for (std::size_t c = 0; c < set.clusters.size(); ++c)
            (c == *los ? p_los : p_nlos) += cluster_power(set.clusters[c], mpcs);
        return p_nlos > 0.0 ? p_los / p_nlos : infinite_ratio;
    }

    double wall_reflection_ratio(const ClusterSet &set, std::span<const Mpc> mpcs)
    {
        auto los = find_los_cluster(set, mpcs);
        double wall = 0.0, obstacle = 0.0;
        for (std::size_t c = 0; c < set.clusters.size(); ++c)
        {
            if (los && c == *los)
                continue;
            const auto &cl = set.clusters[c];
            if (cl.status == MatchStatus::unset)
                throw std::invalid_argument("Wall-reflection ratio needs matched clusters.");
            (cl.status == MatchStatus::matched ? wall : obstacle) += cluster_power(cl, mpcs);
        }
        return obstacle > 0.0 ? wall / obstacle : infinite_ratio;
    }

    std::vector<ClusterSpread> intra_cluster_spreads(const ClusterSet &set, std::span<const Mpc> mpcs)
    {
        std::vector<ClusterSpread> out;
        out.reserve(set.clusters.size());
        std::vector<Mpc> members;
        for (const auto &c : set.clusters)
        {
            if (c.members.size() < 2)
            {
                out.push_back({});
                continue;
            }
            members.clear();
            for (std::size_t m : c.members)
                members.push_back(mpcs[m]);
            out.push_back({rms_delay_spread(members), angular_spread(members)});
        }
        return out;
    }

    LogNormalFit fit_lognormal(std::span<const double> samples)
    {
        if (samples.size() < 2)
            throw std::invalid_argument("Log-normal fit needs at least two samples.");
        double mean = 0.0;
        for (double x : samples)
        {
            if (!(x > 0.0) || !std::isfinite(x))
                throw std::invalid_argument("Log-normal fit needs finite positive samples.");
            mean += std::log(x);
        }
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (double x : samples)
            var += (std::log(x) - mean) * (std::log(x) - mean);
        var /= static_cast<double>(samples.size());
        return {mean, std::sqrt(var), 0};
    }

    LogNormalFit fit_lognormal_finite(std::span<const double> samples)
    {
        std::vector<double> kept;
        kept.reserve(samples.size());
        for (double x : samples)
            if (std::isfinite(x))
                kept.push_back(x);
        LogNormalFit fit = fit_lognormal(kept);
        fit.excluded = samples.size() - kept.size();
        return fit;
    }

    std::array<double, 6> CharacteristicsRow::report_values() const
    {
        return {d_m, n_clusters, k_factor, ds_s * 1e9, rad2deg(as_rad), r_w};
    }

    double pearson(std::span<const double> x, std::span<const double> y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("Pearson correlation needs two equally sized samples.");
        double n = static_cast<double>(x.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
        {
            mx += x[k];
            my += y[k];
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
        {
            sxy += (x[k] - mx) * (y[k] - my);
            sxx += (x[k] - mx) * (x[k] - mx);
            syy += (y[k] - my) * (y[k] - my);
        }
        if (sxx == 0.0 || syy == 0.0)
            throw std::invalid_argument("Pearson correlation of a zero-variance sample.");
        return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    }

    CorrelationMatrix correlation_matrix(std::span<const CharacteristicsRow> rows)
    {
        CorrelationMatrix out;
        std::array<std::vector<double>, 6> columns;
        for (const auto &r : rows)
        {
            auto v = r.report_values();
            if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
            {
                ++out.rows_excluded;
                continue;
            }
            for (std::size_t k = 0; k < 6; ++k)
                columns[k].push_back(v[k]);
        }
        out.rows_used = columns[0].size();
        if (out.rows_used < 3)
            throw std::invalid_argument("Correlation matrix needs at least three finite rows.");

        std::array<bool, 6> defined{};
        for (std::size_t k = 0; k < 6; ++k)
        {
            const auto &c = columns[k];
            defined[k] = std::any_of(c.begin(), c.end(), [&](double x) { return x != c.front(); });
        }
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = 0; b < 6; ++b)
            {
                if (!defined[a] || !defined[b])
                    continue;
                out.rho[a][b] = (a == b) ? 1.0 : pearson(columns[a], columns[b]);
            }
        // exact symmetry
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = 0; b < a; ++b)
                out.rho[b][a] = out.rho[a][b];
        return out;
    }

    void write_characteristics_csv(std::ostream &os, std::span<const CharacteristicsRow> rows)
    {
        os << "rx,d_m,N,K,DS_ns,AS_deg,R_w\n";
        char buf[512];
        for (const auto &r : rows)
        {
            auto v = r.report_values();
            std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.10g,%.10g,%.10g,%.10g\n", r.label.c_str(), v[0], v[1],
                          v[2], v[3], v[4], v[5]);
            os << buf;
        }
    }

    std::vector<CharacteristicsRow> read_characteristics_csv(std::istream &is)
    {
        std::string line;
        std::size_t line_no = 0;
        std::vector<CharacteristicsRow> rows;
        bool header = true;
        while (std::getline(is, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line.front() == '#')
                continue;
            if (header)
            {
                header = false;
                if (line.rfind("rx,", 0) != 0)
                    throw std::runtime_error("line " + std::to_string(line_no) + ": expected characteristics header 'rx,d_m,N,K,DS_ns,AS_deg,R_w'");
                continue;
            }
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                cells.push_back(cell);
            if (cells.size() != 7)
                throw std::runtime_error("line " + std::to_string(line_no) + ": expected 7 columns");
            std::array<double, 6> v{};
            for (std::size_t k = 0; k < 6; ++k)
            {
                const std::string &c = cells[k + 1];
                auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v[k]);
                if (ec != std::errc() || ptr != c.data() + c.size())
                    throw std::runtime_error("line " + std::to_string(line_no) + ": non-numeric value '" + c + "'");
            }
            rows.push_back({cells[0], v[0], v[1], v[2], v[3] * 1e-9, deg2rad(v[4]), v[5]});
        }
        return rows;
    }

    void write_correlation_csv(std::ostream &os, const CorrelationMatrix &m)
    {
        os << "param";
        for (const char *n : characteristic_names)
            os << ',' << n;
        os << '\n';
        char buf[32];
        for (std::size_t a = 0; a < 6; ++a)
        {
            os << characteristic_names[a];
            for (std::size_t b = 0; b < 6; ++b)
            {
                if (m.rho[a][b])
                {
                    std::snprintf(buf, sizeof(buf), ",%.4f", *m.rho[a][b]);
                    os << buf;
                }
                else
                    os << ",undefined";
            }
            os << '\n';
        }
    }

    ChannelAnalysis analyze_pdap(const PdapGrid &grid, std::span<const RtPath> rt_paths, double d_m,
                                 const AnalysisConfig &cfg)
    {
        ChannelAnalysis out;
        out.mpcs = extract_mpcs(grid, cfg.threshold_dbm);
        out.row.d_m = d_m;

        double floor_w = dbm_to_watts(grid.spec().noise_floor_dbm);
        for (double p : grid.linear())
            if (p > floor_w)
                out.received_power_w += p;
        out.path_loss_db = out.received_power_w > 0.0 ? 10.0 * std::log10(cfg.tx_power_w / out.received_power_w)
                                                      : std::numeric_limits<double>::infinity();

        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (out.mpcs.empty())
        {
            out.row.k_factor = out.row.ds_s = out.row.as_rad = out.row.r_w = nan;
            return out;
        }

        McdConfig mcd_cfg = cfg.mcd;
        if (cfg.recompute_tau_std && out.mpcs.size() >= 2)
            mcd_cfg = McdConfig::from_data(out.mpcs, cfg.mcd.zeta);

        out.clusters = dbscan_mcd(out.mpcs, cfg.eps, cfg.min_points, mcd_cfg);
        out.clusters = match_clusters(std::move(out.clusters), out.mpcs, rt_paths, mcd_cfg, cfg.eps);
        out.los_cluster = find_los_cluster(out.clusters, out.mpcs);
        out.spreads = intra_cluster_spreads(out.clusters, out.mpcs);

        out.row.n_clusters = static_cast<double>(out.clusters.clusters.size());
        out.row.ds_s = rms_delay_spread(out.mpcs);
        out.row.as_rad = angular_spread(out.mpcs);
        if (out.los_cluster)
        {
            out.row.k_factor = k_factor(out.clusters, out.mpcs);
            out.row.r_w = wall_reflection_ratio(out.clusters, out.mpcs);
        }
        else
        {
            out.row.k_factor = nan;
            out.row.r_w = nan;
        }
        return out;
    }

} // namespace thz
