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


#include "thzchan/clustering.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace thz
{
    void McdConfig::validate() const
    {
        if (!(zeta >= 0.0))
            throw std::invalid_argument("MCD delay scaling factor cannot be negative.");
        if (!(delta_tau_max_s > 0.0))
            throw std::invalid_argument("MCD delay range must be positive.");
        if (!(tau_std_s >= 0.0))
            throw std::invalid_argument("MCD delay spread cannot be negative.");
    }

    McdConfig McdConfig::from_data(std::span<const Mpc> mpcs, double zeta)
    {
        if (mpcs.size() < 2)
            throw std::invalid_argument("Recomputing MCD delay statistics needs at least two MPCs.");
        double mean = 0.0, lo = mpcs[0].toa_s, hi = mpcs[0].toa_s;
        for (const auto &m : mpcs)
        {
            mean += m.toa_s;
            lo = std::min(lo, m.toa_s);
            hi = std::max(hi, m.toa_s);
        }
        mean /= static_cast<double>(mpcs.size());
        double var = 0.0;
        for (const auto &m : mpcs)
            var += (m.toa_s - mean) * (m.toa_s - mean);
        var /= static_cast<double>(mpcs.size());

        McdConfig cfg{zeta, std::sqrt(var), hi - lo};
        cfg.validate();
        return cfg;
    }

    double mcd_aoa(double theta1, double theta2)
    {
        double dx = std::cos(theta1) - std::cos(theta2);
        double dy = std::sin(theta1) - std::sin(theta2);
        return 0.5 * std::hypot(dx, dy);
    }

    double mcd_delay(double tau1_s, double tau2_s, const McdConfig &cfg)
    {
        return cfg.delay_weight_per_s() * std::abs(tau1_s - tau2_s);
    }

    double mcd(double toa1_s, double aoa1, double toa2_s, double aoa2, const McdConfig &cfg)
    {
        double a = mcd_aoa(aoa1, aoa2);
        double t = mcd_delay(toa1_s, toa2_s, cfg);
        return std::sqrt(a * a + cfg.zeta * t * t);
    }

    double mcd(const Mpc &a, const Mpc &b, const McdConfig &cfg)
    {
        return mcd(a.toa_s, a.aoa_az, b.toa_s, b.aoa_az, cfg);
    }

    std::string_view to_string(MatchStatus status)
    {
        switch (status)
        {
        case MatchStatus::matched:
            return "matched";
        case MatchStatus::non_matched:
            return "non_matched";
        case MatchStatus::unset:
            break;
        }
        return "unset";
    }

    std::vector<int> ClusterSet::labels() const
    {
        std::vector<int> out(mpc_count, -1);
        for (std::size_t c = 0; c < clusters.size(); ++c)
            for (std::size_t m : clusters[c].members)
                out[m] = static_cast<int>(c);
        return out;
    }

    namespace
    {
        // Range queries over MPCs sorted by ToA. The delay term alone bounds the MCD, so only a
        // window of |dtau| <= eps / (sqrt(zeta) * weight) can hold neighbors.
        class NeighborIndex
        {
        public:
            NeighborIndex(std::span<const Mpc> mpcs, double eps, const McdConfig &cfg)
                : mpcs_(mpcs), eps_(eps), cfg_(cfg), order_(mpcs.size())
            {
                std::iota(order_.begin(), order_.end(), std::size_t{0});
                std::stable_sort(order_.begin(), order_.end(),
                                 [&](std::size_t a, std::size_t b) { return mpcs_[a].toa_s < mpcs_[b].toa_s; });
                sorted_toa_.reserve(order_.size());
                for (std::size_t k : order_)
                    sorted_toa_.push_back(mpcs_[k].toa_s);

                double scale = std::sqrt(cfg.zeta) * cfg.delay_weight_per_s();
                window_s_ = scale > 0.0 ? eps / scale : std::numeric_limits<double>::infinity();
            }

            void query(std::size_t p, std::vector<std::size_t> &out) const
            {
                out.clear();
                double t = mpcs_[p].toa_s;
                auto lo = std::lower_bound(sorted_toa_.begin(), sorted_toa_.end(), t - window_s_);
                auto hi = std::upper_bound(sorted_toa_.begin(), sorted_toa_.end(), t + window_s_);
                for (auto it = lo; it != hi; ++it)
                {
                    std::size_t q = order_[static_cast<std::size_t>(it - sorted_toa_.begin())];
                    if (mcd(mpcs_[p], mpcs_[q], cfg_) <= eps_)
                        out.push_back(q);
                }
                std::sort(out.begin(), out.end());
            }

        private:
            std::span<const Mpc> mpcs_;
            double eps_;
            const McdConfig &cfg_;
            std::vector<std::size_t> order_;
            std::vector<double> sorted_toa_;
            double window_s_ = 0.0;
        };

        void finalize_cluster(Cluster &c, std::span<const Mpc> mpcs)
        {
            std::sort(c.members.begin(), c.members.end());
            double p = 0.0, t = 0.0, sx = 0.0, sy = 0.0;
            for (std::size_t m : c.members)
            {
                p += mpcs[m].power_w;
                t += mpcs[m].power_w * mpcs[m].toa_s;
                sx += mpcs[m].power_w * std::cos(mpcs[m].aoa_az);
                sy += mpcs[m].power_w * std::sin(mpcs[m].aoa_az);
            }
            c.power_w = p;
            c.centroid_toa_s = p > 0.0 ? t / p : mpcs[c.members.front()].toa_s;
            c.centroid_aoa = wrap_two_pi(std::atan2(sy, sx));
        }
    } // namespace

    ClusterSet dbscan_mcd(std::span<const Mpc> mpcs, double eps, std::size_t min_points, const McdConfig &cfg)
    {
        if (!(eps > 0.0))
            throw std::invalid_argument("DBSCAN radius must be positive.");
        if (min_points < 1)
            throw std::invalid_argument("DBSCAN min_points must be at least 1.");
        cfg.validate();

        constexpr int unvisited = -2;
        constexpr int noise = -1;
        std::vector<int> label(mpcs.size(), unvisited);
        NeighborIndex index(mpcs, eps, cfg);

        ClusterSet out;
        out.mpc_count = mpcs.size();
        std::vector<std::size_t> neighbors, expansion;

        for (std::size_t p = 0; p < mpcs.size(); ++p)
        {
            if (label[p] != unvisited)
                continue;
            index.query(p, neighbors);
            if (neighbors.size() < min_points)
            {
                label[p] = noise;
                continue;
            }

            int id = static_cast<int>(out.clusters.size());
            out.clusters.emplace_back();
            Cluster &cluster = out.clusters.back();
            label[p] = id;
            cluster.members.push_back(p);

            std::deque<std::size_t> frontier(neighbors.begin(), neighbors.end());
            while (!frontier.empty())
            {
                std::size_t q = frontier.front();
                frontier.pop_front();
                if (label[q] == noise)
                {
                    label[q] = id; // border point
                    cluster.members.push_back(q);
                    continue;
                }
                if (label[q] != unvisited)
                    continue;
                label[q] = id;
                cluster.members.push_back(q);
                index.query(q, expansion);
                if (expansion.size() >= min_points)
                    frontier.insert(frontier.end(), expansion.begin(), expansion.end());
            }
        }

        for (std::size_t p = 0; p < mpcs.size(); ++p)
            if (label[p] == noise)
                out.outliers.push_back(p);
        for (auto &c : out.clusters)
            finalize_cluster(c, mpcs);
        return out;
    }

    ClusterSet match_clusters(ClusterSet set, std::span<const Mpc> mpcs, std::span<const RtPath> rt_paths,
                              const McdConfig &cfg, double eps)
    {
        cfg.validate();
        set.unmatched_rt_paths.clear();
        std::vector<bool> path_used(rt_paths.size(), false);
        for (auto &c : set.clusters)
        {
            c.rt_path_ids.clear();
            for (std::size_t r = 0; r < rt_paths.size(); ++r)
            {
                for (std::size_t m : c.members)
                {
                    if (mcd(mpcs[m].toa_s, mpcs[m].aoa_az, rt_paths[r].toa_s, rt_paths[r].aoa_az, cfg) <= eps)
                    {
                        c.rt_path_ids.push_back(r);
                        path_used[r] = true;
                        break;
                    }
                }
            }
            c.status = c.rt_path_ids.empty() ? MatchStatus::non_matched : MatchStatus::matched;
        }
        for (std::size_t r = 0; r < rt_paths.size(); ++r)
            if (!path_used[r])
                set.unmatched_rt_paths.push_back(r);
        return set;
    }

    void write_cluster_report(std::ostream &os, const ClusterSet &set, std::span<const Mpc> mpcs)
    {
        os << "mpc_index,toa_ns,aoa_deg,power_dbm,cluster_id,status\n";
        auto labels = set.labels();
        char buf[256];
        for (std::size_t k = 0; k < mpcs.size(); ++k)
        {
            int id = k < labels.size() ? labels[k] : -1;
            std::string_view status = id < 0 ? std::string_view("outlier")
                                             : to_string(set.clusters[static_cast<std::size_t>(id)].status);
            std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%d,%.*s\n", k, mpcs[k].toa_s * 1e9,
                          rad2deg(mpcs[k].aoa_az), watts_to_dbm(mpcs[k].power_w), id,
                          static_cast<int>(status.size()), status.data());
            os << buf;
        }
    }

} // namespace thz
