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


#ifndef THZCHAN_CLUSTERING_HPP
#define THZCHAN_CLUSTERING_HPP

#include "thzchan/common.hpp"
#include "thzchan/geometry_rt.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

/*!SECTION
MPC clustering with the multipath component distance and matching against ray-traced paths
SECTION!*/

namespace thz
{
    struct McdConfig
    {
        double zeta = 1.0;              // delay scaling factor
        double tau_std_s = 20.0e-9;     // spread of ToAs
        double delta_tau_max_s = 100.0e-9;

        void validate() const;

        // tau_std and delta_tau_max recomputed from the data (population std, max - min)
        static McdConfig from_data(std::span<const Mpc> mpcs, double zeta);

        double delay_weight_per_s() const { return tau_std_s / (delta_tau_max_s * delta_tau_max_s); }
    };

    double mcd_aoa(double theta1, double theta2);
    double mcd_delay(double tau1_s, double tau2_s, const McdConfig &cfg);
    double mcd(const Mpc &a, const Mpc &b, const McdConfig &cfg);
    double mcd(double toa1_s, double aoa1, double toa2_s, double aoa2, const McdConfig &cfg);

    enum class MatchStatus : std::uint8_t
    {
        unset,
        matched,
        non_matched
    };

    std::string_view to_string(MatchStatus status);

    struct Cluster
    {
        std::vector<std::size_t> members; // ascending MPC indices
        double centroid_toa_s = 0.0;      // power-weighted mean
        double centroid_aoa = 0.0;        // power-weighted circular mean
        double power_w = 0.0;
        MatchStatus status = MatchStatus::unset;
        std::vector<std::size_t> rt_path_ids;
    };

    struct ClusterSet
    {
        std::vector<Cluster> clusters;
        std::vector<std::size_t> outliers;
        std::vector<std::size_t> unmatched_rt_paths; // filled by match_clusters
        std::size_t mpc_count = 0;

        // Cluster index per MPC, -1 for outliers
        std::vector<int> labels() const;
    };

    /// DBSCAN with the MCD metric. A point is core when at least `min_points` MPCs (itself
    /// included) lie within `eps`. Border points reachable from two clusters stay with the one
    /// discovered first when scanning the input in order.
    ClusterSet dbscan_mcd(std::span<const Mpc> mpcs, double eps, std::size_t min_points, const McdConfig &cfg);

    /// A cluster is matched when some ray-traced path lies within `eps` of any of its members.
    ClusterSet match_clusters(ClusterSet set, std::span<const Mpc> mpcs, std::span<const RtPath> rt_paths,
                              const McdConfig &cfg, double eps);

    // CSV: mpc_index,toa_ns,aoa_deg,power_dbm,cluster_id,status
    void write_cluster_report(std::ostream &os, const ClusterSet &set, std::span<const Mpc> mpcs);

} // namespace thz

#endif
