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


#ifndef THZCHAN_STOCHASTIC_GEN_HPP
#define THZCHAN_STOCHASTIC_GEN_HPP

#include "thzchan/geometry_rt.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

/*!SECTION
Statistical channel generation (hybrid RT-statistical model and the purely statistical baseline)
SECTION!*/

namespace thz
{
    using Rng = std::mt19937_64;

    enum class SubpathCategory : std::uint8_t
    {
        rt_pre,
        rt_post,
        nonrt_pre,
        nonrt_post
    };

    struct LogNormalParams
    {
        double mu = 0.0;    // mean of ln(x)
        double sigma = 0.0; // std of ln(x)
    };

    struct VonMisesParams
    {
        double mu = 0.0; // radians
        double kappa = 0.0;
    };

    // alpha = anchor * a * |dtau_ns|^b
    struct PowerLawParams
    {
        double a = 1.0;
        double b = 0.0;
    };

    struct IntraClusterParams
    {
        LogNormalParams subpath_count;
        double arrival_rate_per_ns = 1.0;
        VonMisesParams aoa;
        PowerLawParams amplitude;
    };

    struct ClusterFamilyParams
    {
        VonMisesParams inter_aoa;
        PowerLawParams inter_amplitude;
    };

    // How the arrival values tabulated for the model are interpreted
    enum class ArrivalUnit : std::uint8_t
    {
        mean_gap_ns, // tabulated value is the mean gap in ns, rate = 1 / value
        rate_per_ns  // tabulated value is the rate in 1/ns
    };

    struct HybridModelParams
    {
        std::array<IntraClusterParams, 4> intra{}; // indexed by SubpathCategory
        ClusterFamilyParams rt;
        ClusterFamilyParams nonrt;
        double inter_arrival_rate_per_ns = 1.0;
        double cluster_count_slope = -1.056;    // per meter
        double cluster_count_intercept = 9.776;

        IntraClusterParams &intra_params(SubpathCategory c) { return intra[static_cast<std::size_t>(c)]; }
        const IntraClusterParams &intra_params(SubpathCategory c) const { return intra[static_cast<std::size_t>(c)]; }

        // Throws std::invalid_argument on non-positive rates, negative sigma/kappa or a <= 0
        void validate() const;

        /// Parameters fitted from the 140 GHz meeting-room campaign.
        static HybridModelParams measured_defaults(ArrivalUnit unit = ArrivalUnit::mean_gap_ns);
    };

    // Converts a tabulated arrival value into a rate per ns
    double arrival_rate_from_table(double value, ArrivalUnit unit);

    // ---------- Sampling primitives ----------

    /// ceil(slope * d + intercept), clamped below at 0.
    std::size_t sample_cluster_count(double d_m, double slope = -1.056, double intercept = 9.776);

    std::size_t sample_subpath_count(SubpathCategory category, const HybridModelParams &params, Rng &rng);

    /// n i.i.d. Exp(rate) gaps in ns, returned as cumulative offsets (strictly increasing, > 0).
    std::vector<double> sample_arrival_offsets(double rate_per_ns, std::size_t n, Rng &rng);

    /// Von Mises draw on [0, 2*pi); kappa = 0 is uniform.
    double sample_von_mises(double mu, double kappa, Rng &rng);

    inline constexpr double min_power_law_delay_ns = 1.0e-3;

    /// anchor * a * |dtau|^b with dtau in ns, |dtau| clamped below at 1e-3 ns.
    double amplitude_from_law(double anchor_amplitude, double a, double b, double delta_toa_ns);

    // ---------- Channel realizations ----------

    enum class MpcLabel : std::uint8_t
    {
        los,
        rt_center,
        rt_subpath,
        nonrt_center,
        nonrt_subpath
    };

    std::string_view to_string(MpcLabel label);

    enum class GeneratorMode : std::uint8_t
    {
        hybrid,
        statistical_baseline
    };

    std::string_view to_string(GeneratorMode mode);
    GeneratorMode parse_generator_mode(std::string_view text); // throws std::invalid_argument

    struct ChannelMpc
    {
        Mpc mpc;
        int cluster_id = 0;
        MpcLabel label = MpcLabel::los;
        double phase = 0.0; // uniform in [0, 2*pi), unused by power-domain processing
    };

    struct GeneratorOptions
    {
        GeneratorMode mode = GeneratorMode::hybrid;
        RtOptions rt{3, true};
        double tx_power_w = 1.0e-3;
        double tx_peak_gain_db = 15.0;
        double tx_hpbw = deg2rad(30.0);
        // Components arriving outside (0, max_delay) are not observable and are dropped
        double max_delay_s = 100.0e-9;
    };

    struct ChannelRealization
    {
        std::vector<ChannelMpc> mpcs;
        std::uint64_t seed = 0;
        GeneratorMode mode = GeneratorMode::hybrid;
        RoomScene scene;
        // Hybrid mode: paths used as RT cluster centers; cluster_id k < rt_paths.size() is path k
        std::vector<RtPath> rt_paths;
        std::size_t cluster_count = 0;       // clusters drawn, observable or not
        std::size_t nonrt_cluster_count = 0; // obstacle clusters drawn from the distance line

        std::vector<Mpc> plain_mpcs() const;
    };

    /// Draws one channel realization. Deterministic in (scene, params, options, seed).
    ChannelRealization synthesize_channel(const RoomScene &scene, const HybridModelParams &params,
                                          const GeneratorOptions &options, std::uint64_t seed);

    // CSV: cluster_id,label,toa_ns,aoa_deg,power_dbm,phase_rad
    void write_realization_csv(std::ostream &os, const ChannelRealization &realization);

} // namespace thz

#endif
