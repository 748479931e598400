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


#include "thzchan/stochastic_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace thz
{
    double arrival_rate_from_table(double value, ArrivalUnit unit)
    {
        if (!(value > 0.0))
            throw std::invalid_argument("Arrival parameter must be positive.");
        return unit == ArrivalUnit::mean_gap_ns ? 1.0 / value : value;
    }

    HybridModelParams HybridModelParams::measured_defaults(ArrivalUnit unit)
    {
        HybridModelParams p;
        auto rate = [unit](double v) { return arrival_rate_from_table(v, unit); };

        p.intra_params(SubpathCategory::rt_pre) = {{2.09, 1.20}, rate(0.0918), {0.0, 33.0}, {0.41, -0.51}};
        p.intra_params(SubpathCategory::rt_post) = {{4.0, 1.59}, rate(0.0593), {0.5, 3.5}, {0.42, -0.45}};
        p.intra_params(SubpathCategory::nonrt_pre) = {{1.76, 1.33}, rate(0.102), {0.0, 16.0}, {0.39, -0.21}};
        p.intra_params(SubpathCategory::nonrt_post) = {{2.07, 1.03}, rate(0.1417), {0.0, 16.0}, {0.53, -0.06}};

        p.rt = {{-2.6567, 0.0}, {0.34, -0.65}};
        p.nonrt = {{-1.23, 0.0}, {0.36, -0.25}};
        p.inter_arrival_rate_per_ns = rate(13.12);
        p.cluster_count_slope = -1.056;
        p.cluster_count_intercept = 9.776;
        return p;
    }

    void HybridModelParams::validate() const
    {
        auto check_family = [](const ClusterFamilyParams &f, const char *name)
        {
            if (f.inter_aoa.kappa < 0.0)
                throw std::invalid_argument(std::string(name) + ": von Mises kappa cannot be negative.");
            if (!(f.inter_amplitude.a > 0.0))
                throw std::invalid_argument(std::string(name) + ": amplitude coefficient must be positive.");
        };
        for (const auto &c : intra)
        {
            if (!(c.arrival_rate_per_ns > 0.0))
                throw std::invalid_argument("Intra-cluster arrival rate must be positive.");
            if (c.subpath_count.sigma < 0.0)
                throw std::invalid_argument("Subpath-count sigma cannot be negative.");
            if (c.aoa.kappa < 0.0)
                throw std::invalid_argument("Intra-cluster von Mises kappa cannot be negative.");
            if (!(c.amplitude.a > 0.0))
                throw std::invalid_argument("Intra-cluster amplitude coefficient must be positive.");
        }
        check_family(rt, "RT clusters");
        check_family(nonrt, "non-RT clusters");
        if (!(inter_arrival_rate_per_ns > 0.0))
            throw std::invalid_argument("Inter-cluster arrival rate must be positive.");
    }

    std::size_t sample_cluster_count(double d_m, double slope, double intercept)
    {
        if (!(d_m > 0.0))
            throw std::invalid_argument("Tx-Rx distance must be positive.");
        double n = std::ceil(slope * d_m + intercept);
        return n > 0.0 ? static_cast<std::size_t>(n) : 0;
    }

    std::size_t sample_subpath_count(SubpathCategory category, const HybridModelParams &params, Rng &rng)
    {
        const auto &ln = params.intra_params(category).subpath_count;
        double x = std::exp(ln.mu);
        if (ln.sigma > 0.0)
            x = std::lognormal_distribution<double>(ln.mu, ln.sigma)(rng);
        double n = std::round(x);
        return n > 0.0 ? static_cast<std::size_t>(n) : 0;
    }

    namespace
    {
        double exponential_gap(double rate, Rng &rng)
        {
            std::exponential_distribution<double> dist(rate);
            double g = 0.0;
            while (g <= 0.0)
                g = dist(rng);
            return g;
        }
    } // namespace

    std::vector<double> sample_arrival_offsets(double rate_per_ns, std::size_t n, Rng &rng)
    {
        if (!(rate_per_ns > 0.0))
            throw std::invalid_argument("Arrival rate must be positive.");
        std::vector<double> out;
        out.reserve(n);
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            t += exponential_gap(rate_per_ns, rng);
            out.push_back(t);
        }
        return out;
    }

    // Best & Fisher rejection sampler with a wrapped-Cauchy envelope
    double sample_von_mises(double mu, double kappa, Rng &rng)
    {
        if (kappa < 0.0)
            throw std::invalid_argument("Von Mises kappa cannot be negative.");
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        if (kappa < 1.0e-8)
            return wrap_two_pi(two_pi * uniform(rng));

        double s = 0.5 / kappa;
        double r = s + std::sqrt(1.0 + s * s);
        double w = 0.0;
        while (true)
        {
            double z = std::cos(pi * uniform(rng));
            w = (1.0 + r * z) / (r + z);
            double y = kappa * (r - w);
            double v = uniform(rng);
            if (y * (2.0 - y) - v >= 0.0 || std::log(y / v) + 1.0 - y >= 0.0)
                break;
        }
        double theta = std::acos(std::clamp(w, -1.0, 1.0));
        if (uniform(rng) < 0.5)
            theta = -theta;
        return wrap_two_pi(theta + mu);
    }

    double amplitude_from_law(double anchor_amplitude, double a, double b, double delta_toa_ns)
    {
        double dt = std::max(std::abs(delta_toa_ns), min_power_law_delay_ns);
        return anchor_amplitude * a * std::pow(dt, b);
    }

    std::string_view to_string(MpcLabel label)
    {
        switch (label)
        {
        case MpcLabel::los:
            return "los";
        case MpcLabel::rt_center:
            return "rt_center";
        case MpcLabel::rt_subpath:
            return "rt_subpath";
        case MpcLabel::nonrt_center:
            return "nonrt_center";
        case MpcLabel::nonrt_subpath:
            return "nonrt_subpath";
        }
        return "unknown";
    }

    std::string_view to_string(GeneratorMode mode)
    {
        return mode == GeneratorMode::hybrid ? "hybrid" : "statistical_baseline";
    }

    GeneratorMode parse_generator_mode(std::string_view text)
    {
        if (text == "hybrid")
            return GeneratorMode::hybrid;
        if (text == "statistical_baseline")
            return GeneratorMode::statistical_baseline;
        throw std::invalid_argument("Unknown generator mode '" + std::string(text) + "'.");
    }

    std::vector<Mpc> ChannelRealization::plain_mpcs() const
    {
        std::vector<Mpc> out;
        out.reserve(mpcs.size());
        for (const auto &m : mpcs)
            out.push_back(m.mpc);
        return out;
    }

    namespace
    {
        class ChannelBuilder
        {
        public:
            ChannelBuilder(const HybridModelParams &params, const GeneratorOptions &options, std::uint64_t seed,
                           ChannelRealization &out)
                : params_(params), options_(options), rng_(seed), phase_rng_(seed ^ 0x9e3779b97f4a7c15ULL), out_(out)
            {
            }

            Rng &rng() { return rng_; }

            bool observable(double toa_s) const { return toa_s > 0.0 && toa_s < options_.max_delay_s; }

            void add(int cluster_id, MpcLabel label, double toa_s, double aoa, double amplitude)
            {
                ChannelMpc m;
                m.mpc.toa_s = toa_s;
                m.mpc.aoa_az = wrap_two_pi(aoa);
                m.mpc.power_w = options_.tx_power_w * amplitude * amplitude;
                m.cluster_id = cluster_id;
                m.label = label;
                m.phase = std::uniform_real_distribution<double>(0.0, two_pi)(phase_rng_);
                out_.mpcs.push_back(m);
            }

            // Cluster center plus its pre- and post-cursor subpaths
            void add_cluster(int cluster_id, MpcLabel center_label, MpcLabel subpath_label, double toa_s, double aoa,
                             double amplitude, SubpathCategory pre, SubpathCategory post)
            {
                if (!observable(toa_s))
                    return;
                add(cluster_id, center_label, toa_s, aoa, amplitude);
                add_subpaths(cluster_id, subpath_label, toa_s, aoa, amplitude, pre, -1.0);
                add_subpaths(cluster_id, subpath_label, toa_s, aoa, amplitude, post, 1.0);
            }

        private:
            void add_subpaths(int cluster_id, MpcLabel label, double center_toa_s, double center_aoa,
                              double center_amplitude, SubpathCategory category, double sign)
            {
                const auto &c = params_.intra_params(category);
                std::size_t n = sample_subpath_count(category, params_, rng_);
                double offset_ns = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                {
                    offset_ns += exponential_gap(c.arrival_rate_per_ns, rng_);
                    double toa = center_toa_s + sign * offset_ns * 1.0e-9;
                    if (!observable(toa))
                        break; // later subpaths only move further out
                    double aoa = center_aoa + sample_von_mises(c.aoa.mu, c.aoa.kappa, rng_);
                    double amp = amplitude_from_law(center_amplitude, c.amplitude.a, c.amplitude.b, offset_ns);
                    add(cluster_id, label, toa, aoa, amp);
                }
            }

            const HybridModelParams &params_;
            const GeneratorOptions &options_;
            Rng rng_;
            Rng phase_rng_;
            ChannelRealization &out_;
        };
    } // namespace

    ChannelRealization synthesize_channel(const RoomScene &scene, const HybridModelParams &params,
                                          const GeneratorOptions &options, std::uint64_t seed)
    {
        params.validate();
        if (options.mode == GeneratorMode::hybrid)
            scene.validate();
        double d = scene.tx_rx_distance();
        if (!(d > 0.0) || !(scene.carrier_frequency_hz > 0.0))
            throw std::invalid_argument("Scene needs a positive Tx-Rx distance and carrier frequency.");

        ChannelRealization out;
        out.seed = seed;
        out.mode = options.mode;
        out.scene = scene;
        ChannelBuilder builder(params, options, seed, out);
        Rng &rng = builder.rng();

        double los_toa = 0.0;
        double los_amp = 0.0;
        int next_id = 0;

        if (options.mode == GeneratorMode::hybrid)
        {
            out.rt_paths = enumerate_images(scene, options.rt);
            AntennaBeam beam = default_tx_beam(scene);
            beam.peak_gain_db = options.tx_peak_gain_db;
            beam.hpbw = options.tx_hpbw;
            auto centers = build_rt_cir(out.rt_paths, beam, 1.0);
            for (std::size_t k = 0; k < centers.size(); ++k)
            {
                const auto &path = out.rt_paths[k];
                double amp = std::sqrt(centers[k].power_w);
                if (path.is_los())
                {
                    los_toa = path.toa_s;
                    los_amp = amp;
                }
                builder.add_cluster(next_id++, path.is_los() ? MpcLabel::los : MpcLabel::rt_center,
                                    MpcLabel::rt_subpath, path.toa_s, path.aoa_az, amp, SubpathCategory::rt_pre,
                                    SubpathCategory::rt_post);
            }
        }
        else
        {
            // Geometry-free: only the separation is known; angles and the RT replacements are drawn
            los_toa = d / speed_of_light;
            los_amp = 1.0 / (4.0 * pi * scene.carrier_frequency_hz * los_toa);
            double los_aoa = sample_von_mises(params.rt.inter_aoa.mu, params.rt.inter_aoa.kappa, rng);
            builder.add_cluster(next_id++, MpcLabel::los, MpcLabel::nonrt_subpath, los_toa, los_aoa, los_amp,
                                SubpathCategory::rt_pre, SubpathCategory::rt_post);

            double toa = los_toa;
            std::size_t replacements = wall_path_count(options.rt);
            for (std::size_t k = 0; k < replacements; ++k)
            {
                toa += exponential_gap(params.inter_arrival_rate_per_ns, rng) * 1.0e-9;
                const auto &law = params.rt.inter_amplitude;
                double amp = amplitude_from_law(los_amp, law.a, law.b, (toa - los_toa) * 1.0e9);
                double aoa = sample_von_mises(params.rt.inter_aoa.mu, params.rt.inter_aoa.kappa, rng);
                builder.add_cluster(next_id++, MpcLabel::nonrt_center, MpcLabel::nonrt_subpath, toa, aoa, amp,
                                    SubpathCategory::rt_pre, SubpathCategory::rt_post);
            }
        }

        // Obstacle (non-RT) clusters, each chained from the previous cluster's arrival
        std::size_t n_nonrt = sample_cluster_count(d, params.cluster_count_slope, params.cluster_count_intercept);
        double toa = los_toa;
        for (std::size_t q = 0; q < n_nonrt; ++q)
        {
            toa += exponential_gap(params.inter_arrival_rate_per_ns, rng) * 1.0e-9;
            const auto &law = params.nonrt.inter_amplitude;
            double amp = amplitude_from_law(los_amp, law.a, law.b, (toa - los_toa) * 1.0e9);
            double aoa = sample_von_mises(params.nonrt.inter_aoa.mu, params.nonrt.inter_aoa.kappa, rng);
            builder.add_cluster(next_id++, MpcLabel::nonrt_center, MpcLabel::nonrt_subpath, toa, aoa, amp,
                                SubpathCategory::nonrt_pre, SubpathCategory::nonrt_post);
        }

        out.cluster_count = static_cast<std::size_t>(next_id);
        out.nonrt_cluster_count = n_nonrt;
        return out;
    }

    void write_realization_csv(std::ostream &os, const ChannelRealization &realization)
    {
        os << "cluster_id,label,toa_ns,aoa_deg,power_dbm,phase_rad\n";
        char buf[256];
        for (const auto &m : realization.mpcs)
        {
            std::snprintf(buf, sizeof(buf), "%d,%s,%.6f,%.6f,%.6f,%.9f\n", m.cluster_id,
                          std::string(to_string(m.label)).c_str(), m.mpc.toa_s * 1e9, rad2deg(m.mpc.aoa_az),
                          watts_to_dbm(m.mpc.power_w), m.phase);
            os << buf;
        }
    }

} // namespace thz
