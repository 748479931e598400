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


#ifndef THZCHAN_ANALYSIS_HPP
#define THZCHAN_ANALYSIS_HPP

#include "thzchan/clustering.hpp"
#include "thzchan/pdap.hpp"

#include <array>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

/*!SECTION
Channel characteristics and their statistics
SECTION!*/

namespace thz
{
    inline constexpr double infinite_ratio = std::numeric_limits<double>::infinity();

    /// Free-space path loss in dB, -20 log10(c / (4 pi f d)).
    double fspl_db(double d_m, double f_hz);

    struct PathLossSample
    {
        double d_m = 0.0;
        double path_loss_db = 0.0;
    };

    struct CiFit
    {
        double ple = 0.0;
        double sigma_sf_db = 0.0;
        double d0_m = 1.0;
    };

    /// Close-in reference-distance model, PLE from least squares with the FSPL(d0) intercept fixed.
    CiFit fit_ci(std::span<const PathLossSample> samples, double f_hz, double d0_m = 1.0);

    /// RMS shadow-fading residual for a given PLE.
    double ci_sigma_db(std::span<const PathLossSample> samples, double ple, double f_hz, double d0_m = 1.0);

    // ---------- Dispersion ----------

    /// RMS delay spread of a power-delay profile sampled every `bin_s`, in seconds.
    double rms_delay_spread(std::span<const double> pdp, double bin_s);
    double rms_delay_spread(std::span<const Mpc> mpcs);

    /// Angular spread in radians. Angles are unwrapped around the power-weighted circular mean
    /// before taking the second central moment, so a uniform ring gives about 104 degrees.
    double angular_spread(std::span<const double> pap, double bin_rad);
    double angular_spread(std::span<const Mpc> mpcs);

    // ---------- Cluster-level characteristics ----------

    /// Cluster holding the strongest clustered MPC, earliest centroid on ties.
    std::optional<std::size_t> find_los_cluster(const ClusterSet &set, std::span<const Mpc> mpcs);

    /// LoS-cluster power over the summed power of the remaining clusters; outliers excluded.
    /// No NLoS cluster gives +inf.
    double k_factor(const ClusterSet &set, std::span<const Mpc> mpcs);

    /// Matched (wall) non-LoS cluster power over non-matched (obstacle) cluster power.
    double wall_reflection_ratio(const ClusterSet &set, std::span<const Mpc> mpcs);

    struct ClusterSpread
    {
        double cds_s = 0.0;
        double cas_rad = 0.0;
    };

    std::vector<ClusterSpread> intra_cluster_spreads(const ClusterSet &set, std::span<const Mpc> mpcs);

    // ---------- Statistics ----------

    struct LogNormalFit
    {
        double mu = 0.0;
        double sigma = 0.0;
        std::size_t excluded = 0; // non-finite samples skipped by fit_lognormal_finite
    };

    /// Maximum-likelihood fit: mean and population standard deviation of ln(x).
    LogNormalFit fit_lognormal(std::span<const double> samples);
    LogNormalFit fit_lognormal_finite(std::span<const double> samples);

    struct CharacteristicsRow
    {
        std::string label;
        double d_m = 0.0;
        double n_clusters = 0.0;
        double k_factor = 0.0;
        double ds_s = 0.0;
        double as_rad = 0.0;
        double r_w = 0.0;

        // {d, N, K, DS [ns], AS [deg], R_w}, the units used in reports
        std::array<double, 6> report_values() const;
    };

    inline constexpr std::array<const char *, 6> characteristic_names{"d", "N", "K", "DS", "AS", "R_w"};

    struct CorrelationMatrix
    {
        // Undefined (nullopt) for zero-variance columns
        std::array<std::array<std::optional<double>, 6>, 6> rho{};
        std::size_t rows_used = 0;
        std::size_t rows_excluded = 0; // rows holding a +inf sentinel
    };

    /// Pearson correlation between every pair of {d, N, K, DS, AS, R_w}.
    CorrelationMatrix correlation_matrix(std::span<const CharacteristicsRow> rows);

    double pearson(std::span<const double> x, std::span<const double> y);

    // ---------- Reports ----------

    // rx,d_m,N,K,DS_ns,AS_deg,R_w
    void write_characteristics_csv(std::ostream &os, std::span<const CharacteristicsRow> rows);
    std::vector<CharacteristicsRow> read_characteristics_csv(std::istream &is);

    void write_correlation_csv(std::ostream &os, const CorrelationMatrix &m);

    // ---------- Pipeline ----------

    /// Calibrated clustering defaults for 10-degree by 76.9 ps grids. With zeta = 1000 one nanosecond of delay
    /// weighs about 0.063, so eps = 0.15 reaches one azimuth bin either side or about 2.4 ns along delay.
    struct AnalysisConfig
    {
        double threshold_dbm = -140.0;
        double eps = 0.15;
        std::size_t min_points = 6;
        McdConfig mcd{1000.0};
        bool recompute_tau_std = false;
        double tx_power_w = 1.0e-3;
    };

    struct ChannelAnalysis
    {
        std::vector<Mpc> mpcs; // above threshold, cell centers
        ClusterSet clusters;
        std::optional<std::size_t> los_cluster;
        CharacteristicsRow row;
        std::vector<ClusterSpread> spreads;
        double received_power_w = 0.0;
        double path_loss_db = 0.0;
    };

    /// Extraction, MCD-DBSCAN, matching against `rt_paths` and characteristic extraction.
    ChannelAnalysis analyze_pdap(const PdapGrid &grid, std::span<const RtPath> rt_paths, double d_m,
                                 const AnalysisConfig &cfg);

} // namespace thz

#endif
