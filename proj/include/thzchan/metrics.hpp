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


#ifndef THZCHAN_METRICS_HPP
#define THZCHAN_METRICS_HPP

#include "thzchan/pdap.hpp"

#include <cstddef>
#include <span>
#include <vector>

/*!SECTION
PDAP similarity metrics
SECTION!*/

namespace thz
{
    struct SsimOptions
    {
        std::size_t window = 11; // odd
        double sigma = 1.5;      // Gaussian window, in bins
        double k1 = 0.01;
        double k2 = 0.03;
        void validate() const;
    };

    struct MetricReport
    {
        double rmse_db = 0.0;
        double ssim = 0.0;
        std::size_t n_tau = 0;
        std::size_t n_theta = 0;
        double dynamic_range_db = 0.0;
    };

    /// Root-mean-square difference of the two dBm views (noise-floor filled), over every cell.
    double rmse_pdap(const PdapGrid &measured, const PdapGrid &simulated);

    /// Mean local SSIM on the floor-shifted dB views. The window wraps in azimuth and clamps in delay.
    /// The dynamic range is the largest shifted value of either grid. The mean is clipped to [0, 1].
    double ssim_pdap(const PdapGrid &measured, const PdapGrid &simulated, const SsimOptions &opt = {});

    MetricReport compare_pdap(const PdapGrid &measured, const PdapGrid &simulated, const SsimOptions &opt = {});

    /// Rotate a grid by `k` azimuth bins (positive k moves power to higher bins).
    PdapGrid rotate_azimuth(const PdapGrid &grid, std::ptrdiff_t k);

    /// Sorted values with their empirical quantiles (i+1)/n.
    struct CdfPoint
    {
        double value = 0.0;
        double quantile = 0.0;
    };
    std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

} // namespace thz

#endif
