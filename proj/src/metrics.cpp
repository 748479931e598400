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


#include "thzchan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace thz
{
    void SsimOptions::validate() const
    {
        if (window == 0 || window % 2 == 0)
            throw std::invalid_argument("SSIM window size must be odd.");
        if (!(sigma > 0.0) || !(k1 > 0.0) || !(k2 > 0.0))
            throw std::invalid_argument("SSIM sigma and constants must be positive.");
    }

    namespace
    {
        void require_same_shape(const PdapGrid &a, const PdapGrid &b)
        {
            if (!a.spec().same_shape(b.spec()))
                throw std::invalid_argument("PDAP grids differ in shape or resolution.");
            if (a.n_tau() == 0 || a.n_theta() == 0)
                throw std::invalid_argument("Empty PDAP grid.");
        }

        std::vector<double> shifted_view(const PdapGrid &g)
        {
            auto v = g.dbm_view();
            for (double &x : v)
                x -= g.spec().noise_floor_dbm;
            return v;
        }

        // Separable Gaussian filter: circular along azimuth (columns), edge-clamped along delay (rows)
        class GaussianFilter
        {
          public:
            GaussianFilter(std::size_t rows, std::size_t cols, const SsimOptions &opt)
                : rows_(rows), cols_(cols), half_(static_cast<std::ptrdiff_t>(opt.window / 2)), tmp_(rows * cols)
            {
                double sum = 0.0;
                for (std::ptrdiff_t k = -half_; k <= half_; ++k)
                {
                    double w = std::exp(-0.5 * static_cast<double>(k * k) / (opt.sigma * opt.sigma));
                    taps_.push_back(w);
                    sum += w;
                }
                for (double &w : taps_)
                    w /= sum;
            }

            std::vector<double> apply(const std::vector<double> &in)
            {
                const auto R = static_cast<std::ptrdiff_t>(rows_), C = static_cast<std::ptrdiff_t>(cols_);
                for (std::ptrdiff_t i = 0; i < R; ++i)
                    for (std::ptrdiff_t j = 0; j < C; ++j)
                    {
                        double acc = 0.0;
                        for (std::ptrdiff_t k = -half_; k <= half_; ++k)
                        {
                            std::ptrdiff_t jj = ((j + k) % C + C) % C;
                            acc += taps_[static_cast<std::size_t>(k + half_)] * in[static_cast<std::size_t>(i * C + jj)];
                        }
                        tmp_[static_cast<std::size_t>(i * C + j)] = acc;
                    }
                std::vector<double> out(in.size());
                for (std::ptrdiff_t i = 0; i < R; ++i)
                    for (std::ptrdiff_t j = 0; j < C; ++j)
                    {
                        double acc = 0.0;
                        for (std::ptrdiff_t k = -half_; k <= half_; ++k)
                        {
                            std::ptrdiff_t ii = std::clamp<std::ptrdiff_t>(i + k, 0, R - 1);
                            acc += taps_[static_cast<std::size_t>(k + half_)] * tmp_[static_cast<std::size_t>(ii * C + j)];
                        }
                        out[static_cast<std::size_t>(i * C + j)] = acc;
                    }
                return out;
            }

          private:
            std::size_t rows_, cols_;
            std::ptrdiff_t half_;
            std::vector<double> taps_;
            std::vector<double> tmp_;
        };
    } // namespace

    double rmse_pdap(const PdapGrid &measured, const PdapGrid &simulated)
    {
        require_same_shape(measured, simulated);
        double ss = 0.0;
        for (std::size_t i = 0; i < measured.n_tau(); ++i)
            for (std::size_t j = 0; j < measured.n_theta(); ++j)
            {
                double d = measured.dbm(i, j) - simulated.dbm(i, j);
                ss += d * d;
            }
        return std::sqrt(ss / static_cast<double>(measured.n_tau() * measured.n_theta()));
    }

    namespace
    {
        std::pair<double, double> ssim_and_range(const PdapGrid &measured, const PdapGrid &simulated,
                                                 const SsimOptions &opt)
        {
            require_same_shape(measured, simulated);
            opt.validate();
            auto x = shifted_view(measured);
            auto y = shifted_view(simulated);
            double L = std::max(*std::max_element(x.begin(), x.end()), *std::max_element(y.begin(), y.end()));
            if (!(L > 0.0))
            {
                if (x == y)
                    return {1.0, 0.0};
                throw std::invalid_argument("SSIM undefined: zero dynamic range with differing grids.");
            }
            const double c1 = (opt.k1 * L) * (opt.k1 * L);
            const double c2 = (opt.k2 * L) * (opt.k2 * L);

            const std::size_t n = x.size();
            std::vector<double> xx(n), yy(n), xy(n);
            for (std::size_t k = 0; k < n; ++k)
            {
                xx[k] = x[k] * x[k];
                yy[k] = y[k] * y[k];
                xy[k] = x[k] * y[k];
            }
            GaussianFilter filt(measured.n_tau(), measured.n_theta(), opt);
            auto mx = filt.apply(x);
            auto my = filt.apply(y);
            auto sxx = filt.apply(xx);
            auto syy = filt.apply(yy);
            auto sxy = filt.apply(xy);

            double total = 0.0;
            for (std::size_t k = 0; k < n; ++k)
            {
                double vx = sxx[k] - mx[k] * mx[k];
                double vy = syy[k] - my[k] * my[k];
                double cxy = sxy[k] - mx[k] * my[k];
                double num = (2.0 * mx[k] * my[k] + c1) * (2.0 * cxy + c2);
                double den = (mx[k] * mx[k] + my[k] * my[k] + c1) * (vx + vy + c2);
                total += num / den;
            }
            return {std::clamp(total / static_cast<double>(n), 0.0, 1.0), L};
        }
    } // namespace

    double ssim_pdap(const PdapGrid &measured, const PdapGrid &simulated, const SsimOptions &opt)
    {
        return ssim_and_range(measured, simulated, opt).first;
    }

    MetricReport compare_pdap(const PdapGrid &measured, const PdapGrid &simulated, const SsimOptions &opt)
    {
        MetricReport r;
        r.rmse_db = rmse_pdap(measured, simulated);
        std::tie(r.ssim, r.dynamic_range_db) = ssim_and_range(measured, simulated, opt);
        r.n_tau = measured.n_tau();
        r.n_theta = measured.n_theta();
        return r;
    }

    PdapGrid rotate_azimuth(const PdapGrid &grid, std::ptrdiff_t k)
    {
        PdapGrid out(grid.spec());
        const auto C = static_cast<std::ptrdiff_t>(grid.n_theta());
        for (std::size_t i = 0; i < grid.n_tau(); ++i)
            for (std::ptrdiff_t j = 0; j < C; ++j)
                out.set_power(i, static_cast<std::size_t>(((j + k) % C + C) % C),
                              grid.power(i, static_cast<std::size_t>(j)));
        return out;
    }

    std::vector<CdfPoint> empirical_cdf(std::span<const double> values)
    {
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<CdfPoint> out(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            out[i] = {sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size())};
        return out;
    }

} // namespace thz
