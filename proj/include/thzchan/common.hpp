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

#ifndef THZCHAN_COMMON_HPP
#define THZCHAN_COMMON_HPP

#include <cmath>
#include <numbers>
#include <optional>

namespace thz
{
    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

    // Wrap to [0, 2*pi)
    inline double wrap_two_pi(double angle)
    {
        double a = std::fmod(angle, two_pi);
        if (a < 0.0)
            a += two_pi;
        if (a >= two_pi) // fmod of a tiny negative value can round up to 2*pi
            a = 0.0;
        return a;
    }

    // Wrap to (-pi, pi]
    inline double wrap_pi(double angle)
    {
        double a = wrap_two_pi(angle);
        return a > pi ? a - two_pi : a;
    }

    inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
    };

    inline double distance(const Point2 &a, const Point2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

    /// One multipath component as seen at the receiver.
    struct Mpc
    {
        double toa_s = 0.0;                  // time of arrival
        double aoa_az = 0.0;                 // azimuth angle of arrival, radians in [0, 2*pi)
        std::optional<double> aoa_el;        // elevation, measurement ingest only
        double power_w = 0.0;                // linear received power
    };

} // namespace thz

#endif
