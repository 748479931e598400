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


#include "thzchan/scenes.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace thz
{
    namespace
    {
        constexpr std::array<double, 9> set1_d{1.43, 3.16, 5.26, 2.20, 5.52, 5.14, 5.87, 6.97, 7.12};
        constexpr std::array<double, 12> set2_d{5.28, 3.97, 3.04, 4.63, 3.05, 1.68, 4.65, 3.08, 1.86, 4.01, 5.34, 3.17};

        template <std::size_t N>
        void fan_out(std::vector<NamedScene> &out, const char *prefix, Point2 tx, const std::array<double, N> &dist,
                     double first_deg, double last_deg)
        {
            for (std::size_t k = 0; k < N; ++k)
            {
                double a = deg2rad(first_deg + (last_deg - first_deg) * static_cast<double>(k) / static_cast<double>(N - 1));
                RoomScene s;
                s.tx = tx;
                s.rx = {tx.x + dist[k] * std::cos(a), tx.y + dist[k] * std::sin(a)};
                s.validate();
                char label[16];
                std::snprintf(label, sizeof(label), "%s-Rx%zu", prefix, k + 1);
                out.push_back({label, s});
            }
        }
    } // namespace

    std::vector<NamedScene> validation_scenes()
    {
        std::vector<NamedScene> out;
        fan_out(out, "Tx1", {0.4, 0.4}, set1_d, 20.0, 60.0);
        fan_out(out, "Tx2", {5.0, 0.6}, set2_d, 30.0, 150.0);
        return out;
    }

    std::vector<double> validation_distances()
    {
        std::vector<double> out(set1_d.begin(), set1_d.end());
        out.insert(out.end(), set2_d.begin(), set2_d.end());
        return out;
    }

} // namespace thz
