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


#include "thzchan/geometry_rt.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace thz
{
    char wall_code(Wall w)
    {
        switch (w)
        {
        case Wall::west:
            return 'W';
        case Wall::east:
            return 'E';
        case Wall::south:
            return 'S';
        case Wall::north:
            return 'N';
        }
        return '?';
    }

    std::string RtPath::wall_sequence() const
    {
        std::string out;
        for (std::size_t i = 0; i < walls.size(); ++i)
        {
            if (i > 0)
                out += '-';
            out += wall_code(walls[i]);
        }
        return out.empty() ? std::string("LoS") : out;
    }

    void RoomScene::validate() const
    {
        if (!(length_m > 0.0) || !(width_m > 0.0))
            throw std::invalid_argument("Room dimensions must be positive.");
        auto strictly_inside = [&](const Point2 &p)
        { return p.x > 0.0 && p.x < length_m && p.y > 0.0 && p.y < width_m; };
        if (!strictly_inside(tx))
            throw std::invalid_argument("Tx must lie strictly inside the room (on-wall positions are degenerate).");
        if (!strictly_inside(rx))
            throw std::invalid_argument("Rx must lie strictly inside the room (on-wall positions are degenerate).");
        if (tx.x == rx.x && tx.y == rx.y)
            throw std::invalid_argument("Tx and Rx positions coincide.");
        if (!(wall_permittivity > 1.0))
            throw std::invalid_argument("Wall permittivity must exceed 1.");
        if (!(carrier_frequency_hz > 0.0))
            throw std::invalid_argument("Carrier frequency must be positive.");
    }

    double AntennaBeam::gain_db(double azimuth) const
    {
        double offset = std::abs(wrap_pi(azimuth - boresight_az));
        double rolloff = 12.0 * (offset / hpbw) * (offset / hpbw);
        return peak_gain_db - std::min(rolloff, antenna_floor_db);
    }

    double antenna_gain(const AntennaBeam &beam, double azimuth)
    {
        return std::pow(10.0, beam.gain_db(azimuth) / 10.0);
    }

    AntennaBeam default_tx_beam(const RoomScene &scene)
    {
        double boresight = std::atan2(scene.rx.y - scene.tx.y, scene.rx.x - scene.tx.x);
        return AntennaBeam{wrap_two_pi(boresight), 15.0, deg2rad(30.0)};
    }

    AntennaBeam default_rx_beam()
    {
        return AntennaBeam{0.0, 25.0, deg2rad(10.0)};
    }

    std::size_t wall_path_count(const RtOptions &options)
    {
        std::size_t count = 0;
        for (int k = 1; k <= options.max_order; ++k)
            count += (options.cap_third_order && k == 3) ? 8 : 4 * static_cast<std::size_t>(k);
        return count;
    }

    double fresnel_reflection_magnitude(double incidence, double permittivity, Polarization polarization)
    {
        if (!(permittivity > 1.0))
            throw std::invalid_argument("Permittivity must exceed 1.");
        if (incidence < 0.0 || incidence > pi / 2.0)
            throw std::invalid_argument("Incidence angle must lie in [0, pi/2].");
        if (incidence == pi / 2.0)
            return 1.0;

        double c = std::cos(incidence);
        double s = std::sin(incidence);
        double root = std::sqrt(permittivity - s * s);
        double gamma = polarization == Polarization::te ? (c - root) / (c + root)
                                                        : (permittivity * c - root) / (permittivity * c + root);
        return std::min(std::abs(gamma), 1.0);
    }

    double rt_amplitude(const RtPath &path, const RoomScene &scene)
    {
        if (!(path.toa_s > 0.0))
            throw std::invalid_argument("Path time of arrival must be positive.");
        double gamma = 1.0;
        for (double angle : path.incidence)
            gamma *= fresnel_reflection_magnitude(angle, scene.wall_permittivity, scene.polarization);
        return gamma / (4.0 * pi * scene.carrier_frequency_hz * path.toa_s);
    }

    namespace
    {
        // Image coordinate of `src` in lattice cell `cell` along one axis of extent `size`
        double image_coordinate(double src, double size, int cell)
        {
            return cell * size + ((cell % 2 == 0) ? src : size - src);
        }

        // Lattice lines crossed between the image cell and the room cell, as (t, wall) pairs
        void add_crossings(std::vector<std::pair<double, Wall>> &out, double from, double to, double size, int cell,
                           Wall even_wall, Wall odd_wall)
        {
            if (cell == 0)
                return;
            int lo = cell > 0 ? 1 : cell + 1;
            int hi = cell > 0 ? cell : 0;
            for (int k = lo; k <= hi; ++k)
            {
                double t = (k * size - from) / (to - from);
                out.emplace_back(t, (k % 2 == 0) ? even_wall : odd_wall);
            }
        }

        RtPath trace_image(const RoomScene &scene, int ix, int iy)
        {
            Point2 img{image_coordinate(scene.tx.x, scene.length_m, ix),
                       image_coordinate(scene.tx.y, scene.width_m, iy)};
            double dx = scene.rx.x - img.x;
            double dy = scene.rx.y - img.y;
            double len = std::hypot(dx, dy);

            RtPath path;
            path.image_x = ix;
            path.image_y = iy;
            path.length_m = len;
            path.toa_s = len / speed_of_light;
            path.aoa_az = wrap_two_pi(std::atan2(-dy, -dx));
            double dep_x = (ix % 2 != 0) ? -dx : dx;
            double dep_y = (iy % 2 != 0) ? -dy : dy;
            path.aod_az = wrap_two_pi(std::atan2(dep_y, dep_x));

            std::vector<std::pair<double, Wall>> crossings;
            add_crossings(crossings, img.x, scene.rx.x, scene.length_m, ix, Wall::west, Wall::east);
            add_crossings(crossings, img.y, scene.rx.y, scene.width_m, iy, Wall::south, Wall::north);
            std::stable_sort(crossings.begin(), crossings.end(),
                             [](const auto &a, const auto &b) { return a.first < b.first; });

            double incidence_x = std::acos(std::min(1.0, std::abs(dx) / len));
            double incidence_y = std::acos(std::min(1.0, std::abs(dy) / len));
            for (const auto &[t, wall] : crossings)
            {
                path.walls.push_back(wall);
                bool vertical = wall == Wall::west || wall == Wall::east;
                path.incidence.push_back(vertical ? incidence_x : incidence_y);
            }
            path.amplitude = rt_amplitude(path, scene);
            return path;
        }

        auto path_key(const RtPath &p)
        {
            return std::make_tuple(p.toa_s, p.reflection_order(), p.image_x, p.image_y);
        }
    } // namespace

    std::vector<RtPath> enumerate_images(const RoomScene &scene, int max_order)
    {
        return enumerate_images(scene, RtOptions{max_order, false});
    }

    std::vector<RtPath> enumerate_images(const RoomScene &scene, const RtOptions &options)
    {
        if (options.max_order < 0)
            throw std::invalid_argument("Maximum reflection order cannot be negative.");
        scene.validate();

        const int n = options.max_order;
        std::vector<RtPath> paths;
        std::vector<RtPath> third_order;
        for (int ix = -n; ix <= n; ++ix)
            for (int iy = -n; iy <= n; ++iy)
            {
                int order = std::abs(ix) + std::abs(iy);
                if (order > n)
                    continue;
                if (options.cap_third_order && order == 3)
                    third_order.push_back(trace_image(scene, ix, iy));
                else
                    paths.push_back(trace_image(scene, ix, iy));
            }

        if (!third_order.empty())
        {
            std::sort(third_order.begin(), third_order.end(), [](const RtPath &a, const RtPath &b)
                      {
                          if (a.amplitude != b.amplitude)
                              return a.amplitude > b.amplitude;
                          return path_key(a) < path_key(b); });
            third_order.resize(std::min<std::size_t>(third_order.size(), 8));
            paths.insert(paths.end(), third_order.begin(), third_order.end());
        }

        std::sort(paths.begin(), paths.end(),
                  [](const RtPath &a, const RtPath &b) { return path_key(a) < path_key(b); });
        return paths;
    }

    std::vector<Mpc> build_rt_cir(std::span<const RtPath> paths, const AntennaBeam &tx_beam, double tx_power_w)
    {
        std::vector<Mpc> out;
        out.reserve(paths.size());
        for (const auto &p : paths)
        {
            double relative_gain = std::pow(10.0, (tx_beam.gain_db(p.aod_az) - tx_beam.peak_gain_db) / 10.0);
            Mpc m;
            m.toa_s = p.toa_s;
            m.aoa_az = p.aoa_az;
            m.power_w = tx_power_w * relative_gain * p.amplitude * p.amplitude;
            out.push_back(m);
        }
        return out;
    }

    std::vector<Mpc> build_rt_cir(const RoomScene &scene, const RtOptions &options, const AntennaBeam &tx_beam,
                                  double tx_power_w)
    {
        auto paths = enumerate_images(scene, options);
        return build_rt_cir(paths, tx_beam, tx_power_w);
    }

    void write_rt_paths_csv(std::ostream &os, std::span<const RtPath> paths)
    {
        os << "order,wall_seq,toa_ns,aoa_deg,aod_deg,amp_linear,loss_db\n";
        char buf[256];
        for (const auto &p : paths)
        {
            std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f,%.6f,%.6f,%.9e,%.6f\n", p.reflection_order(),
                          p.wall_sequence().c_str(), p.toa_s * 1e9, rad2deg(p.aoa_az), rad2deg(p.aod_az),
                          p.amplitude, -20.0 * std::log10(p.amplitude));
            os << buf;
        }
    }

} // namespace thz
