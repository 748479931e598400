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


#ifndef THZCHAN_GEOMETRY_RT_HPP
#define THZCHAN_GEOMETRY_RT_HPP

#include "thzchan/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

/*!SECTION
Deterministic ray tracing in a rectangular room
SECTION!*/

namespace thz
{
    // Walls of the shoebox room, x in [0, length], y in [0, width]
    enum class Wall : std::uint8_t
    {
        west,  // x = 0
        east,  // x = length
        south, // y = 0
        north  // y = width
    };

    char wall_code(Wall w);

    enum class Polarization : std::uint8_t
    {
        te, // perpendicular
        tm  // parallel
    };

    struct RoomScene
    {
        double length_m = 10.15;
        double width_m = 7.9;
        Point2 tx;
        Point2 rx;
        double wall_permittivity = 6.4;
        double carrier_frequency_hz = 140.0e9;
        Polarization polarization = Polarization::te;

        // Throws std::invalid_argument if the scene is degenerate
        void validate() const;
        double tx_rx_distance() const { return distance(tx, rx); }
    };

    /// A specular path found by the image method.
    ///
    /// `walls` lists the reflecting walls in Tx -> Rx order, `incidence` holds the matching angles
    /// from the wall normal. The lattice cell (image_x, image_y) identifies the image: |image_x|
    /// reflections on the east/west pair, |image_y| on the north/south pair.
    struct RtPath
    {
        std::vector<Wall> walls;
        std::vector<double> incidence;
        double length_m = 0.0;
        double toa_s = 0.0;
        double aoa_az = 0.0; // [0, 2*pi)
        double aod_az = 0.0; // [0, 2*pi)
        double amplitude = 0.0;
        int image_x = 0;
        int image_y = 0;

        std::size_t reflection_order() const { return walls.size(); }
        bool is_los() const { return walls.empty(); }
        std::string wall_sequence() const;
    };

    struct AntennaBeam
    {
        double boresight_az = 0.0; // radians
        double peak_gain_db = 0.0; // dBi
        double hpbw = deg2rad(30.0);

        // Quadratic-in-dB main lobe, floored 30 dB below the peak
        double gain_db(double azimuth) const;
    };

    inline constexpr double antenna_floor_db = 30.0;

    // Tx: 15 dBi / 30 deg, Rx: 25 dBi / 10 deg
    AntennaBeam default_tx_beam(const RoomScene &scene);
    AntennaBeam default_rx_beam();

    struct RtOptions
    {
        int max_order = 3;
        // Keep only the 8 strongest third-order images (20 wall paths in total at max_order = 3)
        bool cap_third_order = false;
    };

    // Number of wall-reflection paths enumerate_images returns for the given options
    std::size_t wall_path_count(const RtOptions &options);

    /// LoS plus every specular wall reflection up to `max_order`, sorted by ToA.
    std::vector<RtPath> enumerate_images(const RoomScene &scene, int max_order);
    std::vector<RtPath> enumerate_images(const RoomScene &scene, const RtOptions &options);

    /// Smooth dielectric half-space reflection magnitude; incidence measured from the normal.
    double fresnel_reflection_magnitude(double incidence, double permittivity,
                                        Polarization polarization = Polarization::te);

    /// prod |Gamma_n| / (4 pi f tau)
    double rt_amplitude(const RtPath &path, const RoomScene &scene);

    /// Linear (power) gain of the beam at the given azimuth.
    double antenna_gain(const AntennaBeam &beam, double azimuth);

    /// Deterministic part of the channel: one MPC per path, in enumerate_images order.
    ///
    /// The Tx pattern is applied relative to its boresight peak, i.e. received powers are
    /// antenna-de-embedded the way a calibrated sounder reports them:
    /// power = tx_power * (A_t * alpha)^2 with A_t = sqrt(G(aod) / G_peak).
    std::vector<Mpc> build_rt_cir(const RoomScene &scene, const RtOptions &options, const AntennaBeam &tx_beam,
                                  double tx_power_w = 1.0e-3);
    std::vector<Mpc> build_rt_cir(std::span<const RtPath> paths, const AntennaBeam &tx_beam,
                                  double tx_power_w = 1.0e-3);

    // CSV: order,wall_seq,toa_ns,aoa_deg,aod_deg,amp_linear,loss_db
    void write_rt_paths_csv(std::ostream &os, std::span<const RtPath> paths);

} // namespace thz

#endif
