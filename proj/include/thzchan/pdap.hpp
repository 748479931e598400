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


#ifndef THZCHAN_PDAP_HPP
#define THZCHAN_PDAP_HPP

#include "thzchan/common.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/*!SECTION
Power-delay-angular profiles
SECTION!*/

namespace thz
{
    /// Grid geometry. Bin (i, j) is centered on delay i*delta_tau and azimuth j*delta_theta.
    struct GridSpec
    {
        double delta_tau_s = 76.9e-12;
        double delta_theta = two_pi / 36.0;
        std::size_t n_tau = 1301;
        std::size_t n_theta = 36;
        double noise_floor_dbm = -160.0;

        void validate() const; // n_theta * delta_theta must cover the full circle
        double max_delay_s() const { return static_cast<double>(n_tau) * delta_tau_s; }
        bool same_shape(const GridSpec &other) const;

        friend bool operator==(const GridSpec &, const GridSpec &) = default;
    };

    /// Received power over (delay bin, azimuth bin), stored in linear watts.
    class PdapGrid
    {
    public:
        PdapGrid() = default;
        explicit PdapGrid(const GridSpec &spec);

        const GridSpec &spec() const { return spec_; }
        std::size_t n_tau() const { return spec_.n_tau; }
        std::size_t n_theta() const { return spec_.n_theta; }

        double power(std::size_t i, std::size_t j) const { return power_[i * spec_.n_theta + j]; }
        void set_power(std::size_t i, std::size_t j, double watts);
        void add_power(std::size_t i, std::size_t j, double watts);

        // dBm with cells below the noise floor (including empty cells) reported at the floor
        double dbm(std::size_t i, std::size_t j) const;
        std::vector<double> dbm_view() const;

        std::span<const double> linear() const { return power_; }
        double total_power() const;
        double max_dbm() const;

        // Power-delay profile A(i) = sum_j P(i, j) and power-angle profile
        std::vector<double> delay_profile() const;
        std::vector<double> azimuth_profile() const;

        friend bool operator==(const PdapGrid &, const PdapGrid &) = default;

    private:
        GridSpec spec_{};
        std::vector<double> power_;
    };

    /// Sum of elevation slices, PDAP(i, j) = sum_k p(i, j, k).
    PdapGrid compose_elevation(std::span<const PdapGrid> slices);

    class RasterizeError : public std::invalid_argument
    {
    public:
        RasterizeError(const std::string &what, std::size_t index) : std::invalid_argument(what), index_(index) {}
        std::size_t index() const { return index_; }

    private:
        std::size_t index_;
    };

    /// Nearest-bin accumulation of MPC powers. Exact midpoints go to the lower bin.
    PdapGrid rasterize(std::span<const Mpc> mpcs, const GridSpec &spec);

    /// One MPC per cell strictly above the threshold, at the cell center.
    std::vector<Mpc> extract_mpcs(const PdapGrid &grid, double threshold_dbm);

    class PdapFormatError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            malformed_header,
            dimension_mismatch,
            invariant_violation,
            non_numeric,
            io
        };

        PdapFormatError(Kind kind, const std::string &what, std::size_t line)
            : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line)
        {
        }
        Kind kind() const { return kind_; }
        std::size_t line() const { return line_; }

    private:
        Kind kind_;
        std::size_t line_;
    };

    // "# pdap v1 dtau_ns=<f> dtheta_deg=<f> ntau=<i> ntheta=<i> noise_dbm=<f>", then n_tau rows of dBm
    void write_pdap(const PdapGrid &grid, std::ostream &os);
    void write_pdap(const PdapGrid &grid, const std::filesystem::path &path);
    PdapGrid read_pdap(std::istream &is);
    PdapGrid read_pdap(const std::filesystem::path &path);

} // namespace thz

#endif
