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


#include "thzchan/pdap.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace thz
{
    void GridSpec::validate() const
    {
        if (!(delta_tau_s > 0.0) || !(delta_theta > 0.0))
            throw std::invalid_argument("Grid resolutions must be positive.");
        if (n_tau == 0 || n_theta == 0)
            throw std::invalid_argument("Grid dimensions must be non-zero.");
        if (std::abs(static_cast<double>(n_theta) * delta_theta - two_pi) > 1.0e-9)
            throw std::invalid_argument("Azimuth bins must cover the full circle (n_theta * delta_theta = 360 deg).");
    }

    bool GridSpec::same_shape(const GridSpec &other) const
    {
        return n_tau == other.n_tau && n_theta == other.n_theta && delta_tau_s == other.delta_tau_s &&
               delta_theta == other.delta_theta;
    }

    PdapGrid::PdapGrid(const GridSpec &spec) : spec_(spec)
    {
        spec_.validate();
        power_.assign(spec_.n_tau * spec_.n_theta, 0.0);
    }

    void PdapGrid::set_power(std::size_t i, std::size_t j, double watts)
    {
        if (!(watts >= 0.0))
            throw std::invalid_argument("Cell power cannot be negative.");
        power_.at(i * spec_.n_theta + j) = watts;
    }

    void PdapGrid::add_power(std::size_t i, std::size_t j, double watts)
    {
        if (!(watts >= 0.0))
            throw std::invalid_argument("Cell power cannot be negative.");
        power_.at(i * spec_.n_theta + j) += watts;
    }

    double PdapGrid::dbm(std::size_t i, std::size_t j) const
    {
        double p = power(i, j);
        if (p <= 0.0)
            return spec_.noise_floor_dbm;
        return std::max(watts_to_dbm(p), spec_.noise_floor_dbm);
    }

    std::vector<double> PdapGrid::dbm_view() const
    {
        std::vector<double> out(power_.size());
        for (std::size_t i = 0; i < spec_.n_tau; ++i)
            for (std::size_t j = 0; j < spec_.n_theta; ++j)
                out[i * spec_.n_theta + j] = dbm(i, j);
        return out;
    }

    double PdapGrid::total_power() const
    {
        double sum = 0.0;
        for (double p : power_)
            sum += p;
        return sum;
    }

    double PdapGrid::max_dbm() const
    {
        double mx = 0.0;
        for (double p : power_)
            mx = std::max(mx, p);
        return mx > 0.0 ? std::max(watts_to_dbm(mx), spec_.noise_floor_dbm) : spec_.noise_floor_dbm;
    }

    std::vector<double> PdapGrid::delay_profile() const
    {
        std::vector<double> out(spec_.n_tau, 0.0);
        for (std::size_t i = 0; i < spec_.n_tau; ++i)
            for (std::size_t j = 0; j < spec_.n_theta; ++j)
                out[i] += power(i, j);
        return out;
    }

    std::vector<double> PdapGrid::azimuth_profile() const
    {
        std::vector<double> out(spec_.n_theta, 0.0);
        for (std::size_t i = 0; i < spec_.n_tau; ++i)
            for (std::size_t j = 0; j < spec_.n_theta; ++j)
                out[j] += power(i, j);
        return out;
    }

    PdapGrid compose_elevation(std::span<const PdapGrid> slices)
    {
        if (slices.empty())
            throw std::invalid_argument("At least one elevation slice is required.");
        PdapGrid out(slices.front().spec());
        for (const auto &slice : slices)
        {
            if (!slice.spec().same_shape(out.spec()))
                throw std::invalid_argument("Elevation slices have mismatched grid shapes.");
            for (std::size_t i = 0; i < out.n_tau(); ++i)
                for (std::size_t j = 0; j < out.n_theta(); ++j)
                    out.add_power(i, j, slice.power(i, j));
        }
        return out;
    }

    namespace
    {
        // Nearest integer, exact .5 ties toward the lower index
        long nearest_lower_tie(double x)
        {
            return static_cast<long>(std::ceil(x - 0.5));
        }
    } // namespace

    PdapGrid rasterize(std::span<const Mpc> mpcs, const GridSpec &spec)
    {
        PdapGrid grid(spec);
        for (std::size_t k = 0; k < mpcs.size(); ++k)
        {
            const Mpc &m = mpcs[k];
            if (!std::isfinite(m.toa_s) || m.toa_s < 0.0 || m.toa_s >= spec.max_delay_s())
                throw RasterizeError("MPC " + std::to_string(k) + " lies outside the delay window.", k);
            if (!std::isfinite(m.power_w) || m.power_w < 0.0 || !std::isfinite(m.aoa_az))
                throw RasterizeError("MPC " + std::to_string(k) + " has an invalid power or angle.", k);

            long i = std::min<long>(nearest_lower_tie(m.toa_s / spec.delta_tau_s), static_cast<long>(spec.n_tau) - 1);
            long j = nearest_lower_tie(wrap_two_pi(m.aoa_az) / spec.delta_theta) % static_cast<long>(spec.n_theta);
            grid.add_power(static_cast<std::size_t>(i), static_cast<std::size_t>(j), m.power_w);
        }
        return grid;
    }

    std::vector<Mpc> extract_mpcs(const PdapGrid &grid, double threshold_dbm)
    {
        const auto &spec = grid.spec();
        std::vector<Mpc> out;
        double threshold_w = dbm_to_watts(threshold_dbm);
        for (std::size_t i = 0; i < grid.n_tau(); ++i)
            for (std::size_t j = 0; j < grid.n_theta(); ++j)
            {
                double p = grid.power(i, j);
                if (p > threshold_w && watts_to_dbm(p) > threshold_dbm)
                {
                    Mpc m;
                    m.toa_s = static_cast<double>(i) * spec.delta_tau_s;
                    m.aoa_az = static_cast<double>(j) * spec.delta_theta;
                    m.power_w = p;
                    out.push_back(m);
                }
            }
        return out;
    }

    void write_pdap(const PdapGrid &grid, std::ostream &os)
    {
        const auto &s = grid.spec();
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", s.delta_tau_s * 1e9);
        os << "# pdap v1 dtau_ns=" << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", rad2deg(s.delta_theta));
        os << " dtheta_deg=" << buf << " ntau=" << s.n_tau << " ntheta=" << s.n_theta;
        std::snprintf(buf, sizeof(buf), "%.17g", s.noise_floor_dbm);
        os << " noise_dbm=" << buf << '\n';

        std::string line;
        for (std::size_t i = 0; i < grid.n_tau(); ++i)
        {
            line.clear();
            for (std::size_t j = 0; j < grid.n_theta(); ++j)
            {
                double v = grid.dbm(i, j);
                int n = (v == s.noise_floor_dbm) ? std::snprintf(buf, sizeof(buf), "%.17g", v)
                                                  : std::snprintf(buf, sizeof(buf), "%.9f", v);
                if (j > 0)
                    line += ',';
                line.append(buf, static_cast<std::size_t>(n));
            }
            line += '\n';
            os << line;
        }
    }

    void write_pdap(const PdapGrid &grid, const std::filesystem::path &path)
    {
        std::ofstream os(path);
        if (!os)
            throw std::runtime_error("Cannot open '" + path.string() + "' for writing.");
        write_pdap(grid, os);
        if (!os)
            throw std::runtime_error("Failed writing '" + path.string() + "'.");
    }

    namespace
    {
        using Kind = PdapFormatError::Kind;

        bool parse_double(std::string_view text, double &out)
        {
            while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
                text.remove_prefix(1);
            while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
                text.remove_suffix(1);
            if (text.empty())
                return false;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
            return ec == std::errc() && ptr == text.data() + text.size();
        }

        GridSpec parse_header(const std::string &line)
        {
            std::istringstream ss(line);
            std::string hash, magic, version;
            ss >> hash >> magic >> version;
            if (hash != "#" || magic != "pdap" || version != "v1")
                throw PdapFormatError(Kind::malformed_header, "expected '# pdap v1' header", 1);

            std::map<std::string, std::string> fields;
            std::string token;
            while (ss >> token)
            {
                auto eq = token.find('=');
                if (eq == std::string::npos)
                    throw PdapFormatError(Kind::malformed_header, "header token '" + token + "' is not key=value", 1);
                fields[token.substr(0, eq)] = token.substr(eq + 1);
            }
            auto number = [&](const char *key)
            {
                auto it = fields.find(key);
                double v = 0.0;
                if (it == fields.end())
                    throw PdapFormatError(Kind::malformed_header, std::string("missing header field ") + key, 1);
                if (!parse_double(it->second, v))
                    throw PdapFormatError(Kind::malformed_header, std::string("header field ") + key + " is not numeric", 1);
                return v;
            };
            auto count = [&](const char *key)
            {
                double v = number(key);
                if (v < 1.0 || v != std::floor(v) || v > 1.0e9)
                    throw PdapFormatError(Kind::malformed_header, std::string("header field ") + key + " must be a positive integer", 1);
                return static_cast<std::size_t>(v);
            };

            GridSpec spec;
            spec.delta_tau_s = number("dtau_ns") * 1e-9;
            double dtheta_deg = number("dtheta_deg");
            spec.n_tau = count("ntau");
            spec.n_theta = count("ntheta");
            spec.noise_floor_dbm = number("noise_dbm");
            if (!(spec.delta_tau_s > 0.0) || !(dtheta_deg > 0.0))
                throw PdapFormatError(Kind::invariant_violation, "resolutions must be positive", 1);
            if (std::abs(static_cast<double>(spec.n_theta) * dtheta_deg - 360.0) > 1.0e-6)
                throw PdapFormatError(Kind::invariant_violation, "ntheta * dtheta_deg must equal 360", 1);
            spec.delta_theta = two_pi / static_cast<double>(spec.n_theta);
            return spec;
        }
    } // namespace

    PdapGrid read_pdap(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line))
            throw PdapFormatError(Kind::malformed_header, "empty file", 1);
        PdapGrid grid(parse_header(line));
        const auto &spec = grid.spec();

        std::size_t line_no = 1;
        std::size_t row = 0;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty() || line == "\r")
                continue;
            if (row >= spec.n_tau)
                throw PdapFormatError(Kind::dimension_mismatch, "more than ntau=" + std::to_string(spec.n_tau) + " rows", line_no);

            std::size_t col = 0;
            std::string_view rest(line);
            while (true)
            {
                auto comma = rest.find(',');
                std::string_view cell = rest.substr(0, comma);
                if (col >= spec.n_theta)
                    throw PdapFormatError(Kind::dimension_mismatch, "more than ntheta=" + std::to_string(spec.n_theta) + " columns", line_no);
                double v = 0.0;
                if (!parse_double(cell, v) || !std::isfinite(v))
                    throw PdapFormatError(Kind::non_numeric, "non-numeric cell '" + std::string(cell) + "'", line_no);
                grid.set_power(row, col, v <= spec.noise_floor_dbm ? 0.0 : dbm_to_watts(v));
                ++col;
                if (comma == std::string_view::npos)
                    break;
                rest.remove_prefix(comma + 1);
            }
            if (col != spec.n_theta)
                throw PdapFormatError(Kind::dimension_mismatch, "expected " + std::to_string(spec.n_theta) + " columns, found " + std::to_string(col), line_no);
            ++row;
        }
        if (row != spec.n_tau)
            throw PdapFormatError(Kind::dimension_mismatch, "expected " + std::to_string(spec.n_tau) + " rows, found " + std::to_string(row), line_no + 1);
        return grid;
    }

    PdapGrid read_pdap(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw PdapFormatError(Kind::io, "cannot open '" + path.string() + "'", 0);
        return read_pdap(is);
    }

} // namespace thz
