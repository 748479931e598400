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


#include <catch2/catch_amalgamated.hpp>

#include "thzchan/pdap.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace thz;
using Catch::Approx;

namespace
{
    GridSpec small_spec()
    {
        GridSpec s;
        s.delta_tau_s = 1e-9;
        s.delta_theta = two_pi / 8.0;
        s.n_tau = 10;
        s.n_theta = 8;
        s.noise_floor_dbm = -120.0;
        return s;
    }

    Mpc mpc(double toa_ns, double aoa_deg, double dbm)
    {
        Mpc m;
        m.toa_s = toa_ns * 1e-9;
        m.aoa_az = deg2rad(aoa_deg);
        m.power_w = dbm_to_watts(dbm);
        return m;
    }

    std::vector<Mpc> random_mpcs(std::mt19937_64 &rng, const GridSpec &spec, std::size_t n)
    {
        std::uniform_real_distribution<double> t(0.0, spec.max_delay_s() * 0.999), a(0.0, two_pi), p(-110.0, -40.0);
        std::vector<Mpc> out(n);
        for (auto &m : out)
        {
            m.toa_s = t(rng);
            m.aoa_az = a(rng);
            m.power_w = dbm_to_watts(p(rng));
        }
        return out;
    }

    PdapFormatError::Kind read_error_kind(const std::string &text, std::size_t *line = nullptr)
    {
        std::istringstream is(text);
        try
        {
            read_pdap(is);
        }
        catch (const PdapFormatError &e)
        {
            if (line)
                *line = e.line();
            return e.kind();
        }
        FAIL("expected PdapFormatError");
        return PdapFormatError::Kind::io;
    }
} // namespace

TEST_CASE("GridSpec - defaults and validation")
{
    GridSpec s;
    REQUIRE_NOTHROW(s.validate());
    CHECK(s.max_delay_s() == Approx(100.0e-9).epsilon(1e-3));
    CHECK(rad2deg(s.delta_theta) == Approx(10.0));

    auto bad = s;
    bad.n_theta = 35;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.delta_tau_s = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.n_tau = 0;
    REQUIRE_THROWS_AS(PdapGrid(bad), std::invalid_argument);
}

TEST_CASE("PdapGrid - floor clamping and profiles")
{
    PdapGrid g(small_spec());
    REQUIRE(g.total_power() == 0.0);
    REQUIRE(g.dbm(3, 4) == -120.0);
    REQUIRE(g.max_dbm() == -120.0);
    g.set_power(2, 3, dbm_to_watts(-50.0));
    g.add_power(2, 3, dbm_to_watts(-50.0));
    g.set_power(5, 0, dbm_to_watts(-130.0));
    CHECK(g.dbm(2, 3) == Approx(-50.0 + 10.0 * std::log10(2.0)).margin(1e-12));
    CHECK(g.dbm(5, 0) == -120.0);
    CHECK(g.max_dbm() == Approx(g.dbm(2, 3)).margin(1e-12));

    auto dp = g.delay_profile();
    auto ap = g.azimuth_profile();
    REQUIRE(dp.size() == 10);
    REQUIRE(ap.size() == 8);
    CHECK(dp[2] == Approx(2.0 * dbm_to_watts(-50.0)));
    CHECK(ap[3] == Approx(2.0 * dbm_to_watts(-50.0)));
    REQUIRE_THROWS_AS(g.set_power(0, 0, -1.0), std::invalid_argument);
}

TEST_CASE("Rasterize - nearest bin with ties to the lower index")
{
    auto spec = small_spec();
    std::vector<Mpc> m{mpc(2.4, 0.0, -50.0), mpc(2.5, 22.5, -60.0), mpc(2.6, 359.0, -70.0), mpc(0.0, 320.0, -80.0)};
    auto g = rasterize(m, spec);
    // The second MPC sits on both the delay and the azimuth midpoint, so it joins the first
    CHECK(g.power(2, 0) == Approx(dbm_to_watts(-50.0) + dbm_to_watts(-60.0)).epsilon(1e-14));
    CHECK(g.power(2, 1) == 0.0);
    CHECK(watts_to_dbm(g.power(3, 0)) == Approx(-70.0).margin(1e-9)); // 359 deg wraps to bin 0
    CHECK(watts_to_dbm(g.power(0, 7)) == Approx(-80.0).margin(1e-9));
    std::size_t nonzero = 0;
    for (double p : g.linear())
        nonzero += p > 0.0;
    CHECK(nonzero == 3);
}

TEST_CASE("Rasterize - power conservation over random inputs")
{
    std::mt19937_64 rng(3);
    GridSpec spec;
    for (int trial = 0; trial < 20; ++trial)
    {
        auto m = random_mpcs(rng, spec, 500);
        double sum = 0.0;
        for (const auto &x : m)
            sum += x.power_w;
        auto g = rasterize(m, spec);
        REQUIRE(g.total_power() == Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("Rasterize - rejects components outside the window")
{
    auto spec = small_spec();
    std::vector<Mpc> m{mpc(1.0, 0.0, -50.0), mpc(10.0, 0.0, -50.0)};
    try
    {
        rasterize(m, spec);
        FAIL("expected RasterizeError");
    }
    catch (const RasterizeError &e)
    {
        CHECK(e.index() == 1);
    }
    std::vector<Mpc> neg{mpc(-0.1, 0.0, -50.0)};
    REQUIRE_THROWS_AS(rasterize(neg, spec), RasterizeError);
    std::vector<Mpc> nan{mpc(1.0, 0.0, -50.0)};
    nan[0].power_w = std::nan("");
    REQUIRE_THROWS_AS(rasterize(nan, spec), std::invalid_argument);
}

TEST_CASE("Extract - one MPC per cell above threshold")
{
    auto spec = small_spec();
    std::vector<Mpc> m{mpc(1.0, 45.0, -50.0), mpc(4.0, 180.0, -90.0), mpc(7.0, 270.0, -100.0)};
    auto g = rasterize(m, spec);
    auto e = extract_mpcs(g, -95.0);
    REQUIRE(e.size() == 2);
    CHECK(e[0].toa_s == Approx(1e-9));
    CHECK(rad2deg(e[0].aoa_az) == Approx(45.0));
    CHECK(watts_to_dbm(e[1].power_w) == Approx(-90.0).margin(1e-9));
    // Strictly above: a cell exactly at the threshold is dropped
    REQUIRE(extract_mpcs(g, -90.0).size() == 1);

    // Rasterizing the extracted set reproduces the retained cells
    auto g2 = rasterize(extract_mpcs(g, -200.0), spec);
    REQUIRE(g2.total_power() == Approx(g.total_power()).epsilon(1e-12));
}

TEST_CASE("Compose elevation - slice sum")
{
    auto spec = small_spec();
    std::vector<PdapGrid> slices{rasterize(std::vector<Mpc>{mpc(1.0, 0.0, -50.0)}, spec),
                                 rasterize(std::vector<Mpc>{mpc(1.0, 0.0, -50.0), mpc(3.0, 90.0, -60.0)}, spec)};
    auto g = compose_elevation(slices);
    CHECK(g.power(1, 0) == Approx(2.0 * dbm_to_watts(-50.0)));
    CHECK(g.power(3, 2) == Approx(dbm_to_watts(-60.0)));
    REQUIRE_THROWS_AS(compose_elevation(std::span<const PdapGrid>{}), std::invalid_argument);
    GridSpec other = spec;
    other.n_tau = 11;
    slices.emplace_back(other);
    REQUIRE_THROWS_AS(compose_elevation(slices), std::invalid_argument);
}

TEST_CASE("PDAP file - round trip")
{
    std::mt19937_64 rng(8);
    GridSpec spec;
    auto g = rasterize(random_mpcs(rng, spec, 300), spec);
    std::stringstream ss;
    write_pdap(g, ss);
    std::string header;
    std::getline(std::istringstream(ss.str()) >> std::ws, header);
    REQUIRE(header.rfind("# pdap v1 dtau_ns=", 0) == 0);

    auto back = read_pdap(ss);
    REQUIRE(back.spec().same_shape(spec));
    REQUIRE(back.spec().noise_floor_dbm == spec.noise_floor_dbm);
    for (std::size_t i = 0; i < spec.n_tau; ++i)
        for (std::size_t j = 0; j < spec.n_theta; ++j)
        {
            if (g.dbm(i, j) > spec.noise_floor_dbm)
                REQUIRE(back.power(i, j) == Approx(g.power(i, j)).epsilon(1e-8));
            else
                REQUIRE(back.power(i, j) == 0.0);
        }

    // Writing the read-back grid reproduces the file byte for byte
    std::stringstream again;
    write_pdap(back, again);
    REQUIRE(again.str() == ss.str());

    auto path = std::filesystem::temp_directory_path() / "thzchan_test_roundtrip.pdap";
    write_pdap(g, path);
    REQUIRE(read_pdap(path).spec().n_tau == spec.n_tau);
    std::filesystem::remove(path);
    REQUIRE_THROWS_AS(read_pdap(path), PdapFormatError);
}

TEST_CASE("PDAP file - errors carry kind and line")
{
    using K = PdapFormatError::Kind;
    const std::string header = "# pdap v1 dtau_ns=1 dtheta_deg=180 ntau=2 ntheta=2 noise_dbm=-120\n";
    std::size_t line = 0;

    CHECK(read_error_kind("") == K::malformed_header);
    CHECK(read_error_kind("# pdap v2 dtau_ns=1\n") == K::malformed_header);
    CHECK(read_error_kind("# pdap v1 dtau_ns=1 dtheta_deg=180 ntau=2 noise_dbm=-120\n-1,-1\n-1,-1\n") ==
          K::malformed_header);
    CHECK(read_error_kind("# pdap v1 dtau_ns=1 dtheta_deg=90 ntau=2 ntheta=2 noise_dbm=-120\n") ==
          K::invariant_violation);

    CHECK(read_error_kind(header + "-50,-60\n-50\n", &line) == K::dimension_mismatch);
    CHECK(line == 3);
    CHECK(read_error_kind(header + "-50,-60\n-50,abc\n", &line) == K::non_numeric);
    CHECK(line == 3);
    CHECK(read_error_kind(header + "-50,-60\n", &line) == K::dimension_mismatch);
    CHECK(read_error_kind(header + "-50,-60\n-50,-60\n-50,-60\n", &line) == K::dimension_mismatch);
    CHECK(line == 4);
    CHECK(read_error_kind(header + "-50,-60,-70\n-50,-60\n", &line) == K::dimension_mismatch);
    CHECK(line == 2);

    std::istringstream ok(header + "-50,-130\n-120,-60\n");
    auto g = read_pdap(ok);
    CHECK(g.power(0, 1) == 0.0);
    CHECK(g.power(1, 0) == 0.0);
    CHECK(watts_to_dbm(g.power(1, 1)) == Approx(-60.0).margin(1e-12));
}
