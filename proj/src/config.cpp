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


#include "thzchan/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string_view>

namespace thz
{
    ScenarioConfig::ScenarioConfig()
    {
        generator.tx_power_w = analysis.tx_power_w;
    }

    void ScenarioConfig::validate() const
    {
        try
        {
            scene.validate();
            grid.validate();
            params.validate();
            analysis.mcd.validate();
            ssim.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        if (!(analysis.eps > 0.0) || analysis.min_points < 1)
            throw ConfigError("clustering.eps must be positive and clustering.min_points at least 1");
        if (generator.rt.max_order < 0)
            throw ConfigError("model.max_order must be non-negative");
        if (!(generator.max_delay_s > 0.0) || !(generator.tx_power_w > 0.0))
            throw ConfigError("model.max_delay_ns and tx.power_dbm must describe positive quantities");
        if (generator.max_delay_s > grid.max_delay_s())
            throw ConfigError("model.max_delay_ns exceeds the PDAP delay window");
        if (seed_count < 1)
            throw ConfigError("model.seeds must be at least 1");
        if (output_format != "csv")
            throw ConfigError("output.format supports only 'csv'");
    }

    namespace
    {
        // Arrival values as tabulated; converted to rates once lambda_unit is known
        struct RawArrivals
        {
            std::array<double, 4> intra{0.0918, 0.0593, 0.102, 0.1417};
            double inter = 13.12;
        };

        using Setter = std::function<void(ScenarioConfig &, RawArrivals &, const std::string &)>;

        double to_double(const std::string &key, const std::string &text)
        {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
                throw ConfigError(key + ": expected a finite number, got '" + text + "'");
            return v;
        }

        std::uint64_t to_uint(const std::string &key, const std::string &text)
        {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size())
                throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
            return v;
        }

        bool to_bool(const std::string &key, const std::string &text)
        {
            if (text == "true" || text == "yes" || text == "1")
                return true;
            if (text == "false" || text == "no" || text == "0")
                return false;
            throw ConfigError(key + ": expected true or false, got '" + text + "'");
        }

        std::vector<std::pair<std::string, Setter>> build_registry()
        {
            std::vector<std::pair<std::string, Setter>> reg;
            auto dbl = [&](const std::string &key, std::function<void(ScenarioConfig &, double)> apply) {
                reg.emplace_back(key, [key, apply](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                    apply(c, to_double(key, v));
                });
            };

            dbl("room.length_m", [](ScenarioConfig &c, double v) { c.scene.length_m = v; });
            dbl("room.width_m", [](ScenarioConfig &c, double v) { c.scene.width_m = v; });
            dbl("room.permittivity", [](ScenarioConfig &c, double v) { c.scene.wall_permittivity = v; });
            dbl("room.frequency_ghz", [](ScenarioConfig &c, double v) { c.scene.carrier_frequency_hz = v * 1e9; });
            reg.emplace_back("room.polarization", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                if (v == "te")
                    c.scene.polarization = Polarization::te;
                else if (v == "tm")
                    c.scene.polarization = Polarization::tm;
                else
                    throw ConfigError("room.polarization: expected te or tm, got '" + v + "'");
            });

            dbl("tx.x", [](ScenarioConfig &c, double v) { c.scene.tx.x = v; });
            dbl("tx.y", [](ScenarioConfig &c, double v) { c.scene.tx.y = v; });
            dbl("tx.power_dbm", [](ScenarioConfig &c, double v) {
                c.generator.tx_power_w = dbm_to_watts(v);
                c.analysis.tx_power_w = c.generator.tx_power_w;
            });
            dbl("tx.peak_gain_dbi", [](ScenarioConfig &c, double v) { c.generator.tx_peak_gain_db = v; });
            dbl("tx.hpbw_deg", [](ScenarioConfig &c, double v) { c.generator.tx_hpbw = deg2rad(v); });
            dbl("rx.x", [](ScenarioConfig &c, double v) { c.scene.rx.x = v; });
            dbl("rx.y", [](ScenarioConfig &c, double v) { c.scene.rx.y = v; });

            dbl("grid.delta_tau_ps", [](ScenarioConfig &c, double v) { c.grid.delta_tau_s = v * 1e-12; });
            reg.emplace_back("grid.n_tau", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.grid.n_tau = to_uint("grid.n_tau", v);
            });
            reg.emplace_back("grid.n_theta", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.grid.n_theta = to_uint("grid.n_theta", v);
                if (c.grid.n_theta > 0)
                    c.grid.delta_theta = two_pi / static_cast<double>(c.grid.n_theta);
            });
            dbl("grid.noise_floor_dbm", [](ScenarioConfig &c, double v) { c.grid.noise_floor_dbm = v; });

            reg.emplace_back("model.mode", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                try
                {
                    c.generator.mode = parse_generator_mode(v);
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(std::string("model.mode: ") + e.what());
                }
            });
            reg.emplace_back("model.max_order", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.generator.rt.max_order = static_cast<int>(std::min<std::uint64_t>(to_uint("model.max_order", v), 64));
            });
            reg.emplace_back("model.cap_third_order", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.generator.rt.cap_third_order = to_bool("model.cap_third_order", v);
            });
            reg.emplace_back("model.lambda_unit", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                if (v == "mean_gap_ns")
                    c.lambda_unit = ArrivalUnit::mean_gap_ns;
                else if (v == "rate_per_ns")
                    c.lambda_unit = ArrivalUnit::rate_per_ns;
                else
                    throw ConfigError("model.lambda_unit: expected mean_gap_ns or rate_per_ns, got '" + v + "'");
            });
            reg.emplace_back("model.master_seed", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.master_seed = to_uint("model.master_seed", v);
            });
            reg.emplace_back("model.seeds", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.seed_count = to_uint("model.seeds", v);
            });
            dbl("model.max_delay_ns", [](ScenarioConfig &c, double v) { c.generator.max_delay_s = v * 1e-9; });
            reg.emplace_back("model.lambda_inter", [](ScenarioConfig &, RawArrivals &r, const std::string &v) {
                r.inter = to_double("model.lambda_inter", v);
            });
            dbl("model.cluster_slope", [](ScenarioConfig &c, double v) { c.params.cluster_count_slope = v; });
            dbl("model.cluster_intercept", [](ScenarioConfig &c, double v) { c.params.cluster_count_intercept = v; });

            const std::array<const char *, 4> cats{"rt_pre", "rt_post", "nonrt_pre", "nonrt_post"};
            for (std::size_t k = 0; k < cats.size(); ++k)
            {
                std::string p = std::string("model.") + cats[k] + "_";
                dbl(p + "subpath_mu", [k](ScenarioConfig &c, double v) { c.params.intra[k].subpath_count.mu = v; });
                dbl(p + "subpath_sigma", [k](ScenarioConfig &c, double v) { c.params.intra[k].subpath_count.sigma = v; });
                reg.emplace_back(p + "lambda", [k, key = p + "lambda"](ScenarioConfig &, RawArrivals &r, const std::string &v) {
                    r.intra[k] = to_double(key, v);
                });
                dbl(p + "aoa_mu", [k](ScenarioConfig &c, double v) { c.params.intra[k].aoa.mu = v; });
                dbl(p + "aoa_kappa", [k](ScenarioConfig &c, double v) { c.params.intra[k].aoa.kappa = v; });
                dbl(p + "amp_a", [k](ScenarioConfig &c, double v) { c.params.intra[k].amplitude.a = v; });
                dbl(p + "amp_b", [k](ScenarioConfig &c, double v) { c.params.intra[k].amplitude.b = v; });
            }
            for (const char *fam : {"rt", "nonrt"})
            {
                std::string p = std::string("model.") + fam + "_inter_";
                bool rt = std::string(fam) == "rt";
                auto family = [rt](ScenarioConfig &c) -> ClusterFamilyParams & { return rt ? c.params.rt : c.params.nonrt; };
                dbl(p + "aoa_mu", [family](ScenarioConfig &c, double v) { family(c).inter_aoa.mu = v; });
                dbl(p + "aoa_kappa", [family](ScenarioConfig &c, double v) { family(c).inter_aoa.kappa = v; });
                dbl(p + "amp_a", [family](ScenarioConfig &c, double v) { family(c).inter_amplitude.a = v; });
                dbl(p + "amp_b", [family](ScenarioConfig &c, double v) { family(c).inter_amplitude.b = v; });
            }

            dbl("clustering.eps", [](ScenarioConfig &c, double v) { c.analysis.eps = v; });
            reg.emplace_back("clustering.min_points", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.analysis.min_points = to_uint("clustering.min_points", v);
            });
            dbl("clustering.zeta", [](ScenarioConfig &c, double v) { c.analysis.mcd.zeta = v; });
            dbl("clustering.tau_std_ns", [](ScenarioConfig &c, double v) { c.analysis.mcd.tau_std_s = v * 1e-9; });
            dbl("clustering.delta_tau_max_ns", [](ScenarioConfig &c, double v) { c.analysis.mcd.delta_tau_max_s = v * 1e-9; });
            reg.emplace_back("clustering.recompute_tau_std", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.analysis.recompute_tau_std = to_bool("clustering.recompute_tau_std", v);
            });
            dbl("clustering.threshold_dbm", [](ScenarioConfig &c, double v) { c.analysis.threshold_dbm = v; });

            reg.emplace_back("metrics.ssim_window", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.ssim.window = to_uint("metrics.ssim_window", v);
            });
            dbl("metrics.ssim_sigma", [](ScenarioConfig &c, double v) { c.ssim.sigma = v; });
            dbl("metrics.ssim_k1", [](ScenarioConfig &c, double v) { c.ssim.k1 = v; });
            dbl("metrics.ssim_k2", [](ScenarioConfig &c, double v) { c.ssim.k2 = v; });

            reg.emplace_back("output.directory", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.output_directory = v;
            });
            reg.emplace_back("output.format", [](ScenarioConfig &c, RawArrivals &, const std::string &v) {
                c.output_format = v;
            });
            return reg;
        }

        const std::vector<std::pair<std::string, Setter>> &registry()
        {
            static const auto reg = build_registry();
            return reg;
        }
    } // namespace

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> keys;
        for (const auto &[k, _] : registry())
            keys.push_back(k);
        return keys;
    }

    namespace
    {
        std::string trim(std::string_view s)
        {
            auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        // "section.key" -> 1-based line; the INI parser keeps no positions of its own
        std::map<std::string, std::size_t> key_lines(const std::string &text)
        {
            std::map<std::string, std::size_t> out;
            std::istringstream is(text);
            std::string line, section;
            for (std::size_t n = 1; std::getline(is, line); ++n)
            {
                std::string t = trim(line);
                if (t.empty() || t[0] == ';' || t[0] == '#')
                    continue;
                if (t.front() == '[' && t.back() == ']')
                {
                    section = trim(std::string_view(t).substr(1, t.size() - 2));
                    continue;
                }
                auto eq = t.find('=');
                if (eq != std::string::npos)
                    out.emplace(section + "." + trim(std::string_view(t).substr(0, eq)), n);
            }
            return out;
        }
    } // namespace

    ScenarioConfig parse_config(std::istream &is)
    {
        namespace pt = boost::property_tree;
        const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
        const auto lines = key_lines(text);
        auto line_of = [&](const std::string &full) {
            auto it = lines.find(full);
            return it == lines.end() ? std::size_t{0} : it->second;
        };

        pt::ptree tree;
        try
        {
            std::istringstream body(text);
            pt::ini_parser::read_ini(body, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError(e.message(), e.line());
        }

        ScenarioConfig cfg;
        RawArrivals raw;
        const auto &reg = registry();
        for (const auto &[section, body] : tree)
        {
            if (body.empty())
                throw ConfigError("key '" + section + "' appears outside any section");
            for (const auto &[key, value] : body)
            {
                std::string full = section + "." + key;
                auto it = std::find_if(reg.begin(), reg.end(), [&](const auto &e) { return e.first == full; });
                if (it == reg.end())
                    throw ConfigError("unknown key '" + full + "'", line_of(full));
                try
                {
                    it->second(cfg, raw, value.data());
                }
                catch (const ConfigError &e)
                {
                    throw ConfigError(e.what(), e.line() ? e.line() : line_of(full));
                }
            }
        }

        try
        {
            for (std::size_t k = 0; k < 4; ++k)
                cfg.params.intra[k].arrival_rate_per_ns = arrival_rate_from_table(raw.intra[k], cfg.lambda_unit);
            cfg.params.inter_arrival_rate_per_ns = arrival_rate_from_table(raw.inter, cfg.lambda_unit);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        cfg.validate();
        return cfg;
    }

    ScenarioConfig parse_config_string(const std::string &text)
    {
        std::istringstream is(text);
        return parse_config(is);
    }

    ScenarioConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path.string() + "'");
        return parse_config(in);
    }

} // namespace thz
