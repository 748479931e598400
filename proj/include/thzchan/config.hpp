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


#ifndef THZCHAN_CONFIG_HPP
#define THZCHAN_CONFIG_HPP

#include "thzchan/analysis.hpp"
#include "thzchan/metrics.hpp"
#include "thzchan/stochastic_gen.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

/*!SECTION
Scenario configuration (INI-style, see docs/config.md)
SECTION!*/

namespace thz
{
    class ConfigError : public std::runtime_error
    {
      public:
        ConfigError(const std::string &what, std::size_t line = 0) : std::runtime_error(what), line_(line) {}
        std::size_t line() const { return line_; } // 0 when not tied to a line
      private:
        std::size_t line_;
    };

    struct ScenarioConfig
    {
        RoomScene scene;
        GridSpec grid;
        HybridModelParams params = HybridModelParams::measured_defaults();
        GeneratorOptions generator;
        ArrivalUnit lambda_unit = ArrivalUnit::mean_gap_ns;
        std::uint64_t master_seed = 1;
        std::size_t seed_count = 1;
        AnalysisConfig analysis;
        SsimOptions ssim;
        std::string output_directory = "out";
        std::string output_format = "csv";

        ScenarioConfig();

        /// Seed of realization `k`: master seed plus counter.
        std::uint64_t seed_for(std::size_t k) const { return master_seed + k; }

        void validate() const; // throws ConfigError
    };

    /// Parses INI text. Unknown sections or keys, malformed values and failed validation raise ConfigError.
    ScenarioConfig parse_config(std::istream &is);
    ScenarioConfig parse_config_string(const std::string &text);
    ScenarioConfig load_config(const std::filesystem::path &path);

    /// Every accepted `section.key`, in documentation order.
    std::vector<std::string> config_keys();

} // namespace thz

#endif
