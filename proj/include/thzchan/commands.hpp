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


#ifndef THZCHAN_COMMANDS_HPP
#define THZCHAN_COMMANDS_HPP

#include "thzchan/config.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

/*!SECTION
Command implementations behind the `thzchan` executable
SECTION!*/

namespace thz
{
    inline constexpr const char *tool_version = "1.0.0";

    enum ExitCode : int
    {
        exit_ok = 0,
        exit_partial = 1,
        exit_fatal = 2
    };

    struct SimulateOptions
    {
        std::filesystem::path config;
        std::optional<std::size_t> seeds;
        std::optional<std::string> mode;
        std::optional<std::filesystem::path> out;
        std::size_t jobs = 0; // 0 picks the hardware concurrency
    };

    struct AnalyzeOptions
    {
        std::vector<std::string> inputs; // PDAP files or glob patterns
        std::filesystem::path config;
        std::optional<std::filesystem::path> rows; // characteristics CSV analysed instead of PDAPs
        std::optional<std::filesystem::path> out;
        std::size_t jobs = 0;
    };

    struct ClusterOptions
    {
        std::vector<std::string> inputs;
        std::filesystem::path config;
        std::optional<std::filesystem::path> out;
        std::size_t jobs = 0;
    };

    struct CompareOptions
    {
        std::string reference;               // glob
        std::vector<std::string> candidates; // "glob" or "label=glob"
        std::optional<std::filesystem::path> config;
        std::filesystem::path out = "compare";
        std::size_t jobs = 0;
    };

    // Each command reports failures on `err` as one JSON object per line and returns an ExitCode.
    int cmd_simulate(const SimulateOptions &opt, std::ostream &err);
    int cmd_analyze(const AnalyzeOptions &opt, std::ostream &err);
    int cmd_cluster(const ClusterOptions &opt, std::ostream &err);
    int cmd_compare(const CompareOptions &opt, std::ostream &err);

    /// Expands `pattern` ('*' and '?' in the file-name part only). An existing path is returned as is.
    std::vector<std::filesystem::path> expand_glob(const std::string &pattern);

    /// SHA-256 of a file's bytes, lower-case hex.
    std::string sha256_file(const std::filesystem::path &path);

    /// One-line JSON error record.
    std::string error_record(const std::string &kind, const std::string &message, const std::string &path = {},
                             std::size_t line = 0);

} // namespace thz

#endif
