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


// thzchan: simulate | analyze | cluster | compare

#include "thzchan/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Terahertz indoor channel modelling toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", thz::tool_version);

    std::string format = "csv";
    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv"}));
    };

    thz::SimulateOptions sim;
    std::string sim_config_pos, sim_out;
    auto *simulate = app.add_subcommand("simulate", "Generate channel realizations and their PDAP files");
    simulate->add_option("config_file", sim_config_pos, "Scenario config (alternative to --config)");
    auto *sim_cfg_opt = simulate->add_option("--config", sim.config, "Scenario config");
    simulate->add_option("--seeds", sim.seeds, "Number of realizations (overrides model.seeds)");
    simulate->add_option("--mode", sim.mode, "hybrid or statistical_baseline")
        ->check(CLI::IsMember({"hybrid", "statistical_baseline"}));
    simulate->add_option("--out", sim.out, "Output directory (overrides output.directory)");
    simulate->add_option("--jobs", sim.jobs, "Worker threads, 0 for all cores");
    add_format(simulate);

    thz::AnalyzeOptions ana;
    auto *analyze = app.add_subcommand("analyze", "Cluster PDAP files and fit channel statistics");
    analyze->add_option("inputs", ana.inputs, "PDAP files or glob patterns");
    analyze->add_option("--config", ana.config, "Scenario config")->required();
    analyze->add_option("--rows", ana.rows, "Characteristics CSV to aggregate instead of PDAP files");
    analyze->add_option("--out", ana.out, "Output directory");
    analyze->add_option("--jobs", ana.jobs, "Worker threads, 0 for all cores");
    add_format(analyze);

    thz::ClusterOptions clu;
    auto *cluster = app.add_subcommand("cluster", "Write MCD-DBSCAN cluster reports for PDAP files");
    cluster->add_option("inputs", clu.inputs, "PDAP files or glob patterns")->required();
    cluster->add_option("--config", clu.config, "Scenario config")->required();
    cluster->add_option("--out", clu.out, "Output directory");
    cluster->add_option("--jobs", clu.jobs, "Worker threads, 0 for all cores");
    add_format(cluster);

    thz::CompareOptions cmp;
    auto *compare = app.add_subcommand("compare", "RMSE and SSIM of candidate PDAPs against references");
    compare->add_option("--reference", cmp.reference, "Reference PDAP glob")->required();
    compare->add_option("--candidate", cmp.candidates, "Candidate glob, optionally 'label=glob'; repeatable")
        ->required();
    compare->add_option("--config", cmp.config, "Scenario config (SSIM settings)");
    compare->add_option("--out", cmp.out, "Output directory");
    compare->add_option("--jobs", cmp.jobs, "Worker threads, 0 for all cores");
    add_format(compare);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << thz::error_record("usage", e.what()) << '\n';
        return thz::exit_fatal;
    }

    try
    {
        if (simulate->parsed())
        {
            if (sim_cfg_opt->count() == 0)
            {
                if (sim_config_pos.empty())
                {
                    std::cerr << thz::error_record("usage", "simulate needs a config file") << '\n';
                    return thz::exit_fatal;
                }
                sim.config = sim_config_pos;
            }
            return thz::cmd_simulate(sim, std::cerr);
        }
        if (analyze->parsed())
        {
            if (ana.inputs.empty() && !ana.rows)
            {
                std::cerr << thz::error_record("usage", "analyze needs PDAP inputs or --rows") << '\n';
                return thz::exit_fatal;
            }
            return thz::cmd_analyze(ana, std::cerr);
        }
        if (cluster->parsed())
            return thz::cmd_cluster(clu, std::cerr);
        return thz::cmd_compare(cmp, std::cerr);
    }
    catch (const std::exception &e)
    {
        std::cerr << thz::error_record("internal", e.what()) << '\n';
        return thz::exit_fatal;
    }
}
