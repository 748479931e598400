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


#include "thzchan/commands.hpp"

#include "thzchan/analysis.hpp"
#include "thzchan/metrics.hpp"
#include "thzchan/pdap.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace thz
{
    namespace fs = std::filesystem;
    using json = nlohmann::json;

    std::string error_record(const std::string &kind, const std::string &message, const std::string &path,
                             std::size_t line)
    {
        json j;
        j["error"] = kind;
        j["message"] = message;
        if (!path.empty())
            j["path"] = path;
        if (line > 0)
            j["line"] = line;
        return j.dump();
    }

    std::string sha256_file(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read '" + path.string() + "'");
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 computation failed");
        std::string hex;
        char buf[3];
        for (unsigned int k = 0; k < len; ++k)
        {
            std::snprintf(buf, sizeof(buf), "%02x", digest[k]);
            hex += buf;
        }
        return hex;
    }

    namespace
    {
        bool wildcard_match(std::string_view pattern, std::string_view text)
        {
            std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
            while (t < text.size())
            {
                if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t]))
                {
                    ++p;
                    ++t;
                }
                else if (p < pattern.size() && pattern[p] == '*')
                {
                    star = p++;
                    mark = t;
                }
                else if (star != std::string_view::npos)
                {
                    p = star + 1;
                    t = ++mark;
                }
                else
                    return false;
            }
            while (p < pattern.size() && pattern[p] == '*')
                ++p;
            return p == pattern.size();
        }

        // Runs fn(0..n-1) on a small worker pool. fn must not throw.
        void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)> &fn)
        {
            if (jobs == 0)
                jobs = std::max(1u, std::thread::hardware_concurrency());
            jobs = std::min(jobs, n);
            if (jobs <= 1)
            {
                for (std::size_t k = 0; k < n; ++k)
                    fn(k);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < jobs; ++w)
                pool.emplace_back([&] {
                    for (std::size_t k = next++; k < n; k = next++)
                        fn(k);
                });
            for (auto &t : pool)
                t.join();
        }

        // Thread-safe line sink for per-item error records
        class ErrorLog
        {
          public:
            explicit ErrorLog(std::ostream &os) : os_(os) {}
            void write(const std::string &line)
            {
                std::lock_guard<std::mutex> lock(m_);
                os_ << line << '\n';
                ++count_;
            }
            std::size_t count() const { return count_; }

          private:
            std::ostream &os_;
            std::mutex m_;
            std::size_t count_ = 0;
        };

        std::ofstream open_out(const fs::path &path)
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw std::runtime_error("cannot write '" + path.string() + "'");
            return os;
        }

        void ensure_dir(const fs::path &dir)
        {
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec)
                throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
        }

        std::string indexed_name(const char *prefix, std::size_t k, const char *ext)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s_%04zu%s", prefix, k, ext);
            return buf;
        }

        json grid_json(const GridSpec &g)
        {
            return {{"delta_tau_ps", g.delta_tau_s * 1e12},
                    {"delta_theta_deg", rad2deg(g.delta_theta)},
                    {"n_tau", g.n_tau},
                    {"n_theta", g.n_theta},
                    {"noise_floor_dbm", g.noise_floor_dbm}};
        }

        json versions_json()
        {
            return {{"thzchan", tool_version},
                    {"compiler", __VERSION__},
                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        }

        void write_manifest(const fs::path &path, const json &j)
        {
            auto os = open_out(path);
            os << j.dump(2) << '\n';
        }

        // Collects input PDAP paths from files and patterns; missing matches become errors
        std::vector<fs::path> collect_inputs(const std::vector<std::string> &inputs, ErrorLog &log)
        {
            std::vector<fs::path> files;
            for (const auto &in : inputs)
            {
                auto found = expand_glob(in);
                if (found.empty())
                    log.write(error_record("input", "pattern matched no files", in));
                files.insert(files.end(), found.begin(), found.end());
            }
            return files;
        }

        std::vector<PathLossSample> path_loss_samples(const std::vector<std::optional<ChannelAnalysis>> &results,
                                                      double d_m)
        {
            std::vector<PathLossSample> out;
            for (const auto &r : results)
                if (r && std::isfinite(r->path_loss_db))
                    out.push_back({d_m, r->path_loss_db});
            return out;
        }

        // Aggregate reports shared by PDAP and row-based analysis
        void write_aggregates(const fs::path &out, const std::vector<CharacteristicsRow> &rows,
                              const std::vector<PathLossSample> &pl, double f_hz, ErrorLog &log)
        {
            {
                auto os = open_out(out / "characteristics.csv");
                write_characteristics_csv(os, rows);
            }
            {
                auto os = open_out(out / "lognormal_fits.csv");
                os << "param,mu,sigma,n,excluded\n";
                const std::array<const char *, 5> names{"N", "K", "DS_ns", "AS_deg", "R_w"};
                for (std::size_t p = 0; p < names.size(); ++p)
                {
                    std::vector<double> v;
                    for (const auto &r : rows)
                        v.push_back(r.report_values()[p + 1]);
                    char buf[160];
                    try
                    {
                        auto fit = fit_lognormal_finite(v);
                        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%zu,%zu\n", names[p], fit.mu, fit.sigma,
                                      v.size() - fit.excluded, fit.excluded);
                    }
                    catch (const std::invalid_argument &e)
                    {
                        log.write(error_record("fit", std::string(names[p]) + ": " + e.what()));
                        std::snprintf(buf, sizeof(buf), "%s,nan,nan,%zu,0\n", names[p], v.size());
                    }
                    os << buf;
                }
            }
            try
            {
                auto corr = correlation_matrix(rows);
                auto os = open_out(out / "correlation.csv");
                write_correlation_csv(os, corr);
            }
            catch (const std::invalid_argument &e)
            {
                log.write(error_record("correlation", e.what()));
            }
            if (!pl.empty())
            {
                try
                {
                    auto fit = fit_ci(pl, f_hz);
                    auto os = open_out(out / "ci_fit.csv");
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.3f,%zu\n", fit.ple, fit.sigma_sf_db, fit.d0_m,
                                  pl.size());
                    os << "ple,sigma_sf_db,d0_m,n\n" << buf;
                }
                catch (const std::invalid_argument &e)
                {
                    log.write(error_record("ci_fit", e.what()));
                }
            }
        }

        int item_exit(std::size_t failed, std::size_t total)
        {
            if (failed == 0)
                return exit_ok;
            return failed < total ? exit_partial : exit_fatal;
        }
    } // namespace

    std::vector<fs::path> expand_glob(const std::string &pattern)
    {
        fs::path p(pattern);
        std::string name = p.filename().string();
        if (name.find_first_of("*?") == std::string::npos)
        {
            std::error_code ec;
            if (fs::is_regular_file(p, ec))
                return {p};
            return {};
        }
        fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
        std::vector<fs::path> out;
        std::error_code ec;
        for (const auto &entry : fs::directory_iterator(dir, ec))
            if (entry.is_regular_file() && wildcard_match(name, entry.path().filename().string()))
                out.push_back(p.has_parent_path() ? entry.path() : entry.path().filename());
        std::sort(out.begin(), out.end());
        return out;
    }

    int cmd_simulate(const SimulateOptions &opt, std::ostream &err)
    {
        ScenarioConfig cfg;
        try
        {
            cfg = load_config(opt.config);
            if (opt.mode)
                cfg.generator.mode = parse_generator_mode(*opt.mode);
            if (opt.seeds)
                cfg.seed_count = *opt.seeds;
            if (opt.out)
                cfg.output_directory = opt.out->string();
            cfg.validate();
        }
        catch (const ConfigError &e)
        {
            err << error_record("config", e.what(), opt.config.string(), e.line()) << '\n';
            return exit_fatal;
        }
        catch (const std::invalid_argument &e)
        {
            err << error_record("usage", e.what()) << '\n';
            return exit_fatal;
        }

        const fs::path out = cfg.output_directory;
        ErrorLog log(err);
        try
        {
            ensure_dir(out);
            if (cfg.generator.mode == GeneratorMode::hybrid)
            {
                auto os = open_out(out / "rt_paths.csv");
                write_rt_paths_csv(os, enumerate_images(cfg.scene, cfg.generator.rt));
            }
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), out.string()) << '\n';
            return exit_fatal;
        }

        std::vector<char> ok(cfg.seed_count, 0);
        parallel_for(cfg.seed_count, opt.jobs, [&](std::size_t k) {
            try
            {
                auto real = synthesize_channel(cfg.scene, cfg.params, cfg.generator, cfg.seed_for(k));
                {
                    auto os = open_out(out / indexed_name("realization", k, ".csv"));
                    write_realization_csv(os, real);
                }
                write_pdap(rasterize(real.plain_mpcs(), cfg.grid), out / indexed_name("pdap", k, ".pdap"));
                ok[k] = 1;
            }
            catch (const std::exception &e)
            {
                log.write(error_record("simulate", e.what(), indexed_name("pdap", k, ".pdap")));
            }
        });

        json files = json::array();
        std::size_t failed = 0;
        for (std::size_t k = 0; k < cfg.seed_count; ++k)
        {
            if (!ok[k])
            {
                ++failed;
                continue;
            }
            files.push_back({{"index", k},
                             {"seed", cfg.seed_for(k)},
                             {"pdap", indexed_name("pdap", k, ".pdap")},
                             {"realization", indexed_name("realization", k, ".csv")}});
        }
        try
        {
            json manifest = {{"command", "simulate"},
                             {"config", opt.config.string()},
                             {"config_sha256", sha256_file(opt.config)},
                             {"mode", std::string(to_string(cfg.generator.mode))},
                             {"seed_policy", "master_seed + index"},
                             {"master_seed", cfg.master_seed},
                             {"seeds", cfg.seed_count},
                             {"grid", grid_json(cfg.grid)},
                             {"versions", versions_json()},
                             {"files", files}};
            write_manifest(out / "manifest.json", manifest);
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), (out / "manifest.json").string()) << '\n';
            return exit_fatal;
        }
        return item_exit(failed, cfg.seed_count);
    }

    namespace
    {
        std::vector<RtPath> config_rt_paths(const ScenarioConfig &cfg)
        {
            return enumerate_images(cfg.scene, cfg.generator.rt);
        }

        int load_config_or_fail(const fs::path &path, ScenarioConfig &cfg, std::ostream &err)
        {
            try
            {
                cfg = load_config(path);
                return exit_ok;
            }
            catch (const ConfigError &e)
            {
                err << error_record("config", e.what(), path.string(), e.line()) << '\n';
                return exit_fatal;
            }
        }
    } // namespace

    int cmd_analyze(const AnalyzeOptions &opt, std::ostream &err)
    {
        ScenarioConfig cfg;
        if (load_config_or_fail(opt.config, cfg, err) != exit_ok)
            return exit_fatal;
        const fs::path out = opt.out ? *opt.out : fs::path(cfg.output_directory);
        ErrorLog log(err);

        if (opt.rows)
        {
            std::vector<CharacteristicsRow> rows;
            try
            {
                std::ifstream in(*opt.rows);
                if (!in)
                    throw std::runtime_error("cannot open rows file");
                rows = read_characteristics_csv(in);
                if (rows.empty())
                    throw std::runtime_error("rows file holds no data rows");
                ensure_dir(out);
                write_aggregates(out, rows, {}, cfg.scene.carrier_frequency_hz, log);
            }
            catch (const std::exception &e)
            {
                err << error_record("input", e.what(), opt.rows->string()) << '\n';
                return exit_fatal;
            }
            return exit_ok;
        }

        auto files = collect_inputs(opt.inputs, log);
        if (files.empty())
        {
            err << error_record("usage", "no PDAP files to analyze") << '\n';
            return exit_fatal;
        }
        try
        {
            ensure_dir(out);
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), out.string()) << '\n';
            return exit_fatal;
        }

        const auto rt_paths = config_rt_paths(cfg);
        const double d = cfg.scene.tx_rx_distance();
        std::vector<std::optional<ChannelAnalysis>> results(files.size());
        parallel_for(files.size(), opt.jobs, [&](std::size_t k) {
            try
            {
                auto grid = read_pdap(files[k]);
                auto res = analyze_pdap(grid, rt_paths, d, cfg.analysis);
                res.row.label = files[k].stem().string();
                auto os = open_out(out / (files[k].stem().string() + "_clusters.csv"));
                write_cluster_report(os, res.clusters, res.mpcs);
                results[k] = std::move(res);
            }
            catch (const PdapFormatError &e)
            {
                log.write(error_record("pdap_format", e.what(), files[k].string(), e.line()));
            }
            catch (const std::exception &e)
            {
                log.write(error_record("analyze", e.what(), files[k].string()));
            }
        });

        std::vector<CharacteristicsRow> rows;
        std::size_t failed = 0;
        for (const auto &r : results)
        {
            if (r)
                rows.push_back(r->row);
            else
                ++failed;
        }
        if (rows.empty())
            return exit_fatal;
        try
        {
            write_aggregates(out, rows, path_loss_samples(results, d), cfg.scene.carrier_frequency_hz, log);
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), out.string()) << '\n';
            return exit_fatal;
        }
        return item_exit(failed, files.size());
    }

    int cmd_cluster(const ClusterOptions &opt, std::ostream &err)
    {
        ScenarioConfig cfg;
        if (load_config_or_fail(opt.config, cfg, err) != exit_ok)
            return exit_fatal;
        const fs::path out = opt.out ? *opt.out : fs::path(cfg.output_directory);
        ErrorLog log(err);
        auto files = collect_inputs(opt.inputs, log);
        if (files.empty())
        {
            err << error_record("usage", "no PDAP files to cluster") << '\n';
            return exit_fatal;
        }
        try
        {
            ensure_dir(out);
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), out.string()) << '\n';
            return exit_fatal;
        }

        const auto rt_paths = config_rt_paths(cfg);
        std::atomic<std::size_t> failed{0};
        parallel_for(files.size(), opt.jobs, [&](std::size_t k) {
            try
            {
                auto grid = read_pdap(files[k]);
                auto mpcs = extract_mpcs(grid, cfg.analysis.threshold_dbm);
                McdConfig mcd_cfg = cfg.analysis.mcd;
                if (cfg.analysis.recompute_tau_std && mpcs.size() >= 2)
                    mcd_cfg = McdConfig::from_data(mpcs, mcd_cfg.zeta);
                auto set = dbscan_mcd(mpcs, cfg.analysis.eps, cfg.analysis.min_points, mcd_cfg);
                set = match_clusters(std::move(set), mpcs, rt_paths, mcd_cfg, cfg.analysis.eps);
                auto os = open_out(out / (files[k].stem().string() + "_clusters.csv"));
                write_cluster_report(os, set, mpcs);
            }
            catch (const PdapFormatError &e)
            {
                ++failed;
                log.write(error_record("pdap_format", e.what(), files[k].string(), e.line()));
            }
            catch (const std::exception &e)
            {
                ++failed;
                log.write(error_record("cluster", e.what(), files[k].string()));
            }
        });
        return item_exit(failed, files.size());
    }

    int cmd_compare(const CompareOptions &opt, std::ostream &err)
    {
        SsimOptions ssim;
        if (opt.config)
        {
            ScenarioConfig cfg;
            if (load_config_or_fail(*opt.config, cfg, err) != exit_ok)
                return exit_fatal;
            ssim = cfg.ssim;
        }
        ErrorLog log(err);
        auto refs = expand_glob(opt.reference);
        if (refs.empty())
        {
            err << error_record("usage", "reference pattern matched no files", opt.reference) << '\n';
            return exit_fatal;
        }
        if (opt.candidates.empty())
        {
            err << error_record("usage", "no candidate set given") << '\n';
            return exit_fatal;
        }

        struct Pair
        {
            std::string model;
            fs::path ref, cand;
            std::optional<MetricReport> report;
        };
        std::vector<Pair> pairs;
        std::vector<std::string> models;
        std::size_t unpaired = 0;
        for (const auto &spec : opt.candidates)
        {
            auto eq = spec.find('=');
            std::string model = eq == std::string::npos ? "candidate" + std::to_string(models.size() + 1)
                                                        : spec.substr(0, eq);
            std::string pattern = eq == std::string::npos ? spec : spec.substr(eq + 1);
            models.push_back(model);
            auto cands = expand_glob(pattern);
            if (cands.empty())
            {
                log.write(error_record("usage", "candidate pattern matched no files", pattern));
                continue;
            }

            // Pair by file name when every candidate name exists among the references, else by index
            std::map<std::string, fs::path> by_name;
            for (const auto &r : refs)
                by_name[r.filename().string()] = r;
            bool named = std::all_of(cands.begin(), cands.end(),
                                     [&](const fs::path &c) { return by_name.count(c.filename().string()) > 0; });
            if (named)
            {
                for (const auto &c : cands)
                    pairs.push_back({model, by_name[c.filename().string()], c, {}});
                for (const auto &r : refs)
                    if (std::none_of(cands.begin(), cands.end(),
                                     [&](const fs::path &c) { return c.filename() == r.filename(); }))
                    {
                        ++unpaired;
                        log.write(error_record("unpaired", "reference has no " + model + " candidate", r.string()));
                    }
            }
            else
            {
                std::size_t n = std::min(refs.size(), cands.size());
                for (std::size_t k = 0; k < n; ++k)
                    pairs.push_back({model, refs[k], cands[k], {}});
                for (std::size_t k = n; k < refs.size(); ++k)
                {
                    ++unpaired;
                    log.write(error_record("unpaired", "reference has no " + model + " candidate", refs[k].string()));
                }
                for (std::size_t k = n; k < cands.size(); ++k)
                {
                    ++unpaired;
                    log.write(error_record("unpaired", "candidate has no reference", cands[k].string()));
                }
            }
        }
        if (pairs.empty())
        {
            err << error_record("usage", "no reference/candidate pairs") << '\n';
            return exit_fatal;
        }

        parallel_for(pairs.size(), opt.jobs, [&](std::size_t k) {
            try
            {
                pairs[k].report = compare_pdap(read_pdap(pairs[k].ref), read_pdap(pairs[k].cand), ssim);
            }
            catch (const PdapFormatError &e)
            {
                log.write(error_record("pdap_format", e.what(), pairs[k].cand.string(), e.line()));
            }
            catch (const std::exception &e)
            {
                log.write(error_record("compare", e.what(), pairs[k].cand.string()));
            }
        });

        std::size_t failed = 0;
        try
        {
            ensure_dir(opt.out);
            auto metrics = open_out(opt.out / "metrics.csv");
            metrics << "pair_id,model,reference,candidate,rmse_db,ssim\n";
            std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_model;
            char buf[64];
            for (const auto &p : pairs)
            {
                if (!p.report)
                {
                    ++failed;
                    continue;
                }
                std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", p.report->rmse_db, p.report->ssim);
                metrics << p.model << ':' << p.ref.stem().string() << ',' << p.model << ',' << p.ref.string() << ','
                        << p.cand.string() << buf;
                per_model[p.model].first.push_back(p.report->rmse_db);
                per_model[p.model].second.push_back(p.report->ssim);
            }

            auto cdf = open_out(opt.out / "cdf.csv");
            cdf << "model,metric,value,quantile\n";
            auto summary = open_out(opt.out / "summary.csv");
            summary << "model,pairs,mean_rmse_db,mean_ssim\n";
            for (const auto &model : models)
            {
                auto it = per_model.find(model);
                if (it == per_model.end())
                    continue;
                const auto &[rmse, ssims] = it->second;
                for (const auto &[name, values] : {std::pair{"rmse_db", &rmse}, std::pair{"ssim", &ssims}})
                    for (const auto &pt : empirical_cdf(*values))
                    {
                        std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", pt.value, pt.quantile);
                        cdf << model << ',' << name << buf;
                    }
                double mr = 0.0, ms = 0.0;
                for (std::size_t k = 0; k < rmse.size(); ++k)
                {
                    mr += rmse[k];
                    ms += ssims[k];
                }
                std::snprintf(buf, sizeof(buf), ",%zu,%.6f,%.6f\n", rmse.size(), mr / static_cast<double>(rmse.size()),
                              ms / static_cast<double>(rmse.size()));
                summary << model << buf;
            }
        }
        catch (const std::exception &e)
        {
            err << error_record("io", e.what(), opt.out.string()) << '\n';
            return exit_fatal;
        }
        if (failed == pairs.size())
            return exit_fatal;
        return (failed > 0 || unpaired > 0) ? exit_partial : exit_ok;
    }

} // namespace thz
