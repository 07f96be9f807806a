// SPDX-License-Identifier: Apache-2.0
//
// dragonfly-sim: TDM-MIMO FMCW radar simulator and backscatter tag localizer
// Copyright (C) 2026 The dragonfly-sim authors
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

#include "dragonfly/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "dragonfly/baseline.hpp"
#include "dragonfly/csv.hpp"
#include "dragonfly/demos.hpp"
#include "dragonfly/errors.hpp"
#include "dragonfly/if_frame.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/pipeline.hpp"
#include "dragonfly/rfdesign.hpp"
#include "dragonfly/scenario.hpp"
#include "dragonfly/synth.hpp"

namespace dragonfly {

namespace {

constexpr char kMapMagic[8] = {'D', 'F', 'L', 'Y', 'R', 'D', '0', '1'};

void setup_logging()
{
    static bool done = false;
    if (done) return;
    done = true;
    auto logger = spdlog::stderr_logger_mt("dragonfly");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("DRAGONFLY_SIM_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

struct Args {
    std::string scenario;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
    std::string frames;
    std::string truth;
    std::string track;
    int threads = 0;
    std::string positional;
};

Scenario require_scenario(const Args& a)
{
    if (a.scenario.empty()) throw CLI::RequiredError("--scenario");
    return load_scenario(a.scenario);
}

std::string out_dir(const Args& a, const Scenario* s, const std::string& fallback)
{
    if (!a.out.empty()) return a.out;
    if (s != nullptr && !s->output_dir.empty()) return s->output_dir;
    return fallback;
}

std::ifstream open_frames(const Args& a)
{
    if (a.frames.empty()) throw CLI::RequiredError("--frames");
    std::ifstream in(a.frames, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + a.frames);
    return in;
}

/// Streams a frame dump through the localizer.
PipelineResult localize_file(const Scenario& s, const Args& a)
{
    auto in = open_frames(a);
    FrameReader reader(in);
    Pipeline p(s.radar, scenario_channels(s), s.pipeline);
    std::vector<IfFrame> batch;
    IfFrame f;
    while (reader.next(f)) {
        batch.push_back(std::move(f));
        if (batch.size() == s.pipeline.batch_size) {
            p.process(batch);
            batch.clear();
        }
    }
    p.process(batch);
    return p.finish();
}

int cmd_synth(const Args& a, std::ostream& out)
{
    const Scenario s = require_scenario(a);
    const std::uint64_t seed = a.seed_given ? a.seed : s.seed;
    const std::filesystem::path dir(out_dir(a, &s, "out"));
    std::filesystem::create_directories(dir);
    std::ofstream file(dir / "frames.bin", std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + (dir / "frames.bin").string());
    FrameWriter writer(file);
    const std::size_t total = s.chirp_count();
    const Exec exec = s.pipeline.parallel ? Exec::parallel : Exec::serial;
    for (std::size_t first = 0; first < total; first += s.pipeline.batch_size) {
        const std::size_t n = std::min(s.pipeline.batch_size, total - first);
        for (const auto& fr : synth_batch(s.radar, s, static_cast<long>(first), n, seed, exec)) writer.write(fr);
        spdlog::debug("synthesized chirps {}..{}", first, first + n - 1);
    }
    file.close();
    std::ofstream truth(dir / "truth.csv", std::ios::binary);
    csv::write_truth(truth, scenario_truth(s));
    out << nlohmann::json{{"frames", total}, {"seed", seed}, {"path", (dir / "frames.bin").string()}}.dump() << '\n';
    return 0;
}

int cmd_localize(const Args& a, std::ostream& out)
{
    const Scenario s = require_scenario(a);
    const auto res = localize_file(s, a);
    const std::filesystem::path dir(out_dir(a, &s, "out"));
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / "detections.csv", std::ios::binary);
    csv::write_detections(f, res.all_detections());
    out << nlohmann::json{{"frames", res.frames}, {"detections", res.all_detections().size()}}.dump() << '\n';
    return 0;
}

int cmd_track(const Args& a, std::ostream& out)
{
    const Scenario s = require_scenario(a);
    const auto res = localize_file(s, a);
    const auto report = write_run_outputs(out_dir(a, &s, "out"), s, res);
    out << report.dump() << '\n';
    return 0;
}

int cmd_eval(const Args& a, std::ostream& out)
{
    if (a.track.empty()) throw CLI::RequiredError("--track");
    if (a.truth.empty()) throw CLI::RequiredError("--truth");
    const auto report = to_json(error_report(csv::read_track_file(a.track), csv::read_truth_file(a.truth)));
    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        std::ofstream f(std::filesystem::path(a.out) / "report.json", std::ios::binary);
        f << report.dump(2) << '\n';
    }
    out << report.dump() << '\n';
    return 0;
}

int cmd_design(const Args& a, std::ostream& out)
{
    const std::string path = !a.positional.empty() ? a.positional : a.scenario;
    if (path.empty()) throw CLI::RequiredError("design file");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("design", std::string("malformed JSON: ") + e.what());
    }
    const auto parent = std::filesystem::path(path).parent_path();
    const auto report = design_report(doc, parent.empty() ? "." : parent.string());
    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        std::ofstream f(std::filesystem::path(a.out) / "design.json", std::ios::binary);
        f << report.dump(2) << '\n';
    }
    out << report.dump(2) << '\n';
    return 0;
}

int cmd_baseline(const Args& a, std::ostream& out)
{
    const Scenario s = require_scenario(a);
    constexpr std::size_t kMaxChirps = 256;
    auto in = open_frames(a);
    FrameReader reader(in);
    std::vector<IfFrame> frames;
    std::size_t tx0 = 0;
    IfFrame f;
    while (tx0 < kMaxChirps && reader.next(f)) {
        if (f.tx_channel == 0) ++tx0;
        frames.push_back(std::move(f));
    }
    const auto map = range_doppler_map(s.radar, frames, tx0, 0, s.pipeline.detector.max_range_m);
    const std::filesystem::path dir(out_dir(a, &s, "out"));
    std::filesystem::create_directories(dir);
    write_range_doppler((dir / "rd_map.bin").string(), map);
    std::ofstream peaks(dir / "peaks.csv", std::ios::binary);
    peaks << "tag_id,f_m_hz,apparent_frequency_hz,shift_hz,range_m,power_db\n";
    nlohmann::json rows = nlohmann::json::array();
    const double window = std::min(250.0, 0.25 * static_cast<double>(map.n_doppler) * map.doppler_bin_hz());
    for (const auto& t : s.tags) {
        try {
            const auto pk = slow_time_localize(s.radar, map, t.f_m, window);
            peaks << t.tag_id << ',' << csv::format(t.f_m) << ',' << csv::format(pk.apparent_frequency) << ','
                  << csv::format(pk.apparent_frequency - t.f_m) << ',' << csv::format(pk.range) << ','
                  << csv::format(linear_to_db(pk.power)) << '\n';
            rows.push_back({{"tag_id", t.tag_id}, {"apparent_frequency_hz", pk.apparent_frequency}, {"range_m", pk.range}});
        } catch (const NoTagDetected&) {
            peaks << t.tag_id << ',' << csv::format(t.f_m) << ",nan,nan,nan,nan\n";
            rows.push_back({{"tag_id", t.tag_id}, {"apparent_frequency_hz", nullptr}, {"range_m", nullptr}});
        }
    }
    out << nlohmann::json{{"chirps", tx0}, {"doppler_bin_hz", map.doppler_bin_hz()}, {"peaks", rows}}.dump() << '\n';
    return 0;
}

int cmd_demo(const Args& a, std::ostream& out)
{
    if (a.positional.empty()) throw CLI::RequiredError("demo name");
    const std::uint64_t seed = a.seed_given ? a.seed : 42;
    const std::string dir = a.out.empty() ? "demo-" + a.positional : a.out;
    const auto report = run_demo(a.positional, seed, dir);
    nlohmann::json summary{{"demo", a.positional}, {"seed", seed}, {"out", dir}};
    if (report.contains("error")) summary["median_3d_error_m"] = report["error"]["error_3d_m"]["median"];
    out << summary.dump() << '\n';
    return 0;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message, const std::string& key = {})
{
    nlohmann::json j{{"error", kind}, {"message", message}};
    if (!key.empty()) j["key"] = key;
    err << j.dump() << '\n';
}

}  // namespace

void write_range_doppler(const std::string& path, const RangeDopplerMap& map)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write(kMapMagic, sizeof kMapMagic);
    const auto nd = static_cast<std::uint32_t>(map.n_doppler);
    const auto nr = static_cast<std::uint32_t>(map.n_range);
    const double dbin = map.doppler_bin_hz(), rbin = map.range_bin_hz();
    f.write(reinterpret_cast<const char*>(&nd), sizeof nd);
    f.write(reinterpret_cast<const char*>(&nr), sizeof nr);
    f.write(reinterpret_cast<const char*>(&dbin), sizeof dbin);
    f.write(reinterpret_cast<const char*>(&rbin), sizeof rbin);
    std::vector<float> cells;
    cells.reserve(2 * map.data.size());
    for (const auto& c : map.data) {
        cells.push_back(static_cast<float>(c.real()));
        cells.push_back(static_cast<float>(c.imag()));
    }
    f.write(reinterpret_cast<const char*>(cells.data()), static_cast<std::streamsize>(cells.size() * sizeof(float)));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    setup_logging();
    CLI::App app{"Radar IF synthesis and backscatter tag localization", "dragonfly-sim"};
    app.require_subcommand(1);
    app.fallthrough();
    Args a;
    app.add_option("--scenario", a.scenario, "Scenario JSON file");
    app.add_option("--seed", a.seed, "Random seed (overrides the scenario)");
    app.add_option("--out", a.out, "Output directory");
    app.add_option("--frames", a.frames, "Frame dump file");
    app.add_option("--truth", a.truth, "Truth CSV (eval)");
    app.add_option("--track", a.track, "Track CSV (eval)");
    app.add_option("--threads", a.threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

    auto* synth = app.add_subcommand("synth", "Scenario to frame dump");
    auto* localize = app.add_subcommand("localize", "Frames to detections CSV");
    auto* track = app.add_subcommand("track", "Frames to track and elevation CSV");
    auto* eval = app.add_subcommand("eval", "Track and truth CSV to an error report");
    auto* design = app.add_subcommand("design", "Lens and link-budget report");
    design->add_option("file", a.positional, "Design JSON file");
    auto* baseline = app.add_subcommand("baseline", "Slow-time range-Doppler localizer");
    auto* demo = app.add_subcommand("demo", "Built-in scenario");
    demo->add_option("name", a.positional, "Demo name")->check(CLI::IsMember(demo_names()));

    std::vector<const char*> argv;
    argv.push_back("dragonfly-sim");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        a.seed_given = app.count("--seed") > 0;
        if (a.threads > 0) omp_set_num_threads(a.threads);
        if (synth->parsed()) return cmd_synth(a, out);
        if (localize->parsed()) return cmd_localize(a, out);
        if (track->parsed()) return cmd_track(a, out);
        if (eval->parsed()) return cmd_eval(a, out);
        if (design->parsed()) return cmd_design(a, out);
        if (baseline->parsed()) return cmd_baseline(a, out);
        if (demo->parsed()) return cmd_demo(a, out);
        return 64;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::Error& e) {
        emit_error(err, "usage", e.what());
        return 64;
    } catch (const SchemaError& e) {
        emit_error(err, "schema", e.what(), e.key());
        return 2;
    } catch (const std::exception& e) {
        emit_error(err, "runtime", e.what());
        return 1;
    }
}

}  // namespace dragonfly
