// SPDX-License-Identifier: Apache-2.0
//
// railbs - rail-mounted reconfigurable antenna array simulator
// Copyright (C) 2026 The railbs authors
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

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "railbs/config.hpp"
#include "railbs/csv.hpp"
#include "railbs/errors.hpp"
#include "railbs/experiments.hpp"

using namespace railbs;
namespace fs = std::filesystem;

namespace
{

const char *kSmall = R"({
  "seed": 9,
  "geometry": {"array_count": 4, "antennas_per_array": 2},
  "scenario": {"samples": 3, "mean_total_users": 6,
               "time_varying": {"snapshots": 4, "snapshots_per_period": 2}},
  "optimizer": {"max_cycles": 1, "max_inner_position": 10},
  "sweep": {"sparsities": [0.2, 0.6], "schemes": ["fpa", "hmet"]}
})";

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &tag)
    {
        path = fs::temp_directory_path() / ("railbs-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(RAILBS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path &dir, const std::string &text)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::string first_line(const fs::path &p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_hash(0xabcULL) == "0000000000000abc");
}

TEST_CASE("csv writer")
{
    TempDir dir("csv");
    {
        CsvWriter w(dir.path / "t.csv", 7, 0x1234, {"a", "b"});
        w.cell(1).cell(0.5);
        w.end_row();
        w.cell("x");
        CHECK_THROWS(w.end_row());
    }
    const std::string text = read_file(dir.path / "t.csv");
    CHECK(text.rfind("# railbs seed=7 config_hash=0000000000001234\na,b\n1,0.5\n", 0) == 0);
}

TEST_CASE("scheme resolution")
{
    const ExperimentConfig cfg = parse_config(kSmall);
    const PatternCodebook cb(cfg.codebook);
    const SchemeSetup fpa = build_scheme(cfg, cb, "fpa");
    CHECK(fpa.layout.array_count() == 3);
    CHECK(fpa.layout.antennas_per_array() == 2);
    const SchemeSetup ps = build_scheme(cfg, cb, "ps_only@2");
    CHECK(ps.layout.array_count() == 2);
    CHECK(ps.layout.antennas_per_array() == 4);
    CHECK_THROWS_AS(build_scheme(cfg, cb, "fpa@2"), ConfigError);
    CHECK_THROWS_AS(build_scheme(cfg, cb, "hmet@0"), ConfigError);
    CHECK_THROWS_AS(build_scheme(cfg, cb, "nope"), ConfigError);
}

TEST_CASE("samples are shared across sparsity")
{
    const ExperimentConfig cfg = parse_config(kSmall);
    const auto a = experiment_samples(cfg, 0.2);
    const auto b = experiment_samples(cfg, 0.2);
    REQUIRE(a.size() == 3);
    for (std::size_t s = 0; s < a.size(); ++s)
    {
        REQUIRE(a[s].users.size() == b[s].users.size());
        for (std::size_t k = 0; k < a[s].users.size(); ++k)
            CHECK(a[s].users[k].position() == b[s].users[k].position());
    }
}

TEST_CASE("command line")
{
    TempDir dir("cli");
    const fs::path cfg = write_config(dir.path, kSmall);
    const std::string base = "--config " + cfg.string() + " --out ";

    SUBCASE("converge writes provenance and a manifest")
    {
        const fs::path out = dir.path / "conv";
        REQUIRE(run_cli("converge " + base + out.string()) == 0);
        for (const char *name : {"trace.csv", "positions.csv", "samples.csv"})
            CHECK(first_line(out / name).rfind("# railbs seed=9 config_hash=", 0) == 0);
        const auto manifest = nlohmann::json::parse(read_file(out / "manifest.json"));
        CHECK(manifest["scheme"] == "hmet");
        CHECK(manifest["seed"] == 9);
        const auto resolved = parse_config(read_file(out / "resolved_config.json"));
        CHECK(format_hash(config_hash(resolved)) == manifest["config_hash"].get<std::string>());
        CHECK(first_line(out / "trace.csv").find(manifest["config_hash"].get<std::string>()) != std::string::npos);

        const fs::path again = dir.path / "conv2";
        REQUIRE(run_cli("converge " + base + again.string()) == 0);
        CHECK(read_file(out / "trace.csv") == read_file(again / "trace.csv"));

        const fs::path other = dir.path / "conv3";
        REQUIRE(run_cli("converge --seed 10 " + base + other.string()) == 0);
        CHECK(first_line(other / "trace.csv").rfind("# railbs seed=10 ", 0) == 0);
    }
    SUBCASE("other subcommands")
    {
        REQUIRE(run_cli("sweep " + base + (dir.path / "sw").string()) == 0);
        CHECK(first_line(dir.path / "sw" / "sweep.csv").rfind("# railbs seed=9", 0) == 0);
        REQUIRE(run_cli("timevary " + base + (dir.path / "tv").string()) == 0);
        CHECK(fs::exists(dir.path / "tv" / "tv_rates.csv"));
        CHECK(fs::exists(dir.path / "tv" / "manifest.json"));
        REQUIRE(run_cli("dump-codebook " + base + (dir.path / "cb").string()) == 0);
        CHECK(first_line(dir.path / "cb" / "codebook.csv").rfind("# railbs seed=9", 0) == 0);
        REQUIRE(run_cli("converge --scheme ps_only --threads 2 " + base + (dir.path / "ps").string()) == 0);
        CHECK(nlohmann::json::parse(read_file(dir.path / "ps" / "manifest.json"))["scheme"] == "ps_only");
    }
    SUBCASE("exit codes")
    {
        CHECK(run_cli("") == 2);
        CHECK(run_cli("converge --bogus") == 2);
        CHECK(run_cli("converge --config " + (dir.path / "missing.json").string()) == 2);
        const fs::path bad = dir.path / "bad";
        fs::create_directories(bad);
        CHECK(run_cli("converge --config " + write_config(bad, R"({"physical": {"noise_power_w": -1}})").string()) == 2);
        CHECK(run_cli("converge --scheme magic " + base + (dir.path / "m").string()) == 2);
        CHECK(run_cli("converge --threads 0 " + base + (dir.path / "t").string()) == 2);

        // Output path blocked by a regular file.
        std::ofstream(dir.path / "blocker") << "x";
        CHECK(run_cli("dump-codebook " + base + (dir.path / "blocker" / "sub").string()) == 3);
    }
}
