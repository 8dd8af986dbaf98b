#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kBinary = LAYOUTSYNTH_PATH;

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("layoutsynth_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args, const fs::path& log)
{
    const std::string command = kBinary.string() + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& path)
{
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST(Cli, SynthIsByteReproducible)
{
    const fs::path dir = scratch("synth");
    for (const char* mode : {"pbd", "mcmc"}) {
        const std::string flags = std::string("living_room --seed 7 --iters 400 --mode ") + mode + " --overlay access circles";
        ASSERT_EQ(run("synth " + flags + " --out " + (dir / "a").string(), dir / "a.log"), 0) << slurp(dir / "a.log");
        ASSERT_EQ(run("synth " + flags + " --out " + (dir / "b").string(), dir / "b.log"), 0) << slurp(dir / "b.log");
        for (const char* file : {"layout.json", "layout.svg", "trace.csv", "run_meta.json"}) {
            const std::string a = slurp(dir / "a" / file);
            EXPECT_FALSE(a.empty()) << mode << " " << file;
            EXPECT_EQ(a, slurp(dir / "b" / file)) << mode << " " << file;
        }
    }
    fs::remove_all(dir);
}

TEST(Cli, SuggestWritesOneSvgPerSeed)
{
    const fs::path dir = scratch("suggest");
    ASSERT_EQ(run("suggest desk --seed 3 --seeds 4 --threads 2 --out " + dir.string(), dir / "log"), 0)
        << slurp(dir / "log");
    for (int seed = 3; seed < 7; ++seed) {
        EXPECT_TRUE(fs::exists(dir / ("suggestion_" + std::to_string(seed) + ".svg"))) << seed;
    }
    const std::string single = slurp(dir / "suggestion_5.svg");
    const fs::path again = scratch("suggest_again");
    ASSERT_EQ(run("suggest desk --seed 5 --seeds 1 --threads 1 --out " + again.string(), again / "log"), 0);
    EXPECT_EQ(slurp(again / "suggestion_5.svg"), single);
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST(Cli, CompareSharesTheIterationIndex)
{
    const fs::path dir = scratch("compare");
    ASSERT_EQ(run("compare desk --seed 2 --iters 2000 --out " + dir.string(), dir / "log"), 0) << slurp(dir / "log");
    EXPECT_EQ(first_line(dir / "compare.csv"), "iteration,pbd_energy,pbd_best_energy,mcmc_energy,mcmc_best_energy");
    for (const char* file : {"pbd.svg", "mcmc.svg", "pbd_meta.json", "mcmc_meta.json"}) {
        EXPECT_TRUE(fs::exists(dir / file)) << file;
    }
    fs::remove_all(dir);
}

TEST(Cli, BenchRecordsWallTime)
{
    const fs::path dir = scratch("bench");
    ASSERT_EQ(run("bench --scene theater1 --counts 200 --repeat 1 --out " + (dir / "bench.csv").string(), dir / "log"), 0)
        << slurp(dir / "log");
    std::ifstream in(dir / "bench.csv");
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_NE(header.find("mean_seconds"), std::string::npos);
    EXPECT_EQ(row.rfind("200,201,1,", 0), 0u) << row;
    const double seconds = std::stod(row.substr(std::string("200,201,1,").size()));
    EXPECT_GT(seconds, 0.0);
    fs::remove_all(dir);
}

TEST(Cli, ExportThenValidate)
{
    const fs::path dir = scratch("export");
    ASSERT_EQ(run("export tp_bedroom", dir / "scene.json"), 0);
    EXPECT_EQ(run("validate " + (dir / "scene.json").string(), dir / "log"), 0) << slurp(dir / "log");
    ASSERT_EQ(run("synth " + (dir / "scene.json").string() + " --out " + (dir / "out").string(), dir / "log"), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "layout.json"));
    fs::remove_all(dir);
}

TEST(Cli, ValidationFailuresExitTwo)
{
    const fs::path dir = scratch("invalid");
    std::ofstream(dir / "bad.json") << "{\n  \"room\": [[0, 0], [4, 0], [4, 3], [0, 3]],\n  \"objects\": [{\"id\": 1}]\n}\n";
    EXPECT_EQ(run("validate " + (dir / "bad.json").string(), dir / "log"), 2);
    const std::string message = slurp(dir / "log");
    EXPECT_NE(message.find("bad.json"), std::string::npos) << message;
    EXPECT_NE(message.find("/objects/0/id"), std::string::npos) << message;
    EXPECT_EQ(run("synth living_room --param sofas=2 --out " + (dir / "x").string(), dir / "log"), 2);
    EXPECT_NE(slurp(dir / "log").find("sofas"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, RuntimeFailuresExitOne)
{
    const fs::path dir = scratch("runtime");
    std::ofstream(dir / "blocker") << "not a directory";
    EXPECT_EQ(run("synth desk --out " + (dir / "blocker" / "out").string(), dir / "log"), 1) << slurp(dir / "log");
    EXPECT_FALSE(slurp(dir / "log").empty());
    EXPECT_EQ(run("synth " + (dir / "missing.json").string() + " --out " + (dir / "x").string(), dir / "log"), 1)
        << slurp(dir / "log");
    EXPECT_EQ(run("frobnicate", dir / "log"), 1);
    EXPECT_EQ(run("--help", dir / "log"), 0);
    fs::remove_all(dir);
}
