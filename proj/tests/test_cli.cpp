#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string cli = IMBREG_CLI_PATH;

int run(const std::string& args) {
    std::string command = cli + " " + args + " >/dev/null 2>&1";
    int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path sandbox(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("imbreg_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("generate emits a csv and a manifest", "[cli]") {
    auto dir = sandbox("generate");
    REQUIRE(run("--out-dir " + dir.string() +
                " generate --name euclidean --n 200 --seed 7") == 0);
    CHECK(fs::exists(dir / "euclidean.csv"));
    auto manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("command") == "generate");
    CHECK(manifest.at("version") == "0.1.0");
    CHECK(manifest.at("outputs").size() == 1);

    std::string header = slurp(dir / "euclidean.csv").substr(0, 6);
    CHECK(header == "a,b,y\n");
}

TEST_CASE("relevance scores every row", "[cli]") {
    auto dir = sandbox("relevance");
    REQUIRE(run("--out-dir " + dir.string() +
                " generate --name nernst --n 150 --seed 3") == 0);
    REQUIRE(run("--out-dir " + dir.string() + " relevance --input " +
                (dir / "nernst.csv").string() +
                " --target y --function density_ratio") == 0);
    std::string text = slurp(dir / "relevance.csv");
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 151);  // header + one row per sample
}

TEST_CASE("resample writes a csv plus provenance with mir values", "[cli]") {
    auto dir = sandbox("resample");
    REQUIRE(run("--out-dir " + dir.string() +
                " generate --name nernst --n 400 --seed 5") == 0);
    REQUIRE(run("--out-dir " + dir.string() + " resample --input " +
                (dir / "nernst.csv").string() +
                " --target y --method crbsmogn --relevance density_ratio --seed 9") == 0);
    CHECK(fs::exists(dir / "resampled.csv"));
    auto provenance = json::parse(slurp(dir / "resampled.csv.provenance.json"));
    CHECK(provenance.at("mir_before").get<double>() > 1.0);
    CHECK(provenance.at("mir_after").get<double>() <
          provenance.at("mir_before").get<double>());
    CHECK(provenance.at("rows_out").get<std::size_t>() >=
          provenance.at("rows_in").get<std::size_t>());
}

TEST_CASE("reruns with the same seed are byte-identical", "[cli]") {
    auto dir_a = sandbox("rerun_a");
    auto dir_b = sandbox("rerun_b");
    for (const auto& dir : {dir_a, dir_b}) {
        REQUIRE(run("--out-dir " + dir.string() +
                    " generate --name stribeck --n 300 --noise 0.03 --seed 21") == 0);
        REQUIRE(run("--out-dir " + dir.string() + " resample --input " +
                    (dir / "stribeck.csv").string() +
                    " --target y --method wercs --relevance kde --under --seed 4") == 0);
    }
    CHECK(slurp(dir_a / "stribeck.csv") == slurp(dir_b / "stribeck.csv"));
    CHECK(slurp(dir_a / "resampled.csv") == slurp(dir_b / "resampled.csv"));
    CHECK(slurp(dir_a / "resampled.csv.provenance.json") ==
          slurp(dir_b / "resampled.csv.provenance.json"));
}

TEST_CASE("train, evaluate, and ensemble round-trip", "[cli]") {
    auto dir = sandbox("train");
    REQUIRE(run("--out-dir " + dir.string() +
                " generate --name euclidean --n 300 --seed 2") == 0);
    std::string csv = (dir / "euclidean.csv").string();
    REQUIRE(run("--out-dir " + dir.string() + " train --input " + csv +
                " --target y --hidden-units 16 --epochs 60 --patience 60 --seed 1 "
                "--output normal.json") == 0);
    REQUIRE(run("--out-dir " + dir.string() + " train --input " + csv +
                " --target y --loss dense --relevance kde --hidden-units 16 --epochs 60 "
                "--patience 60 --seed 1 --output weighted.json") == 0);
    REQUIRE(run("--out-dir " + dir.string() + " evaluate --input " + csv +
                " --target y --model " + (dir / "normal.json").string()) == 0);
    auto eval = json::parse(slurp(dir / "evaluation.json"));
    CHECK(eval.at("mse").get<double>() < 0.05);
    CHECK(eval.at("bins").size() == 5);

    REQUIRE(run("--out-dir " + dir.string() + " ensemble --model-imbalanced " +
                (dir / "weighted.json").string() + " --model-normal " +
                (dir / "normal.json").string() + " --input " + csv +
                " --target y --mode mean") == 0);
    std::string preds = slurp(dir / "ensemble_predictions.csv");
    CHECK(std::count(preds.begin(), preds.end(), '\n') == 301);

    REQUIRE(run("--out-dir " + dir.string() + " ensemble --model-imbalanced " +
                (dir / "weighted.json").string() + " --model-normal " +
                (dir / "normal.json").string() + " --input " + csv +
                " --target y --mode threshold --relevance kde --threshold 0.5 "
                "--output thresholded.csv") == 0);
    CHECK(fs::exists(dir / "thresholded.csv"));
}

TEST_CASE("benchmark emits report and csv tables", "[cli]") {
    auto dir = sandbox("benchmark");
    REQUIRE(run("--out-dir " + dir.string() +
                " benchmark --dataset euclidean,arctan --n 120 "
                "--strategies wercs:kde --reps 2 --seed 3 --workers 2 --candidates 5 "
                "--hidden-units 8 --epochs 10 --patience 10 --ensemble") == 0);
    auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report.at("datasets").size() == 2);
    CHECK(fs::exists(dir / "bin_errors.csv"));
    CHECK(fs::exists(dir / "bin_wins.csv"));
    auto manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("outputs").size() == 3);
}

TEST_CASE("distinct exit codes for distinct failure kinds", "[cli]") {
    auto dir = sandbox("errors");
    // Unknown generator: config error.
    CHECK(run("--out-dir " + dir.string() + " generate --name nope") == 2);
    // Applicability violation: smogn cannot take ratio-scale relevance.
    REQUIRE(run("--out-dir " + dir.string() +
                " generate --name euclidean --n 100 --seed 1") == 0);
    CHECK(run("--out-dir " + dir.string() + " resample --input " +
              (dir / "euclidean.csv").string() +
              " --target y --method smogn --relevance density_ratio") == 3);
    // Missing file: data/io error.
    CHECK(run("--out-dir " + dir.string() +
              " relevance --input /nonexistent.csv --target y") == 4);
    auto err = json::parse(slurp(dir / "error.json"));
    CHECK(err.contains("error"));
    CHECK(err.contains("message"));
}
