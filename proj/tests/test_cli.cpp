#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polaron/config.hpp"
#include "polaron/errors.hpp"
#include "polaron/runner.hpp"

using namespace polaron;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json record_without_timestamps(const std::string& path) {
    json j = json::parse(slurp(path));
    j.erase("timestamps");
    return j;
}

struct TempDir {
    fs::path p;
    explicit TempDir(const std::string& name) : p(fs::temp_directory_path() / name) {
        fs::remove_all(p);
        fs::create_directories(p);
    }
    ~TempDir() { fs::remove_all(p); }
};

}  // namespace

TEST_CASE("parse_config: defaults and strictness") {
    auto c = parse_config(R"({"task":"pekar-free"})");
    CHECK(c.task == "pekar-free");
    CHECK(c.grid.n == 3000);
    CHECK(c.grid.r_max == 30.0);
    CHECK(c.grid.kind == "uniform");
    CHECK(c.seed == 1);

    CHECK_THROWS_AS(parse_config(R"({"task":"warp"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task":"fiber","fock":{"budget":-5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task":"fiber","fock":{"bugdet":10}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task":"fiber","grod":{}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task":"fiber",)"), ConfigError);  // syntax
    CHECK_THROWS_AS(parse_config(R"([1,2])"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid":{"n":100}})"), ConfigError);  // no task
    // config echo round-trips
    auto c2 = parse_config(config_to_json(c));
    CHECK(c2.grid.n == c.grid.n);
    CHECK(c2.task == c.task);
}

TEST_CASE("run: bounds task produces a record and parsable artifacts") {
    TempDir tmp("polaron_cli_bounds");
    auto c = parse_config(R"({"task":"bounds","grid":{"n":1000},
        "fock":{"alpha":0.5,"max_phonons":2,"K_cut":2.0,"eps":1.0}})");
    c.output_dir = tmp.p.string();
    auto rec = run(c);
    CHECK(fs::exists(rec.record_path));
    json j = json::parse(slurp(rec.record_path));
    CHECK(j["task"] == "bounds");
    const double ly = j["results"]["ly_lower"]["value"].get<double>();
    CHECK(ly == doctest::Approx(-16.0 / (3.0 * M_PI * M_PI) * 0.25 - 1.5).epsilon(1e-12));
    CHECK(j["results"].contains("numeric_energy"));
    // every artifact referenced by the record exists and parses as CSV
    for (const auto& a : j["artifacts"]) {
        const std::string path = a.get<std::string>();
        CHECK(fs::exists(path));
        std::ifstream is(path);
        std::string header;
        std::getline(is, header);
        CHECK(header.find(',') != std::string::npos);
        std::string line;
        std::size_t rows = 0;
        while (std::getline(is, line))
            if (!line.empty()) ++rows;
        CHECK(rows >= 1);
    }
}

TEST_CASE("run: reruns with identical config and seed are bitwise identical") {
    TempDir t1("polaron_cli_rep1"), t2("polaron_cli_rep2");
    auto c = parse_config(R"({"task":"dispersion",
        "fock":{"alpha":0.5,"max_phonons":2,"K_cut":2.0,"eps":1.0,
                 "P_values":[0.0,0.1,0.2]},"seed":7})");
    c.output_dir = t1.p.string();
    auto r1 = run(c);
    c.output_dir = t2.p.string();
    auto r2 = run(c);
    json a = record_without_timestamps(r1.record_path);
    json b = record_without_timestamps(r2.record_path);
    a.erase("artifacts");
    b.erase("artifacts");
    a["config"].erase("output_dir");
    b["config"].erase("output_dir");
    CHECK(a.dump() == b.dump());
    CHECK(slurp((t1.p / "dispersion" / "dispersion.csv").string()) ==
          slurp((t2.p / "dispersion" / "dispersion.csv").string()));
}

TEST_CASE("run: pekar-free record carries the energy decomposition") {
    TempDir tmp("polaron_cli_pekar");
    auto c = parse_config(R"({"task":"pekar-free","grid":{"n":1500,"r_max":30.0}})");
    c.output_dir = tmp.p.string();
    auto rec = run(c);
    json j = json::parse(slurp(rec.record_path));
    const auto& r = j["results"];
    CHECK(r["e_pek"]["value"].get<double>() == doctest::Approx(-0.1085).epsilon(0.005));
    CHECK(r["virial_residual"].get<double>() < 1e-5);
    CHECK(r["nodeless"].get<bool>());
    CHECK(r.contains("mu"));
    CHECK(r.contains("mass_constant_psi4"));
}

TEST_CASE("run: failures leave no partial artifacts") {
    TempDir tmp("polaron_cli_fail");
    auto c = parse_config(R"({"task":"fiber","fock":{"K_cut":8.0,"eps":0.5,"budget":100}})");
    c.output_dir = tmp.p.string();
    CHECK_THROWS_AS(run(c), BudgetError);
    CHECK(!fs::exists(tmp.p / "fiber" / "record.json"));
    std::size_t files = 0;
    if (fs::exists(tmp.p / "fiber"))
        for (auto& e : fs::directory_iterator(tmp.p / "fiber")) (void)e, ++files;
    CHECK(files == 0);
}
