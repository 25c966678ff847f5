#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run forms_lab(std::vector<std::string> args) {
    args.insert(args.begin(), "forms_lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = formslab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Last non-empty line of a CSV document.
std::string last_row(const std::string& csv) {
    auto end = csv.find_last_not_of('\n');
    auto begin = csv.rfind('\n', end);
    return csv.substr(begin + 1, end - begin);
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("forms_lab_test_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

const char* kDisc = R"({"ball": 1})";

}  // namespace

TEST_CASE("sb monomial JSON") {
    const auto r = forms_lab({"sb", "--monomial", "2,3"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& roots = doc["roots"];
    REQUIRE(roots.size() == 4);
    CHECK(roots[0] == nlohmann::json({{"num", -1}, {"den", 3}, {"mult", 1}}));
    CHECK(roots[1] == nlohmann::json({{"num", -1}, {"den", 2}, {"mult", 1}}));
    CHECK(roots[2] == nlohmann::json({{"num", -2}, {"den", 3}, {"mult", 1}}));
    CHECK(roots[3] == nlohmann::json({{"num", -1}, {"den", 1}, {"mult", 2}}));
    CHECK(doc["config"]["monomial"] == "2,3");
    CHECK(r.err.find("sb:") == 0);
}

TEST_CASE("lct JSON") {
    const auto a = nlohmann::json::parse(forms_lab({"lct", "--k", "2,2"}).out);
    CHECK(a["r"] == nlohmann::json({{"num", 1}, {"den", 2}}));
    CHECK(a["m"] == 2);
    const auto b = nlohmann::json::parse(forms_lab({"lct", "--k", "0,0"}).out);
    CHECK(b["infinite"] == true);
}

TEST_CASE("bracket spot value") {
    const auto r = forms_lab({"bracket", "--n", "2", "--T", "10", "--alpha", "1"});
    REQUIRE(r.code == 0);
    CHECK(last_row(r.out) == "2,10,1,27,22,48,1,5,true");
    CHECK(r.err.find("holds=true bracket=1 upper=5") != std::string::npos);
}

TEST_CASE("count disc example") {
    const auto r = forms_lab({"count", "--form", "x1^2 + x2^2", "--domain", kDisc, "--T", "100", "--alpha", "1", "--timing", "false"});
    REQUIRE(r.code == 0);
    CHECK(last_row(r.out) == "100,1,317,0");
    CHECK(r.out.find("T,alpha,count,wall_time_ms\n") != std::string::npos);
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(r.out.find("# @ form = x1^2 + x2^2\n") != std::string::npos);
}

TEST_CASE("divisor rows") {
    const auto r = forms_lab({"divisor", "--n", "2", "--t", "10"});
    REQUIRE(r.code == 0);
    CHECK(last_row(r.out).rfind("10,27,", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(forms_lab({"count", "--domain", kDisc}).code == 2);                        // missing form
    CHECK(forms_lab({"count", "--form", "x1^^2", "--domain", kDisc}).code == 2);      // parse error
    CHECK(forms_lab({"count", "--form", "x1^2", "--domain", "{\"ball\": -1}"}).code == 2);
    CHECK(forms_lab({"count", "--bogus", "1"}).code == 2);
    CHECK(forms_lab({}).code == 2);
    CHECK(forms_lab({"count", "--help"}).code == 0);
    CHECK(forms_lab({"count", "--form", "x1*x2*x3", "--domain", R"({"box": [[0,1],[0,1],[0,1]]})", "--T", "3e7"}).code == 4);
    CHECK(forms_lab({"twist", "--form", "x1^2 + x2^2 - x3^2", "--eps", "0.001", "--matrices", "10"}).code == 4);
    CHECK(forms_lab({"volume", "--form", "x1*x2", "--domain", R"({"box": [[0,1],[0,1]]})", "--samples", "1000",
                     "--target-rel-stderr", "1e-6"}).code == 3);

    TempDir tmp;
    const auto samples = tmp.path / "few.csv";
    std::ofstream(samples) << "T,value\n10,1\n20,2\n";
    CHECK(forms_lab({"fit", "--input", samples.string(), "--n", "2", "--d", "2"}).code == 3);
}

TEST_CASE("config precedence: flag > env > file") {
    TempDir tmp;
    const auto cfg = tmp.path / "vol.conf";
    std::ofstream(cfg) << "# volume run\nform = x1*x2\ndomain = {\"box\": [[0,1],[0,1]]}\nsamples = 2000\nseed = 5\n";

    auto seed_of = [](const Run& r) {
        const auto pos = r.out.find("# @ seed = ");
        return r.out.substr(pos + 11, r.out.find('\n', pos) - pos - 11);
    };
    ::unsetenv("FORMS_LAB_SEED");
    CHECK(seed_of(forms_lab({"volume", "--config", cfg.string()})) == "5");
    ::setenv("FORMS_LAB_SEED", "6", 1);
    CHECK(seed_of(forms_lab({"volume", "--config", cfg.string()})) == "6");
    CHECK(seed_of(forms_lab({"volume", "--config", cfg.string(), "--seed", "7"})) == "7");
    ::unsetenv("FORMS_LAB_SEED");

    std::ofstream(tmp.path / "bad.conf") << "unknown_key = 3\n";
    CHECK(forms_lab({"volume", "--config", (tmp.path / "bad.conf").string()}).code == 2);
    CHECK(forms_lab({"count", "--config", cfg.string()}).code == 2);  // samples is not a count key
}

TEST_CASE("property: outputs replay byte-for-byte from their embedded config") {
    TempDir tmp;
    const std::vector<std::vector<std::string>> runs{
        {"count", "--form", "x1*x2", "--domain", R"({"box": [[0,1],[0,1]]})", "--T", "4,10,20", "--alpha", "0.5", "--timing", "false"},
        {"volume", "--form", "x1^2 + x2^2 - x3^2", "--domain", R"({"ball": 1})", "--samples", "5000", "--seed", "3", "--T", "2,4"},
        {"slice", "--form", "x1^2 + x2^2", "--domain", kDisc, "--v", "0.6,0.8", "--eps", "0.1,0.01", "--samples", "3000"},
        {"bracket", "--n", "3", "--T", "4,10", "--alpha", "0.5,1"},
        {"sb", "--sum-of-squares", "3"},
        {"sb", "--monomial", "1,4", "--format", "csv"},
        {"twist", "--form", "x1^2 + x2^2 - x3^2", "--mode", "count", "--T", "5,8", "--seed", "7"},
    };
    int i = 0;
    for (auto args : runs) {
        const auto first = tmp.path / ("first" + std::to_string(i));
        const auto second = tmp.path / ("second" + std::to_string(i));
        ++i;
        args.insert(args.end(), {"--output", first.string()});
        REQUIRE(forms_lab(args).code == 0);
        REQUIRE(forms_lab({args[0], "--config", first.string(), "--output", second.string()}).code == 0);
        CHECK(slurp(first) == slurp(second));
        CHECK_FALSE(slurp(first).empty());
    }
}

TEST_CASE("fit and report") {
    TempDir tmp;
    const auto vol = tmp.path / "vol.csv";
    REQUIRE(forms_lab({"volume", "--form", "x1^2 + x2^2", "--domain", kDisc, "--T", "geom:4:256:9", "--samples", "50000",
                       "--output", vol.string()}).code == 0);
    const auto r = forms_lab({"fit", "--input", vol.string(), "--n", "2", "--d", "2"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["fit"]["m"] == 1);
    CHECK(std::abs(doc["fit"]["r"].get<double>() - 1.0) <= 0.05);

    const auto rep = forms_lab({"report", "--form", "x1^2 + x2^2", "--domain", kDisc, "--T", "geom:4:256:7", "--samples", "50000",
                                "--expect-r", "1", "--format", "json"});
    REQUIRE(rep.code == 0);
    const auto rd = nlohmann::json::parse(rep.out);
    CHECK(rd["rows"].size() == 7);
    CHECK(rd["expected"]["m_matches"] == true);
}
