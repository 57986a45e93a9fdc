#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "blframe/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Capture {
    std::stringstream out, err;
    std::streambuf* old_out;
    std::streambuf* old_err;
    Capture() : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
    ~Capture() {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
    }
};

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("blframe-test-" + std::to_string(std::rand()) + std::to_string(std::rand()));
        fs::create_directories(path);
        setenv("BLFRAME_CACHE_DIR", path.c_str(), 1);
    }
    ~TempDir() {
        unsetenv("BLFRAME_CACHE_DIR");
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::vector<std::string>& args, std::string* out = nullptr,
        std::string* err = nullptr) {
    Capture cap;
    const int rc = blf::cli::run_command(args);
    if (out) *out = cap.out.str();
    if (err) *err = cap.err.str();
    return rc;
}

}  // namespace

TEST_CASE("build writes a loadable cache and check passes") {
    TempDir tmp;
    std::string out;
    CHECK(run({"build", "--order", "1"}, &out) == 0);
    CHECK(out.find("\"trunc\"") != std::string::npos);
    bool found_cache = false;
    for (const auto& e : fs::directory_iterator(tmp.path))
        if (e.path().extension() == ".json") found_cache = true;
    CHECK(found_cache);

    CHECK(run({"check", "--order", "1"}, &out) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("ortho_residual").get<double>() <= 1e-7);
}

TEST_CASE("norm anchor and range violation exit codes") {
    TempDir tmp;
    std::string out, err;
    CHECK(run({"norm", "--space", "besov", "--order", "0", "--s", "0", "--p", "2", "--q", "2",
               "--fn", "indicator:0,1", "--jmax", "12"},
              &out) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j.at("value").get<double>() == doctest::Approx(1.7321).epsilon(1e-3));

    const int rc = run({"norm", "--space", "besov", "--order", "1", "--s", "3", "--p", "2",
                        "--q", "2", "--fn", "gaussian:0,1"},
                       &out, &err);
    CHECK(rc == 2);
    CHECK(err.find("(-1.5, 2)") != std::string::npos);
}

TEST_CASE("coeffs CSV is byte-identical across runs") {
    TempDir tmp;
    const auto file1 = tmp.path / "a.csv";
    const auto file2 = tmp.path / "b.csv";
    CHECK(run({"coeffs", "--order", "1", "--fn", "gaussian:0,1", "--jmax", "4", "--out",
               file1.string()}) == 0);
    CHECK(run({"coeffs", "--order", "1", "--fn", "gaussian:0,1", "--jmax", "4", "--out",
               file2.string()}) == 0);
    std::ifstream a(file1), b(file2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
}

TEST_CASE("dump-config round-trips") {
    TempDir tmp;
    std::string dump1;
    CHECK(run({"norm", "--space", "triebel", "--order", "2", "--s", "0.75", "--p", "1.5",
               "--q", "1.2", "--fn", "polybump:6,-1,1", "--jmax", "5", "--dump-config"},
              &dump1) == 0);
    const auto cfg_file = tmp.path / "cfg.json";
    std::ofstream(cfg_file) << dump1;
    std::string dump2;
    CHECK(run({"norm", "--config", cfg_file.string(), "--dump-config"}, &dump2) == 0);
    CHECK(dump1 == dump2);

    // the re-ingested config reproduces the run
    std::string out1, out2;
    CHECK(run({"norm", "--space", "triebel", "--order", "2", "--s", "0.75", "--p", "1.5",
               "--q", "1.2", "--fn", "polybump:6,-1,1", "--jmax", "5"},
              &out1) == 0);
    CHECK(run({"norm", "--config", cfg_file.string()}, &out2) == 0);
    CHECK(out1 == out2);
}

TEST_CASE("lp-recon reports a small residual for a gaussian") {
    std::string out;
    CHECK(run({"lp-recon", "--fn", "gaussian:0,1", "--levels", "12"}, &out) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j.at("residual").get<double>() <= 1e-6);
}

TEST_CASE("parse errors and unknown subcommands fail without crashing") {
    std::string out, err;
    CHECK(run({"frobnicate"}, &out, &err) != 0);
    CHECK(run({"norm", "--space", "nonsense", "--fn", "gaussian:0,1"}, &out, &err) != 0);
}
