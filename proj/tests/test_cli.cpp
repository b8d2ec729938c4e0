#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mm/moments.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MM_BIN
#define MM_BIN "./mm"
#endif
#ifndef MM_ROOT
#define MM_ROOT "."
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    std::string out_file = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/mm_cli_out.txt";
    std::string cmd = std::string(MM_BIN) + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    return {WEXITSTATUS(rc), slurp(out_file)};
}

const std::string root = MM_ROOT;

} // namespace

TEST_CASE("kloosterman-table: determinism and spot value") {
    auto r1 = run("kloosterman-table --c-max 6 --a-max 3 --b-max 2 --out /tmp/mm_kt1.csv");
    auto r2 = run("kloosterman-table --c-max 6 --a-max 3 --b-max 2 --out /tmp/mm_kt2.csv");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp("/tmp/mm_kt1.csv") == slurp("/tmp/mm_kt2.csv")); // byte-identical
    // spot row (1,1,5) = (3 - sqrt 5)/2
    std::string body = slurp("/tmp/mm_kt1.csv");
    CHECK(body.find("1,1,5,0.38196601125010499") != std::string::npos);
    CHECK(body.rfind("a,b,c,value\n", 0) == 0);
    // range error -> input error exit
    CHECK(run("kloosterman-table --c-max 100000000 --out /tmp/mm_kt3.csv").exit_code == 3);
}

TEST_CASE("voronoi-check: pass, zero psi, forced truncation failure") {
    auto ok = run("voronoi-check --corpus d3 --m 1 --c 1 --d 1 --X 50 "
                  "--truncation 8000 --tol 1e-4 --out /tmp/mm_vc.json");
    CHECK(ok.exit_code == 0);
    CHECK(slurp("/tmp/mm_vc.json").find("\"pass\": true") != std::string::npos);

    auto zero = run("voronoi-check --corpus d3 --m 1 --c 1 --d 1 --X 50 --psi zero "
                    "--truncation 50 --out /tmp/mm_vc0.json");
    CHECK(zero.exit_code == 0);
    auto body = slurp("/tmp/mm_vc0.json");
    CHECK(body.find("\"lhs\": [\n  0.0,\n  0.0\n ]") != std::string::npos);

    auto fail = run("voronoi-check --corpus d3 --m 1 --c 1 --d 1 --X 50 "
                    "--truncation 1 --out /tmp/mm_vcf.json");
    CHECK(fail.exit_code == 2);
}

TEST_CASE("kuznetsov-check against the vendored corpus") {
    std::string corpus = root + "/data/maass_even.dat";
    if (!std::ifstream(corpus)) {
        MESSAGE("vendored corpus not present; acceptance suite covers this path");
        return;
    }
    auto r = run("kuznetsov-check --corpus-path " + corpus +
                 " --m 1 --n 1 --T 9 --M 2 --parity even --c-max 250 --out /tmp/mm_kz.json");
    CHECK(r.exit_code == 0);
    CHECK(slurp("/tmp/mm_kz.json").find("\"pass\": true") != std::string::npos);

    // odd run on the even-only corpus: empty spectral side is flagged, exit 0
    auto r2 = run("kuznetsov-check --corpus-path " + corpus +
                  " --m 1 --n 1 --T 9 --M 2 --parity odd --c-max 60 --out /tmp/mm_kzo.json");
    CHECK(r2.exit_code == 0);
    CHECK(slurp("/tmp/mm_kzo.json").find("\"empty_spectral_side\": true") !=
          std::string::npos);

    // corrupted corpus: parse error with a line number, exit 3
    {
        std::ofstream bad("/tmp/mm_bad_corpus.dat");
        bad << "maass v1\nform t_j=9.5 parity=even omega=1.0\nlambda x 3\n";
    }
    auto r3 = run("kuznetsov-check --corpus-path /tmp/mm_bad_corpus.dat --m 1 --n 1 "
                  "--T 9 --M 2 --parity even --c-max 10");
    CHECK(r3.exit_code == 3);
    CHECK(r3.out.find("line 3") != std::string::npos);
}

TEST_CASE("fetch-maass offline fixture") {
    std::string fixture = root + "/data/maass_fixture.dat";
    if (!std::ifstream(fixture)) {
        MESSAGE("fixture not present; created by the data bootstrap");
        return;
    }
    auto r = run("--offline fetch-maass --min-t 9 --max-t 10 --out /tmp/mm_fetch.dat "
                 "--fixture " + fixture);
    CHECK(r.exit_code == 0);
    CHECK(slurp("/tmp/mm_fetch.dat") == slurp(fixture)); // byte-identical replay

    CHECK(run("--offline fetch-maass --min-t 10 --max-t 9 --fixture " + fixture)
              .exit_code == 3);
}

TEST_CASE("moment-predict: single row matches a direct call") {
    auto r = run("moment-predict --corpus sym2delta --coeff-limit 12000 --p 2 "
                 "--t-lo 150 --t-hi 150 --t-steps 1 --m-rule fixed:30 --out /tmp/mm_mp.csv");
    CHECK(r.exit_code == 0);
    std::ifstream csv("/tmp/mm_mp.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "T,M,p,main,secondary,budget");
    double T, M, main, sec, budget;
    long long p;
    CHECK(std::sscanf(row.c_str(), "%lf,%lf,%lld,%lf,%lf,%lf", &T, &M, &p, &main, &sec,
                      &budget) == 6);
    auto f = mm::gl3::GL3Coefficients::sym2_delta(12000);
    auto direct = mm::moments::predict_moment(f, 2, 150.0, 30.0, false);
    CHECK(main == doctest::Approx(direct.main).epsilon(1e-12));
    CHECK(budget == doctest::Approx(direct.error_budget).epsilon(1e-12));

    // budget decreasing in M while the inverse powers of M dominate
    // (the M T^{1/7} term eventually turns it around)
    auto r0 = run("moment-predict --corpus sym2delta --coeff-limit 12000 --p 2 "
                  "--t-lo 150 --t-hi 150 --t-steps 1 --m-rule fixed:10 --out /tmp/mm_mp0.csv");
    CHECK(r0.exit_code == 0);
    {
        std::ifstream csv0("/tmp/mm_mp0.csv");
        std::getline(csv0, header);
        std::getline(csv0, row);
        std::sscanf(row.c_str(), "%lf,%lf,%lld,%lf,%lf,%lf", &T, &M, &p, &main, &sec,
                    &budget);
    }
    auto r2 = run("moment-predict --corpus sym2delta --coeff-limit 12000 --p 2 "
                  "--t-lo 150 --t-hi 150 --t-steps 1 --m-rule fixed:20 --out /tmp/mm_mp2.csv");
    CHECK(r2.exit_code == 0);
    std::ifstream csv2("/tmp/mm_mp2.csv");
    std::getline(csv2, header);
    std::getline(csv2, row);
    double b2;
    std::sscanf(row.c_str(), "%lf,%lf,%lld,%lf,%lf,%lf", &T, &M, &p, &main, &sec, &b2);
    CHECK(b2 < budget);
}

TEST_CASE("config file controls the cache directory") {
    std::string cfg_path = "/tmp/mm_test_config.cfg";
    std::string cache_dir = "/tmp/mm_test_cache_dir";
    std::system(("rm -rf " + cache_dir).c_str());
    {
        std::ofstream cfg(cfg_path);
        cfg << "# test configuration\ncache_dir=" << cache_dir << "\ntolerance=1e-8\n";
    }
    auto r = run("--config " + cfg_path +
                 " kloosterman-table --c-max 4 --a-max 2 --b-max 2 --out /tmp/mm_kt4.csv");
    CHECK(r.exit_code == 0);
    CHECK(std::ifstream(cache_dir).good()); // directory created and used
    auto v = run("--config " + cfg_path + " cache verify --sample 3");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("0 failed") != std::string::npos);
}
