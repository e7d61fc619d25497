#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "blowup/io.hpp"
#include "doctest.h"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "blowup_io_tests";
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("doubles format to their shortest round-trip form") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(200.0) == "200");
    CHECK(format_double(25.0) == "25");
    CHECK(format_double(0.503) == "0.503");
    CHECK(format_double(-1.25e-5) == "-1.25e-05");
    // strtod instead of stod: stod throws on subnormals because glibc flags
    // them with ERANGE even though the conversion is exact.
    for (double v : {M_PI, 1.0 / 3.0, 1e300, 5e-324, -0.1, 123456.789, -2.5e-5})
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("content digests match the published test vectors") {
    CHECK(sha256_hex(nullptr, 0) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const std::string abc = "abc";
    CHECK(sha256_hex(abc.data(), abc.size()) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const std::string million(1000000, 'a');
    CHECK(sha256_hex(million.data(), million.size()) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");

    const fs::path file = scratch_dir() / "digest_input.bin";
    write_text(file, abc);
    CHECK(sha256_file(file) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK_THROWS_AS(sha256_file(scratch_dir() / "does_not_exist.bin"), ConfigError);
}

TEST_CASE("time series survives a write/read round trip bit for bit") {
    TimeSeries series;
    for (int k = 0; k < 20; ++k) {
        series.times.push_back(0.07 * k);
        series.f_origin.push_back(std::cos(0.3 * k) * 1e-3 + 0.5);
    }
    const fs::path file = scratch_dir() / "series.csv";
    write_timeseries_csv(file, series);
    const auto back = read_timeseries_csv(file);
    REQUIRE(back.times.size() == series.times.size());
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        CHECK(back.times[k] == series.times[k]);
        CHECK(back.f_origin[k] == series.f_origin[k]);
    }

    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,f_origin");
}

TEST_CASE("malformed series files are rejected with the offending location") {
    const fs::path dir = scratch_dir();
    const fs::path bad_header = dir / "bad_header.csv";
    write_text(bad_header, "time,value\n0,1\n");
    CHECK_THROWS_AS(read_timeseries_csv(bad_header), ConfigError);

    const fs::path empty = dir / "empty.csv";
    write_text(empty, "");
    CHECK_THROWS_AS(read_timeseries_csv(empty), ConfigError);

    const fs::path no_rows = dir / "no_rows.csv";
    write_text(no_rows, "t,f_origin\n");
    CHECK_THROWS_AS(read_timeseries_csv(no_rows), ConfigError);

    const fs::path no_comma = dir / "no_comma.csv";
    write_text(no_comma, "t,f_origin\n0,1\n17\n");
    try {
        read_timeseries_csv(no_comma);
        FAIL("expected a parse failure");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const fs::path bad_number = dir / "bad_number.csv";
    write_text(bad_number, "t,f_origin\n0,abc\n");
    CHECK_THROWS_AS(read_timeseries_csv(bad_number), ConfigError);
}

TEST_CASE("radial profile round trip reconstructs the uniform grid") {
    const auto grid = GridSpec::make(0.25, 2.0);
    RadialField field = RadialField::uniform(grid, 0.0, 3.5);
    for (int i = 0; i < grid.n_points; ++i)
        field.values[static_cast<std::size_t>(i)] = 1.0 / (1.0 + grid.radius(i));

    const fs::path file = scratch_dir() / "profile.csv";
    write_profile_csv(file, field);
    const auto back = read_profile_csv(file);
    CHECK(back.grid.dr == grid.dr);
    CHECK(back.grid.n_points == grid.n_points);
    CHECK(back.grid.r_max == grid.r_max);
    for (int i = 0; i < grid.n_points; ++i)
        CHECK(back.values[static_cast<std::size_t>(i)] ==
              field.values[static_cast<std::size_t>(i)]);
}

TEST_CASE("profile files must hold a uniform grid starting at the origin") {
    const fs::path dir = scratch_dir();
    const fs::path short_file = dir / "short_profile.csv";
    write_text(short_file, "r,f\n0,1\n0.5,1\n1,1\n");
    CHECK_THROWS_AS(read_profile_csv(short_file), ConfigError);

    const fs::path offset = dir / "offset_profile.csv";
    write_text(offset, "r,f\n0.5,1\n1,1\n1.5,1\n2,1\n");
    CHECK_THROWS_AS(read_profile_csv(offset), ConfigError);

    const fs::path ragged = dir / "ragged_profile.csv";
    write_text(ragged, "r,f\n0,1\n0.5,1\n1.25,1\n2,1\n");
    CHECK_THROWS_AS(read_profile_csv(ragged), ConfigError);
}

TEST_CASE("prediction curve round trip preserves every sample") {
    GeodesicTrajectory curve;
    for (int k = 0; k < 12; ++k) {
        curve.times.push_back(1.7 * k);
        curve.values.push_back(std::exp(-0.2 * k));
    }
    const fs::path file = scratch_dir() / "prediction.csv";
    write_prediction_csv(file, curve);
    const auto back = read_prediction_csv(file);
    REQUIRE(back.times.size() == curve.times.size());
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
        CHECK(back.times[k] == curve.times[k]);
        CHECK(back.values[k] == curve.values[k]);
    }

    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,f");
}

TEST_CASE("key=value files accept comments and whitespace, last key wins") {
    const fs::path file = scratch_dir() / "run.conf";
    write_text(file,
               "# full line comment\n"
               "\n"
               "model = charge2\n"
               "  dt=0.005   \n"
               "rmax = 30 # trailing comment\n"
               "dt = 0.01\r\n"
               "out = runs/a b\n");
    const auto kv = parse_config_file(file);
    CHECK(kv.size() == 4);
    CHECK(kv.at("model") == "charge2");
    CHECK(kv.at("dt") == "0.01");
    CHECK(kv.at("rmax") == "30");
    CHECK(kv.at("out") == "runs/a b");
}

TEST_CASE("key=value files reject malformed lines by number") {
    const fs::path dir = scratch_dir();
    const fs::path bare = dir / "bare.conf";
    write_text(bare, "model = ym\njust-some-words\n");
    try {
        parse_config_file(bare);
        FAIL("expected a parse failure");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    const fs::path anonymous = dir / "anonymous.conf";
    write_text(anonymous, "= 3\n");
    try {
        parse_config_file(anonymous);
        FAIL("expected a parse failure");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":1:") != std::string::npos);
        CHECK(std::string(e.what()).find("empty key") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_file(dir / "missing.conf"), ConfigError);
}
