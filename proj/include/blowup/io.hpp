#ifndef BLOWUP_IO_HPP
#define BLOWUP_IO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "blowup/integrator.hpp"
#include "blowup/predictor.hpp"
#include "blowup/types.hpp"

namespace blowup {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_timeseries_csv(const std::filesystem::path& path);

// Profile rows `r,f` on a uniform grid; the grid is reconstructed (and its
// uniformity checked) when reading back.
void write_profile_csv(const std::filesystem::path& path, const RadialField& field);
RadialField read_profile_csv(const std::filesystem::path& path);

void write_prediction_csv(const std::filesystem::path& path, const GeodesicTrajectory& curve);
GeodesicTrajectory read_prediction_csv(const std::filesystem::path& path);

// Line-oriented `key=value` text with `#` comments and blank lines ignored.
// Keys are identical to the CLI flag names without the leading dashes.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace blowup

#endif
