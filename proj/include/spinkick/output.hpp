#pragma once

#include <filesystem>
#include <string>

#include "spinkick/analysis.hpp"
#include "spinkick/correlator.hpp"

namespace spinkick {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal string that round-trips to the same double; locale
/// independent. NaN prints as "nan".
std::string format_double(double value);

void write_correlations_csv(const std::filesystem::path& path, const CorrelationSeries& series);
void write_exponents_csv(const std::filesystem::path& path, const ExponentSeries& es);
void write_profile_csv(const std::filesystem::path& path, const SpatialProfile& profile);
void write_scattering_csv(const std::filesystem::path& path, const ScatteringSeries& series);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spinkick
