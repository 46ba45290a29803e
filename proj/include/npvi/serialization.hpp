#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "npvi/mixture.hpp"

namespace npvi {

/// Shortest text that carries 17 significant digits ("%.17g").
std::string format_double(double value);

/// {"means": [[...], ...], "sigmas": [...]} with 17-digit floats.
std::string mixture_to_json(const MixtureApproximation& q);
MixtureApproximation mixture_from_json(const std::string& text);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// One row per sample, columns theta1..thetaD.
std::string samples_to_csv(const std::vector<Vector>& samples);

}  // namespace npvi
