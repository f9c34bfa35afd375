#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rmt {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double x);

/// Writes a header row followed by numeric rows. Throws std::runtime_error
/// when the file cannot be written or a row has the wrong width.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace rmt
