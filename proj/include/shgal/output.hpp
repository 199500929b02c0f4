#pragma once

// CSV and JSON writers. Every file is written to a temporary sibling and
// renamed into place. Doubles are printed with 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "shgal/integrator.hpp"

namespace shgal {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kDiagnosticsHeader =
    "time,l2,h10,h20,v,l2n,psi,manifold_residual,dudt_l2";

std::string format_double(double value);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& document);

std::string diagnostics_csv(const std::vector<Diagnostics>& rows);

// Grid values of the recorded states (every stride-th record):
// time,x,u in 1D and time,x,y,u in 2D.
std::string snapshots_csv(const Trajectory& trajectory, const Collocation& grid, int stride);

// Rows of a CSV with the given header; each row already formatted.
std::string table_csv(const std::string& header, const std::vector<std::vector<double>>& rows);

}  // namespace shgal
