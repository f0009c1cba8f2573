#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "icd/scans.hpp"

namespace icd {

// Shortest round-trip decimal form (std::to_chars); parsing it back yields
// the identical double.
std::string format_double(double v);
double parse_double(const std::string& cell);  // throws IoError on junk

// ScanResult CSV: '# key=value' metadata preamble (sorted by key), a header
// row, then data rows.
void write_scan_csv(const ScanResult& scan, std::ostream& out);
ScanResult read_scan_csv(std::istream& in);
void write_scan_csv_file(const ScanResult& scan, const std::filesystem::path& path);
ScanResult read_scan_csv_file(const std::filesystem::path& path);

// JSON alternative with the same fields.
std::string scan_to_json(const ScanResult& scan);
void write_scan_json_file(const ScanResult& scan, const std::filesystem::path& path);

// Width dataset CSV: header 'rho_AA,width_eV', distances in angstrom.
WidthDataset read_width_csv(std::istream& in, const std::string& label = "");
WidthDataset read_width_csv_file(const std::filesystem::path& path);

// Write-then-rename so a partial file never lands at the target path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace icd
