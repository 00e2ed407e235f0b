#pragma once

// Plain CSV reading and writing for datasets, paired performance samples and reports.

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cvlab/analysis.hpp"
#include "cvlab/core.hpp"

namespace cvlab {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Splits one CSV line on commas and trims surrounding blanks. No quoting.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a finite double; throws DomainError naming `what` otherwise.
double parse_double(std::string_view text, std::string_view what);

/// Dataset with header `class,f1,...,fp` and one row per observation; class is 1 or 2.
/// Rows keep their file order within each class. Throws DomainError naming the line.
StratifiedDataset parse_dataset_csv(std::istream& in);
StratifiedDataset read_dataset_csv(const std::filesystem::path& path);
std::string dataset_to_csv(const StratifiedDataset& data);

/// Two columns with header `s,s_hat`.
PairedPerformanceSample parse_paired_csv(std::istream& in);
PairedPerformanceSample read_paired_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace cvlab
