// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Internal CSV helpers shared by the dataset, pair, score, and report
// writers.  Not installed.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace morphguard::detail {

/// Splits one CSV line on commas.  Fields in these formats never contain
/// commas or quotes, so no quoting rules are needed.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a finite double.  Throws ParseError naming file and line.
double parse_csv_double(const std::string& field,
                        const std::filesystem::path& file,
                        std::size_t line_no);

/// Parses a nonnegative integer.  Throws ParseError naming file and line.
long parse_csv_long(const std::string& field,
                    const std::filesystem::path& file, std::size_t line_no);

[[noreturn]] void fail_parse(const std::filesystem::path& file,
                             std::size_t line_no, const std::string& what);

/// Formats a double with enough digits to round-trip exactly (%.17g).
std::string format_double(double v);

/// Writes via a temporary file in the same directory, then renames over the
/// destination so readers never observe a partial file.  Throws IoError.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

/// Reads all lines of a text file, tolerating a trailing newline and CRLF
/// endings.  Throws IoError if the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace morphguard::detail
