#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gridsearch/grid.hpp"

namespace gridsearch {

/// Reads the line-based `gridsearch-grid v1` format and validates the result.
PartialGrid read_grid(std::istream& in);
void write_grid(std::ostream& out, const PartialGrid& g);

PartialGrid load_grid(const std::filesystem::path& path);
void save_grid(const std::filesystem::path& path, const PartialGrid& g);

namespace detail {

/// Splits a record line into whitespace-separated tokens; returns empty for blank/comment lines.
std::vector<std::string> tokenize(std::string_view line);
int parse_int(const std::string& token, std::size_t line_no);
double parse_double(const std::string& token, std::size_t line_no);
[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what);

}  // namespace detail
}  // namespace gridsearch
