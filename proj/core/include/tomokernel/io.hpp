#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tomokernel/quantum_states.hpp"
#include "tomokernel/transforms.hpp"

namespace tomokernel {

// {"dim": N, "matrix": [[[re, im], ...], ...]}, row-major. ParseError carries
// the 1-based line of the offending input.
FockOperator parse_state_json(const std::string& text);
FockOperator load_state(const std::filesystem::path& path);
std::string state_to_json(const FockOperator& T);

// FNV-1a over the canonical JSON form, 16 hex digits.
std::string state_hash(const FockOperator& T);

enum class Format { csv, json };
Format parse_format(const std::string& name);

// Self-describing numeric table. CSV: "# key=value" header lines, a column
// line, then rows. JSON: {"meta": {...}, "columns": [...], "rows": [[...]]}.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  const std::string* find_meta(const std::string& key) const;
};

std::string format_table(const Table& table, Format format);
Table parse_table(const std::string& text);

// Rows q,p,re,im; meta records the grid.
Table field_table(const PhaseField& field, std::vector<std::pair<std::string, std::string>> meta = {});
PhaseField table_to_field(const Table& table);

// Rows theta,r,re,im; meta records the sinogram lattice.
Table sinogram_table(const Sinogram& sino, std::vector<std::pair<std::string, std::string>> meta = {});
Sinogram table_to_sinogram(const Table& table);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Shortest representation that parses back to the same double.
std::string format_double(double x);

}  // namespace tomokernel
