#include "tomokernel/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tomokernel/errors.hpp"

namespace tomokernel {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string(what) + ": malformed JSON at line " + std::to_string(line) + ": " + e.what(), line);
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number", 0);
  return v.get<double>();
}

double parse_double(std::string_view s, int line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("table: line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

const std::string& require_meta(const Table& t, const std::string& key) {
  const std::string* v = t.find_meta(key);
  if (!v) throw ParseError("table: missing header key '" + key + "'", 0);
  return *v;
}

double meta_double(const Table& t, const std::string& key) { return parse_double(require_meta(t, key), 0); }

int meta_int(const Table& t, const std::string& key) {
  const double v = meta_double(t, key);
  if (v != static_cast<int>(v)) throw ParseError("table: header key '" + key + "' must be an integer", 0);
  return static_cast<int>(v);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

FockOperator parse_state_json(const std::string& text) {
  const json doc = parse_json(text, "state");
  if (!doc.is_object()) throw ParseError("state: top level must be an object", 1);
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw ParseError("state: 'dim' must be an integer", 0);
  const int dim = doc["dim"].get<int>();
  if (dim < 1) throw ParseError("state: 'dim' must be positive", 0);
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) throw ParseError("state: 'matrix' must be an array", 0);
  const json& rows = doc["matrix"];
  if (static_cast<int>(rows.size()) != dim) {
    throw ParseError("state: 'matrix' has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(dim), 0);
  }
  Eigen::MatrixXcd mat(dim, dim);
  for (int m = 0; m < dim; ++m) {
    const json& row = rows[m];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError("state: row " + std::to_string(m) + " must hold " + std::to_string(dim) + " entries", 0);
    }
    for (int n = 0; n < dim; ++n) {
      const json& e = row[n];
      const std::string where = "state: entry (" + std::to_string(m) + "," + std::to_string(n) + ")";
      if (e.is_array()) {
        if (e.size() != 2) throw ParseError(where + " must be [re, im]", 0);
        mat(m, n) = cplx(as_number(e[0], where), as_number(e[1], where));
      } else {
        mat(m, n) = cplx(as_number(e, where), 0.0);
      }
    }
  }
  return FockOperator(std::move(mat));
}

FockOperator load_state(const std::filesystem::path& path) { return parse_state_json(read_text_file(path)); }

std::string state_to_json(const FockOperator& T) {
  json rows = json::array();
  for (int m = 0; m < T.dim(); ++m) {
    json row = json::array();
    for (int n = 0; n < T.dim(); ++n) row.push_back(json::array({T(m, n).real(), T(m, n).imag()}));
    rows.push_back(std::move(row));
  }
  json doc;
  doc["dim"] = T.dim();
  doc["matrix"] = std::move(rows);
  return doc.dump();
}

std::string state_hash(const FockOperator& T) {
  const std::string canon = state_to_json(T);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

const std::string* Table::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string format_table(const Table& table, Format format) {
  if (format == Format::json) {
    json meta = json::object();
    for (const auto& [k, v] : table.meta) meta[k] = v;
    json doc;
    doc["meta"] = std::move(meta);
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    return doc.dump(1) + "\n";
  }
  std::string out;
  for (const auto& [k, v] : table.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

Table parse_table(const std::string& text) {
  Table t;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json doc = parse_json(text, "table");
    if (!doc.contains("columns") || !doc.contains("rows")) throw ParseError("table: JSON needs 'columns' and 'rows'", 1);
    if (doc.contains("meta")) {
      for (const auto& [k, v] : doc["meta"].items()) t.meta.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    t.columns = doc["columns"].get<std::vector<std::string>>();
    for (const auto& row : doc["rows"]) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(as_number(v, "table row"));
      if (r.size() != t.columns.size()) throw ParseError("table: row width differs from column count", 0);
      t.rows.push_back(std::move(r));
    }
    return t;
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      t.meta.emplace_back(key, line.substr(eq + 1));
      continue;
    }
    if (!have_columns) {
      for (auto c : split(line, ',')) t.columns.emplace_back(c);
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    for (auto c : split(line, ',')) row.push_back(parse_double(c, lineno));
    if (row.size() != t.columns.size()) {
      throw ParseError("table: line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                           " fields, expected " + std::to_string(t.columns.size()),
                       lineno);
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_columns) throw ParseError("table: no column line", lineno);
  return t;
}

Table field_table(const PhaseField& field, std::vector<std::pair<std::string, std::string>> meta) {
  field.validate();
  const auto& g = field.grid;
  Table t;
  t.meta = {{"kind", "phase_field"},
            {"q_min", format_double(g.q_min)},
            {"q_max", format_double(g.q_max)},
            {"nq", std::to_string(g.nq)},
            {"p_min", format_double(g.p_min)},
            {"p_max", format_double(g.p_max)},
            {"np", std::to_string(g.np)}};
  for (auto& kv : meta) t.meta.push_back(std::move(kv));
  t.columns = {"q", "p", "re", "im"};
  t.rows.reserve(field.values.size());
  for (int i = 0; i < g.nq; ++i) {
    for (int j = 0; j < g.np; ++j) t.rows.push_back({g.q(i), g.p(j), field.at(i, j).real(), field.at(i, j).imag()});
  }
  return t;
}

PhaseField table_to_field(const Table& t) {
  GridSpec g{meta_double(t, "q_min"), meta_double(t, "q_max"), meta_int(t, "nq"),
             meta_double(t, "p_min"), meta_double(t, "p_max"), meta_int(t, "np")};
  PhaseField f = PhaseField::zeros(g);
  if (t.rows.size() != f.values.size() || t.columns.size() != 4) {
    throw ParseError("table: phase field needs nq*np rows of q,p,re,im", 0);
  }
  for (std::size_t k = 0; k < t.rows.size(); ++k) f.values[k] = cplx(t.rows[k][2], t.rows[k][3]);
  return f;
}

Table sinogram_table(const Sinogram& sino, std::vector<std::pair<std::string, std::string>> meta) {
  sino.validate();
  const auto& s = sino.spec;
  Table t;
  t.meta = {{"kind", "sinogram"},
            {"n_theta", std::to_string(s.n_theta)},
            {"nr", std::to_string(s.nr)},
            {"r_max", format_double(s.r_max)}};
  for (auto& kv : meta) t.meta.push_back(std::move(kv));
  t.columns = {"theta", "r", "re", "im"};
  t.rows.reserve(sino.values.size());
  for (int i = 0; i < s.n_theta; ++i) {
    for (int j = 0; j < s.nr; ++j) t.rows.push_back({s.theta(i), s.r(j), sino.at(i, j).real(), sino.at(i, j).imag()});
  }
  return t;
}

Sinogram table_to_sinogram(const Table& t) {
  SinogramSpec s{meta_int(t, "n_theta"), meta_int(t, "nr"), meta_double(t, "r_max")};
  Sinogram out = Sinogram::zeros(s);
  if (t.rows.size() != out.values.size() || t.columns.size() != 4) {
    throw ParseError("table: sinogram needs n_theta*nr rows of theta,r,re,im", 0);
  }
  for (std::size_t k = 0; k < t.rows.size(); ++k) out.values[k] = cplx(t.rows[k][2], t.rows[k][3]);
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::invalid_argument("write to '" + path.string() + "' failed");
}

}  // namespace tomokernel
