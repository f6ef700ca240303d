#include "gridsearch/grid_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace gridsearch {
namespace detail {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& token, std::size_t line_no) {
  int value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) parse_fail(line_no, "expected integer, got '" + token + "'");
  return value;
}

double parse_double(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) parse_fail(line_no, "expected number, got '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    parse_fail(line_no, "expected number, got '" + token + "'");
  }
}

}  // namespace detail

PartialGrid read_grid(std::istream& in) {
  using detail::parse_fail;
  using detail::parse_int;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<Coord> nodes;
  std::vector<std::pair<Coord, Coord>> edges;
  std::optional<Coord> homebase;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gridsearch-grid" || tok[1] != "v1") {
        parse_fail(line_no, "missing 'gridsearch-grid v1' header");
      }
      header = true;
      continue;
    }
    if (tok[0] == "node" && tok.size() == 3) {
      nodes.push_back({parse_int(tok[1], line_no), parse_int(tok[2], line_no)});
    } else if (tok[0] == "edge" && tok.size() == 5) {
      edges.push_back({{parse_int(tok[1], line_no), parse_int(tok[2], line_no)},
                       {parse_int(tok[3], line_no), parse_int(tok[4], line_no)}});
    } else if (tok[0] == "homebase" && tok.size() == 3) {
      if (homebase) throw Error(ErrorCode::DuplicateRecord, "homebase given more than once");
      homebase = Coord{parse_int(tok[1], line_no), parse_int(tok[2], line_no)};
    } else {
      parse_fail(line_no, "unrecognised record '" + tok[0] + "'");
    }
  }
  if (!header) parse_fail(line_no, "empty grid file");
  if (!homebase) throw Error(ErrorCode::HomebaseMissing, "no homebase record");
  return validate_grid(std::move(nodes), std::move(edges), *homebase);
}

void write_grid(std::ostream& out, const PartialGrid& g) {
  out << "gridsearch-grid v1\n";
  out << "homebase 0 0\n";
  for (Coord c : g.nodes()) out << "node " << c.x << ' ' << c.y << '\n';
  for (const GridEdge& e : g.edges()) {
    out << "edge " << e.a.x << ' ' << e.a.y << ' ' << e.b.x << ' ' << e.b.y << '\n';
  }
}

PartialGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_grid(in);
}

void save_grid(const std::filesystem::path& path, const PartialGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  write_grid(out, g);
}

}  // namespace gridsearch
