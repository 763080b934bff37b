#include "a3w/anchors/anchor_file.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {

LoadedAnchors parse_anchor_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("missing header 'C m'", line_no + 1);
  const auto header = split_tokens(trim(line));
  if (header.size() != 2) throw ParseError("header must be two integers 'C m'", line_no);
  const auto count = parse_int(header[0]);
  const auto dim = parse_int(header[1]);
  if (!count || !dim || *count < 2 || *dim < 1) {
    throw ParseError("header needs C >= 2 and m >= 1", line_no);
  }

  std::vector<std::string> names;
  std::vector<std::string> warnings;
  std::set<std::string> seen;
  Matrix rows(static_cast<std::size_t>(*count), static_cast<std::size_t>(*dim));
  for (std::size_t c = 0; c < rows.rows(); ++c) {
    if (!next_line()) {
      throw ParseError("expected " + std::to_string(*count) + " anchor rows, found " + std::to_string(c),
                       line_no + 1);
    }
    const auto tokens = split_tokens(trim(line));
    if (tokens.size() != rows.cols() + 1) {
      throw ParseError("expected class name and " + std::to_string(rows.cols()) + " values, found " +
                           std::to_string(tokens.size() == 0 ? 0 : tokens.size() - 1) + " values",
                       line_no);
    }
    std::string name(tokens[0]);
    if (!seen.insert(name).second) throw ParseError("duplicate class name '" + name + "'", line_no);
    auto row = rows.row(c);
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      const auto v = parse_double(tokens[j + 1]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("non-numeric value '" + std::string(tokens[j + 1]) + "'", line_no);
      }
      row[j] = *v;
    }
    const double n = norm(row);
    if (!(n > 0.0)) throw ParseError("anchor row for '" + name + "' has zero norm", line_no);
    if (std::abs(n - 1.0) > 1e-6) {
      warnings.push_back("line " + std::to_string(line_no) + ": anchor '" + name + "' had norm " +
                         format_roundtrip(n) + "; re-normalized");
    }
    // Rows within tolerance are still rescaled so the set invariant holds exactly.
    for (auto& x : row) x /= n;
    names.push_back(std::move(name));
  }
  if (next_line()) throw ParseError("unexpected content after " + std::to_string(*count) + " rows", line_no);

  try {
    return LoadedAnchors{AnchorSet(std::move(names), std::move(rows)), std::move(warnings)};
  } catch (const InputError& e) {
    throw ParseError(e.what(), line_no);
  }
}

LoadedAnchors read_anchor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open anchor file: " + path.string());
  return parse_anchor_text(in);
}

void write_anchor_text(const AnchorSet& set, std::ostream& out) {
  out << set.num_classes() << ' ' << set.dim() << '\n';
  for (std::size_t c = 0; c < set.num_classes(); ++c) {
    out << set.class_names()[c];
    for (double v : set.anchor(c)) out << ' ' << format_roundtrip(v);
    out << '\n';
  }
}

void write_anchor_file(const AnchorSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write anchor file: " + path.string());
  write_anchor_text(set, out);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace a3w
