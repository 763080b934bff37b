#include "a3w/datagen/feature_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {

MultiDomainDataset parse_feature_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  constexpr std::string_view seps = ", \t";

  if (!next_line()) throw ParseError("missing header 'N k'", line_no + 1);
  const auto header = split_tokens(trim(line), seps);
  const auto count = header.size() == 2 ? parse_int(header[0]) : std::nullopt;
  const auto dim = header.size() == 2 ? parse_int(header[1]) : std::nullopt;
  if (!count || !dim || *count < 1 || *dim < 1) throw ParseError("header must be 'N k' with N, k >= 1", line_no);

  MultiDomainDataset ds;
  ds.feature_dim = static_cast<std::size_t>(*dim);
  for (long long i = 0; i < *count; ++i) {
    if (!next_line()) throw ParseError("expected " + std::to_string(*count) + " rows", line_no + 1);
    const auto tokens = split_tokens(trim(line), seps);
    if (tokens.size() != ds.feature_dim + 3) {
      throw ParseError("expected id, " + std::to_string(ds.feature_dim) + " values, label and domain", line_no);
    }
    Sample s;
    s.x.resize(ds.feature_dim);
    for (std::size_t j = 0; j < ds.feature_dim; ++j) {
      const auto v = parse_double(tokens[j + 1]);
      if (!v || !std::isfinite(*v)) throw ParseError("non-numeric value '" + std::string(tokens[j + 1]) + "'", line_no);
      s.x[j] = *v;
    }
    const auto label = parse_int(tokens[ds.feature_dim + 1]);
    const auto domain = parse_int(tokens[ds.feature_dim + 2]);
    if (!label || *label < 0) throw ParseError("label must be a non-negative integer", line_no);
    if (!domain || *domain < 0) throw ParseError("domain must be a non-negative integer", line_no);
    s.true_label = s.observed_label = static_cast<std::size_t>(*label);
    s.domain = static_cast<std::size_t>(*domain);
    ds.num_classes = std::max(ds.num_classes, s.true_label + 1);
    ds.num_domains = std::max(ds.num_domains, s.domain + 1);
    ds.samples.push_back(std::move(s));
  }
  if (next_line()) throw ParseError("unexpected content after " + std::to_string(*count) + " rows", line_no);

  std::stable_sort(ds.samples.begin(), ds.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.domain < b.domain; });
  ds.validate();
  return ds;
}

MultiDomainDataset read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature file: " + path.string());
  return parse_feature_text(in);
}

void write_feature_text(const MultiDomainDataset& ds, std::ostream& out) {
  out << ds.samples.size() << ',' << ds.feature_dim << '\n';
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    out << i;
    for (double v : s.x) out << ',' << format_roundtrip(v);
    out << ',' << s.observed_label << ',' << s.domain << '\n';
  }
}

void write_feature_file(const MultiDomainDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write feature file: " + path.string());
  write_feature_text(ds, out);
}

}  // namespace a3w
