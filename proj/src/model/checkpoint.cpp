#include "a3w/model/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {
namespace {

constexpr std::string_view kMagic = "a3w-checkpoint";
constexpr int kVersion = 1;

void write_tensors(const ModelParams& params, std::ostream& out) {
  for_each_tensor(params, [&](const std::string& name, Partition, std::span<const double> t) {
    const bool is_bias = name.ends_with(".bias");
    std::size_t rows = 1, cols = t.size();
    if (!is_bias) {
      // Recover the matrix shape from the layer the weight belongs to.
      const std::string layer = name.substr(0, name.size() - std::string_view(".weight").size());
      const Linear* l = nullptr;
      if (layer == "hidden") l = &params.hidden;
      else if (layer == "feature") l = &params.feature;
      else if (layer == "classifier") l = &params.classifier;
      else l = &params.projectors.at(std::stoul(layer.substr(layer.find('.') + 1)));
      rows = l->out_dim();
      cols = l->in_dim();
    }
    out << "tensor " << name << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << format_roundtrip(t[i]);
    out << '\n';
  });
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> tokens() {
    for (;;) {
      if (!std::getline(in_, line_)) throw ParseError("unexpected end of checkpoint", line_no_ + 1);
      ++line_no_;
      if (!trim(line_).empty()) return split_tokens(trim(line_));
    }
  }

  std::size_t line() const { return line_no_; }

  std::size_t to_size(std::string_view t) {
    const auto v = parse_int(t);
    if (!v || *v < 0) throw ParseError("expected a non-negative integer, got '" + std::string(t) + "'", line_no_);
    return static_cast<std::size_t>(*v);
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

void read_tensors(Reader& r, ModelParams& params) {
  for_each_tensor(params, [&](const std::string& name, Partition, std::span<double> t) {
    const auto head = r.tokens();
    if (head.size() != 4 || head[0] != "tensor" || head[1] != name) {
      throw ParseError("expected 'tensor " + name + " <rows> <cols>'", r.line());
    }
    if (r.to_size(head[2]) * r.to_size(head[3]) != t.size()) {
      throw ParseError("tensor " + name + " has the wrong shape", r.line());
    }
    const auto values = r.tokens();
    if (values.size() != t.size()) throw ParseError("tensor " + name + " has the wrong value count", r.line());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto v = parse_double(values[i]);
      if (!v) throw ParseError("non-numeric value in " + name, r.line());
      t[i] = *v;
    }
  });
}

ModelParams shaped(const ModelDims& d) {
  auto lin = [](std::size_t in, std::size_t out) { return Linear{Matrix(out, in), std::vector<double>(out, 0.0)}; };
  ModelParams p;
  p.hidden = lin(d.input, d.hidden);
  p.feature = lin(d.hidden, d.feature);
  p.classifier = lin(d.feature, d.classes);
  for (std::size_t c = 0; c < d.classes; ++c) p.projectors.push_back(lin(d.feature, d.anchor_dim));
  return p;
}

}  // namespace

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  const ModelDims d = ckpt.params.dims();
  out << kMagic << ' ' << kVersion << '\n';
  out << "dims " << d.input << ' ' << d.hidden << ' ' << d.feature << ' ' << d.classes << ' ' << d.anchor_dim << '\n';
  out << "section params\n";
  write_tensors(ckpt.params, out);
  if (ckpt.ema) {
    out << "section ema " << ckpt.ema->count << '\n';
    write_tensors(ckpt.ema->shadow, out);
  }
}

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  write_checkpoint(ckpt, out);
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint read_checkpoint(std::istream& in) {
  Reader r(in);
  const auto magic = r.tokens();
  if (magic.size() != 2 || magic[0] != kMagic) throw ParseError("not an a3w checkpoint", r.line());
  if (r.to_size(magic[1]) != kVersion) throw ParseError("unsupported checkpoint version", r.line());
  const auto dims = r.tokens();
  if (dims.size() != 6 || dims[0] != "dims") throw ParseError("expected a dims line", r.line());
  const ModelDims d{r.to_size(dims[1]), r.to_size(dims[2]), r.to_size(dims[3]), r.to_size(dims[4]),
                    r.to_size(dims[5])};

  Checkpoint ckpt;
  const auto section = r.tokens();
  if (section.size() != 2 || section[0] != "section" || section[1] != "params") {
    throw ParseError("expected 'section params'", r.line());
  }
  ckpt.params = shaped(d);
  read_tensors(r, ckpt.params);

  std::string rest;
  while (std::getline(in, rest)) {
    if (trim(rest).empty()) continue;
    const auto t = split_tokens(trim(rest));
    if (t.size() != 3 || t[0] != "section" || t[1] != "ema") throw ParseError("expected 'section ema <count>'", r.line() + 1);
    const auto count = parse_int(t[2]);
    if (!count || *count < 1) throw ParseError("EMA count must be >= 1", r.line() + 1);
    EmaState ema{shaped(d), static_cast<std::size_t>(*count)};
    read_tensors(r, ema.shadow);
    ckpt.ema = std::move(ema);
    break;
  }
  ckpt.params.validate();
  return ckpt;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  return read_checkpoint(in);
}

}  // namespace a3w
