#include "spdsrc/bundle.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

using Eigen::Index;
using Eigen::MatrixXd;

namespace spdsrc {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

long parse_long(std::string_view token, const std::string& context) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
  if (ec != std::errc{} || ptr != token.end())
    throw ParseError(context + ": expected an integer, got '" + std::string(token) + "'");
  return value;
}

double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
  if (ec != std::errc{} || ptr != token.end())
    throw ParseError(context + ": expected a number, got '" + std::string(token) + "'");
  return value;
}

void check_labels(const std::vector<int>& labels) {
  std::vector<int> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t k = 0; k < distinct.size(); ++k)
    if (distinct[k] != static_cast<int>(k) + 1)
      throw ValidationError("bundle labels must be exactly 1..n with no empty class");
}

}  // namespace

SpdBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  const auto header = split_tokens(line);
  if (header.size() != 4 || header[0] != "SPDB")
    throw ParseError(path.string() + ": malformed header, expected 'SPDB 1 <d> <N>'");
  if (header[1] != "1")
    throw ParseError(path.string() + ": unsupported bundle version '" +
                     std::string(header[1]) + "'");
  const long d = parse_long(header[2], "header");
  const long n = parse_long(header[3], "header");
  if (d < 1 || n < 1) throw ParseError(path.string() + ": header counts must be positive");
  const std::size_t values_per_record = static_cast<std::size_t>(d) * (d + 1) / 2;

  SpdBundle bundle;
  bundle.dim = static_cast<Index>(d);
  bundle.labels.reserve(static_cast<std::size_t>(n));
  bundle.matrices.reserve(static_cast<std::size_t>(n));

  long record = 0;
  while (record < n) {
    if (!std::getline(in, line))
      throw ParseError(path.string() + ": record " + std::to_string(record + 1) +
                       ": unexpected end of file");
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;  // blank line between records
    const std::string context =
        path.string() + ": record " + std::to_string(record + 1);
    if (tokens.size() != values_per_record + 1)
      throw ParseError(context + ": expected " + std::to_string(values_per_record + 1) +
                       " fields, got " + std::to_string(tokens.size()));
    const long label = parse_long(tokens[0], context);
    if (label < 1) throw ParseError(context + ": label must be a positive integer");

    MatrixXd m(d, d);
    std::size_t t = 1;
    for (long i = 0; i < d; ++i)
      for (long j = i; j < d; ++j) {
        const double v = parse_double(tokens[t++], context);
        m(i, j) = v;
        m(j, i) = v;
      }
    try {
      bundle.matrices.emplace_back(std::move(m));
    } catch (const Error& e) {
      throw ValidationError(context + ": not a valid SPD matrix (" + e.what() + ")");
    }
    bundle.labels.push_back(static_cast<int>(label));
    ++record;
  }

  while (std::getline(in, line))
    if (!split_tokens(line).empty())
      throw ParseError(path.string() + ": trailing data after " + std::to_string(n) +
                       " records");

  check_labels(bundle.labels);
  return bundle;
}

void save_bundle(const SpdBundle& bundle, const std::filesystem::path& path) {
  if (bundle.size() == 0) throw ValidationError("save_bundle: empty bundle");
  if (static_cast<Index>(bundle.matrices.size()) != bundle.size())
    throw ValidationError("save_bundle: labels and matrices differ in length");
  check_labels(bundle.labels);

  std::ostringstream out;
  out << "SPDB 1 " << bundle.dim << " " << bundle.size() << "\n";
  char buf[40];
  for (Index r = 0; r < bundle.size(); ++r) {
    const MatrixXd& m = bundle.matrices[static_cast<std::size_t>(r)].m();
    if (m.rows() != bundle.dim)
      throw ValidationError("save_bundle: matrix dimension differs from header");
    out << bundle.labels[static_cast<std::size_t>(r)];
    for (Index i = 0; i < bundle.dim; ++i)
      for (Index j = i; j < bundle.dim; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
        out << ' ' << buf;
      }
    out << '\n';
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(path.string() + ": cannot open file for writing");
  file << out.str();
  if (!file) throw Error(path.string() + ": write failed");
}

LabeledGallery to_gallery(const SpdBundle& bundle) {
  return LabeledGallery(bundle.matrices, bundle.labels);
}

}  // namespace spdsrc
