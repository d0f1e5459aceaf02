#include "vsearch/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "vsearch/errors.hpp"

namespace vsearch {

namespace fs = std::filesystem;

namespace {

double parse_double(std::string_view field, const fs::path& path, long line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw LoadError(path.string(), line, "cannot parse '" + std::string(field) + "' as a number");
  return v;
}

} // namespace

GridMatrixd read_csv_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::vector<double> values;
  long cols = -1, rows = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    long n = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_double(rest.substr(0, comma), path, lineno));
      ++n;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols < 0) cols = n;
    else if (n != cols)
      throw LoadError(path.string(), lineno, "row has " + std::to_string(n) + " fields, expected " + std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw LoadError(path.string(), 0, "empty matrix");
  return Eigen::Map<GridMatrixd>(values.data(), rows, cols);
}

void write_csv_matrix(const fs::path& path, const GridMatrixd& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << m(r, c);
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

namespace {

/// Reads the next whitespace-separated header token, skipping comments.
std::string header_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return tok;
  }
  return {};
}

int header_int(std::istream& in, const fs::path& path) {
  const std::string tok = header_token(in);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v <= 0)
    throw LoadError(path.string(), 0, "malformed Netpbm header");
  return v;
}

} // namespace

GridMatrixd read_netpbm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  const std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5" && magic != "P3" && magic != "P6")
    throw LoadError(path.string(), 0, "unsupported image format (expected PGM/PPM)");
  const int w = header_int(in, path), h = header_int(in, path), maxval = header_int(in, path);
  if (maxval > 255) throw LoadError(path.string(), 0, "only 8-bit images are supported");
  const bool color = magic == "P3" || magic == "P6";
  const bool binary = magic == "P5" || magic == "P6";
  const int channels = color ? 3 : 1;
  std::vector<double> raw(std::size_t(w) * std::size_t(h) * std::size_t(channels));
  if (binary) {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> bytes(raw.size());
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
    if (in.gcount() != std::streamsize(bytes.size())) throw LoadError(path.string(), 0, "truncated pixel data");
    std::transform(bytes.begin(), bytes.end(), raw.begin(), [](unsigned char b) { return double(b); });
  } else {
    for (auto& v : raw)
      if (!(in >> v)) throw LoadError(path.string(), 0, "truncated pixel data");
  }
  const double scale = 255.0 / double(maxval);
  GridMatrixd img(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t o = (std::size_t(y) * std::size_t(w) + std::size_t(x)) * std::size_t(channels);
      img(y, x) = scale * (color ? 0.299 * raw[o] + 0.587 * raw[o + 1] + 0.114 * raw[o + 2] : raw[o]);
    }
  return img;
}

void write_pgm(const fs::path& path, const GridMatrixd& m) {
  std::string out = "P5\n" + std::to_string(m.cols()) + " " + std::to_string(m.rows()) + "\n255\n";
  out.reserve(out.size() + std::size_t(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(char(static_cast<unsigned char>(std::clamp(std::lround(m(r, c)), 0L, 255L))));
  write_file_atomic(path, out);
}

GridMatrixd read_map(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (ext == ".csv" || ext == ".txt") return read_csv_matrix(path);
  return read_netpbm(path);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError(tmp.string(), 0, "cannot open for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw LoadError(tmp.string(), 0, "write failed");
  }
  fs::rename(tmp, path);
}

} // namespace vsearch
