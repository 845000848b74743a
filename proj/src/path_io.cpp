#include "rwlab/path_io.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rwlab/error.hpp"
#include "rwlab/schema.hpp"

namespace rwlab {

void write_paths_csv(std::ostream& out, const std::vector<LatticePath>& paths) {
  out << "# schema=" << kSchemaVersion << '\n' << "replica,step,position\n";
  for (std::size_t r = 0; r < paths.size(); ++r)
    for (std::size_t k = 0; k < paths[r].positions.size(); ++k) out << r << ',' << k << ',' << paths[r].positions[k] << '\n';
}

std::vector<LatticePath> read_paths_csv(std::istream& in) {
  std::vector<LatticePath> paths;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "replica,step,position") throw ConfigError("path csv: missing 'replica,step,position' header");
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::size_t replica = 0, step = 0;
    long long position = 0;
    char c1 = 0, c2 = 0;
    if (!(fields >> replica >> c1 >> step >> c2 >> position) || c1 != ',' || c2 != ',')
      throw ConfigError("path csv line " + std::to_string(line_no) + ": malformed row");
    if (replica == paths.size()) paths.emplace_back();
    if (replica + 1 != paths.size() || step != paths.back().positions.size())
      throw ConfigError("path csv line " + std::to_string(line_no) + ": rows out of order");
    paths.back().positions.push_back(position);
  }
  return paths;
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(bytes.data(), 8);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (in.gcount() == 0) return false;
  if (in.gcount() != 8) throw ConfigError("path frame: truncated 8-byte word");
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return true;
}

}  // namespace

void write_path_frame(std::ostream& out, const LatticePath& path) {
  put_u64(out, path.positions.size());
  for (auto p : path.positions) put_u64(out, static_cast<std::uint64_t>(p));
}

std::optional<LatticePath> read_path_frame(std::istream& in) {
  std::uint64_t count = 0;
  if (!get_u64(in, count)) return std::nullopt;
  LatticePath path;
  path.positions.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t raw = 0;
    if (!get_u64(in, raw)) throw ConfigError("path frame: stream ended inside a frame");
    path.positions.push_back(static_cast<std::int64_t>(raw));
  }
  return path;
}

}  // namespace rwlab
