#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rwlab/steplaw.hpp"

namespace rwlab {

// CSV stream: a "# schema=<version>" comment line, a "replica,step,position"
// header, then one row per position of every replica.
void write_paths_csv(std::ostream& out, const std::vector<LatticePath>& paths);
std::vector<LatticePath> read_paths_csv(std::istream& in);

// Binary frame: little-endian uint64 count of positions, then `count`
// little-endian int64 positions. Frames are concatenated for several paths.
void write_path_frame(std::ostream& out, const LatticePath& path);
// std::nullopt on a clean end of stream; throws ConfigError on a truncated frame.
std::optional<LatticePath> read_path_frame(std::istream& in);

}  // namespace rwlab
