#pragma once

#include <filesystem>

#include "nnlsm/path_set.hpp"

namespace nnlsm {

// Binary path dump: every value is a little-endian IEEE-754 double. Header is
// {M, N+1, dim}, followed by the state tensor in [path][date][component] order,
// then the discounted payoff tensor in [path][date] order.
void write_path_dump(const std::filesystem::path& file, const PathSet& paths);
PathSet read_path_dump(const std::filesystem::path& file);

}  // namespace nnlsm
