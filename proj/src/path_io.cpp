#include "nnlsm/path_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nnlsm {

namespace {

void put_double(std::ostream& out, double value) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_double(std::istream& in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("path dump: truncated file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

std::size_t get_count(std::istream& in) {
    const double v = get_double(in);
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw std::runtime_error("path dump: malformed header");
    return static_cast<std::size_t>(v);
}

}  // namespace

void write_path_dump(const std::filesystem::path& file, const PathSet& paths) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("path dump: cannot open " + file.string());
    put_double(out, static_cast<double>(paths.paths()));
    put_double(out, static_cast<double>(paths.dates()));
    put_double(out, static_cast<double>(paths.dim()));
    for (double v : paths.raw_states()) put_double(out, v);
    for (double v : paths.raw_payoffs()) put_double(out, v);
    if (!out) throw std::runtime_error("path dump: write failed for " + file.string());
}

PathSet read_path_dump(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("path dump: cannot open " + file.string());
    const std::size_t paths = get_count(in);
    const std::size_t dates = get_count(in);
    const std::size_t dim = get_count(in);
    PathSet out(paths, dates, dim);
    for (double& v : out.raw_states()) v = get_double(in);
    for (double& v : out.raw_payoffs()) v = get_double(in);
    return out;
}

}  // namespace nnlsm
