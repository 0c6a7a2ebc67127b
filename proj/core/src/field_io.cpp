#include "fracham/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace fracham {

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

template <class T>
T get_le(std::istream& is) {
  std::uint64_t bits = 0;
  if (!is.read(reinterpret_cast<char*>(&bits), 8)) {
    throw Error("truncated binary field dump");
  }
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw Error("cannot open " + path.string());
  return is;
}

}  // namespace

void write_field_binary(const Field& u, std::ostream& os) {
  put_le(os, u.grid().length());
  put_le(os, static_cast<std::uint64_t>(u.size()));
  for (double v : u.values()) put_le(os, v);
}

void write_field_binary(const Field& u, const std::filesystem::path& path) {
  auto os = open_out(path, true);
  write_field_binary(u, os);
}

Field read_field_binary(std::istream& is) {
  const double length = get_le<double>(is);
  const auto n = get_le<std::uint64_t>(is);
  if (n > (std::uint64_t{1} << 32)) throw Error("implausible field length in dump");
  auto grid = make_grid(length, static_cast<std::size_t>(n));
  std::vector<double> values(static_cast<std::size_t>(n));
  for (auto& v : values) v = get_le<double>(is);
  return Field(std::move(grid), std::move(values));
}

Field read_field_binary(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  return read_field_binary(is);
}

void write_field_csv(const Field& u, std::ostream& os) {
  os << "x,value\n" << std::setprecision(17);
  for (std::size_t j = 0; j < u.size(); ++j) {
    os << u.grid().x(j) << ',' << u[j] << '\n';
  }
}

void write_field_csv(const Field& u, const std::filesystem::path& path) {
  auto os = open_out(path, false);
  write_field_csv(u, os);
}

Field read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("empty field CSV");
  std::vector<double> xs, values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("malformed field CSV row: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw Error("field CSV needs at least two rows");
  const double length = static_cast<double>(xs.size()) * (xs[1] - xs[0]);
  return Field(make_grid(length, xs.size()), std::move(values));
}

Field read_field_csv(const std::filesystem::path& path) {
  auto is = open_in(path, false);
  return read_field_csv(is);
}

Field read_field(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_field_csv(path);
  return read_field_binary(path);
}

}  // namespace fracham
