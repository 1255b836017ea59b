#include "fracspec/tail_cache.hpp"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fracspec::tail_cache {

namespace {

constexpr char kMagic[4] = {'F', 'T', 'L', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::uint64_t double_bits(double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  return v;
}

double bits_double(std::uint64_t v) {
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

std::optional<std::filesystem::path> directory_from_env() {
  const char* dir = std::getenv("FRACSPEC_CACHE_DIR");
  if (dir == nullptr || dir[0] == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

std::filesystem::path file_name(const std::filesystem::path& dir, double s,
                                double lo, double hi, std::size_t n) {
  std::ostringstream name;
  name.precision(17);
  name << "tails2d_s" << s << "_dom" << lo << "_" << hi << "_n" << n << ".ftl1";
  return dir / name.str();
}

std::optional<Vector> load(const std::filesystem::path& file, double s,
                           std::size_t n) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char header[24];
  if (!in.read(header, sizeof header)) return std::nullopt;
  if (std::memcmp(header, kMagic, 4) != 0) return std::nullopt;
  const double file_s = bits_double(get_u64(header + 4));
  const std::uint32_t file_n = get_u32(header + 12);
  if (file_s != s || file_n != n) return std::nullopt;

  Vector tails(n * n);
  std::string buf(n * n * 8, '\0');
  if (!in.read(buf.data(), std::streamsize(buf.size()))) return std::nullopt;
  for (std::size_t i = 0; i < tails.size(); ++i)
    tails[i] = bits_double(get_u64(buf.data() + 8 * i));
  return tails;
}

bool store(const std::filesystem::path& file, double s, std::size_t n,
           const Vector& tails) {
  if (tails.size() != n * n) return false;
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  std::string out;
  out.reserve(24 + tails.size() * 8);
  out.append(kMagic, 4);
  put_u64(out, double_bits(s));
  put_u32(out, std::uint32_t(n));
  out.append(8, '\0');
  for (double t : tails) put_u64(out, double_bits(t));
  std::ofstream f(file, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f.write(out.data(), std::streamsize(out.size()));
  return bool(f);
}

}  // namespace fracspec::tail_cache
