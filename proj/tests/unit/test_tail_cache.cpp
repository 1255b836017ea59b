#include <doctest.h>

#include <cmath>
#include <string>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fracspec/tail_cache.hpp"

using namespace fracspec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "fracspec_ftl1_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("directory_from_env reflects the environment variable") {
  unsetenv("FRACSPEC_CACHE_DIR");
  CHECK(!tail_cache::directory_from_env().has_value());
  setenv("FRACSPEC_CACHE_DIR", "/tmp/somewhere", 1);
  auto dir = tail_cache::directory_from_env();
  REQUIRE(dir.has_value());
  CHECK(*dir == fs::path("/tmp/somewhere"));
  setenv("FRACSPEC_CACHE_DIR", "", 1);
  CHECK(!tail_cache::directory_from_env().has_value());
  unsetenv("FRACSPEC_CACHE_DIR");
}

TEST_CASE("store/load round trips doubles bitwise") {
  TempDir tmp;
  const auto file = tail_cache::file_name(tmp.path, 0.5, -1.0, 1.0, 8);
  Vector tails(64);
  for (std::size_t i = 0; i < 64; ++i)
    tails[i] = (i % 2 ? -1.0 : 1.0) * std::exp(-double(i)) * 1.2345678901234567;
  tails[7] = 5e-324;  // denormal survives
  REQUIRE(tail_cache::store(file, 0.5, 8, tails));

  const auto back = tail_cache::load(file, 0.5, 8);
  REQUIRE(back.has_value());
  REQUIRE(back->size() == 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK((*back)[i] == tails[i]);
}

TEST_CASE("load rejects parameter mismatches and corruption") {
  TempDir tmp;
  const auto file = tail_cache::file_name(tmp.path, 0.5, -1.0, 1.0, 8);
  REQUIRE(tail_cache::store(file, 0.5, 8, Vector(64, 1.0)));

  CHECK(!tail_cache::load(file, 0.25, 8).has_value());
  CHECK(!tail_cache::load(file, 0.5, 10).has_value());
  CHECK(!tail_cache::load(tmp.path / "missing.ftl1", 0.5, 8).has_value());

  // truncated payload
  fs::resize_file(file, 24 + 8 * 10);
  CHECK(!tail_cache::load(file, 0.5, 8).has_value());

  // bad magic
  {
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    f << "NOPE" << std::string(20 + 64 * 8, '\0');
  }
  CHECK(!tail_cache::load(file, 0.5, 8).has_value());
}

TEST_CASE("file names separate parameter sets") {
  TempDir tmp;
  const auto a = tail_cache::file_name(tmp.path, 0.5, -1.0, 1.0, 8);
  const auto b = tail_cache::file_name(tmp.path, 0.5, -1.0, 1.0, 10);
  const auto c = tail_cache::file_name(tmp.path, 0.25, -1.0, 1.0, 8);
  const auto d = tail_cache::file_name(tmp.path, 0.5, 0.0, 1.0, 8);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(a != d);
  CHECK(a.extension() == ".ftl1");
}
