#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gavg/errors.hpp"
#include "gavg/field.hpp"
#include "gavg/io.hpp"

using namespace gavg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gavg_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("text round trip preserves every bit of a masked 2D field") {
  TempDir tmp;
  const GridPtr g = make_grid({DomainKind::disk}, 17);
  const GridFunction u = random_field(g, 123, 1);
  export_field(u, tmp.file("u.txt"), FieldFormat::text);
  const GridFunction v = import_field(tmp.file("u.txt"));
  CHECK(v.grid->nx == g->nx);
  CHECK(v.grid->ny == g->ny);
  CHECK(v.grid->hx == g->hx);
  CHECK(v.grid->hy == g->hy);
  CHECK(v.grid->ox == g->ox);
  CHECK(v.grid->oy == g->oy);
  CHECK(v.grid->mask == g->mask);
  CHECK(v.values == u.values);
}

TEST_CASE("text round trip works at non-dyadic resolutions too") {
  TempDir tmp;
  const GridPtr g = make_grid({DomainKind::disk}, 19);
  const GridFunction u = random_field(g, 9, 2);
  export_field(u, tmp.file("u.txt"), FieldFormat::text);
  const GridFunction v = import_field(tmp.file("u.txt"));
  CHECK(v.grid->ox == g->ox);
  CHECK(v.values == u.values);
  CHECK(v.grid->mask == g->mask);
}

TEST_CASE("1D fields round trip with the unit y spacing convention") {
  TempDir tmp;
  const GridPtr g = make_grid({DomainKind::interval}, 9);
  const GridFunction u = random_field(g, 4, 0);
  export_field(u, tmp.file("u.txt"), FieldFormat::text);
  const GridFunction v = import_field(tmp.file("u.txt"));
  CHECK(v.grid->ny == 1);
  CHECK(v.grid->hy == 1.0);
  CHECK(v.grid->oy == 0.0);
  CHECK(v.values == u.values);
}

TEST_CASE("imported grids drop the continuous domain") {
  TempDir tmp;
  const GridPtr g = make_grid({DomainKind::disk}, 9);
  export_field(random_field(g, 1, 0), tmp.file("u.txt"), FieldFormat::text);
  const GridFunction v = import_field(tmp.file("u.txt"));
  CHECK_FALSE(v.grid->domain.has_value());
}

TEST_CASE("a minimal hand-written file parses with nan as mask holes") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("tiny.txt"));
    f << "3 1 1.0 1.0\n0 nan 0\n";
  }
  const GridFunction v = import_field(tmp.file("tiny.txt"));
  CHECK(v.grid->nx == 3);
  CHECK(v.grid->ny == 1);
  CHECK(v.grid->mask == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(v.values == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(v.grid->ox == -1.0);
}

TEST_CASE("missing files raise io_error; malformed content raises parse_error") {
  TempDir tmp;
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(tmp.file(name));
    f << body;
    return tmp.file(name);
  };
  CHECK_THROWS_AS(import_field(tmp.file("missing.txt")), io_error);
  CHECK_THROWS_AS(import_field(write("short.txt", "3 1 1.0 1.0\n0 1\n")), parse_error);
  CHECK_THROWS_AS(import_field(write("long.txt", "3 1 1.0 1.0\n0 1 2 3\n")), parse_error);
  CHECK_THROWS_AS(import_field(write("header.txt", "3 1 1.0\n0 1 2\n")), parse_error);
  CHECK_THROWS_AS(import_field(write("token.txt", "3 1 1.0 1.0\n0 abc 2\n")), parse_error);
  CHECK_THROWS_AS(import_field(write("badn.txt", "0 1 1.0 1.0\n\n")), parse_error);
  // Errors carry the file name and failing line for direct diagnosis.
  try {
    import_field(write("count.txt", "3 1 1.0 1.0\n0 1\n"));
    CHECK(false);
  } catch (const parse_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("count.txt:2") != std::string::npos);
    CHECK(msg.find("expected 3 values") != std::string::npos);
  }
}

TEST_CASE("export to an unwritable location reports io_error") {
  const GridPtr g = make_grid({DomainKind::interval}, 9);
  const GridFunction u = random_field(g, 1, 0);
  CHECK_THROWS_AS(export_field(u, "/nonexistent_dir_zz/u.txt", FieldFormat::text),
                  io_error);
}

TEST_CASE("PGM export writes big-endian 16-bit rows top to bottom") {
  TempDir tmp;
  Grid g;
  g.nx = 3;
  g.ny = 1;
  g.hx = 1.0;
  g.ox = -1.0;
  g.mask = {1, 1, 1};
  GridFunction u{std::make_shared<const Grid>(g), {0.0, 0.5, 1.0}};
  export_field(u, tmp.file("u.pgm"), FieldFormat::pgm);
  const std::string raw = slurp(tmp.file("u.pgm"));
  const std::string header = "P5\n3 1\n65535\n";
  REQUIRE(raw.size() == header.size() + 6);
  CHECK(raw.compare(0, header.size(), header) == 0);
  const unsigned char* px = reinterpret_cast<const unsigned char*>(raw.data() + header.size());
  CHECK(px[0] == 0x00);  // min -> 0
  CHECK(px[1] == 0x00);
  CHECK(px[2] == 0x80);  // midpoint -> 32768 big-endian
  CHECK(px[3] == 0x00);
  CHECK(px[4] == 0xFF);  // max -> 65535
  CHECK(px[5] == 0xFF);
}

TEST_CASE("constant fields render mid-gray and masked holes render black") {
  TempDir tmp;
  Grid g;
  g.nx = 2;
  g.ny = 1;
  g.hx = 1.0;
  g.ox = -0.5;
  g.mask = {1, 0};
  GridFunction u{std::make_shared<const Grid>(g), {3.0, 0.0}};
  export_field(u, tmp.file("c.pgm"), FieldFormat::pgm);
  const std::string raw = slurp(tmp.file("c.pgm"));
  const std::string header = "P5\n2 1\n65535\n";
  REQUIRE(raw.size() == header.size() + 4);
  const unsigned char* px = reinterpret_cast<const unsigned char*>(raw.data() + header.size());
  CHECK(px[0] == 0x80);  // constant -> 32768
  CHECK(px[1] == 0x00);
  CHECK(px[2] == 0x00);  // unmasked -> 0
  CHECK(px[3] == 0x00);
}

TEST_CASE("2D PGM rows run from the top of the domain down") {
  TempDir tmp;
  Grid g;
  g.nx = 1;
  g.ny = 2;
  g.hx = 1.0;
  g.hy = 1.0;
  g.ox = 0.0;
  g.oy = -0.5;
  g.mask = {1, 1};
  // Node j=1 (top) has the max value, so the first pixel row must be 0xFFFF.
  GridFunction u{std::make_shared<const Grid>(g), {0.0, 1.0}};
  export_field(u, tmp.file("r.pgm"), FieldFormat::pgm);
  const std::string raw = slurp(tmp.file("r.pgm"));
  const std::string header = "P5\n1 2\n65535\n";
  REQUIRE(raw.size() == header.size() + 4);
  const unsigned char* px = reinterpret_cast<const unsigned char*>(raw.data() + header.size());
  CHECK(px[0] == 0xFF);
  CHECK(px[1] == 0xFF);
  CHECK(px[2] == 0x00);
  CHECK(px[3] == 0x00);
}

TEST_CASE("history CSV has the documented header and row shape") {
  TempDir tmp;
  write_history_csv(tmp.file("h.csv"), {1.5, 1.25}, {0.5, 0.25});
  const std::string raw = slurp(tmp.file("h.csv"));
  CHECK(raw.rfind("iteration,energy,residual\n", 0) == 0);
  CHECK(raw.find("0,1.5,0.5\n") != std::string::npos);
  CHECK(raw.find("1,1.25,0.25\n") != std::string::npos);
  CHECK_THROWS_AS(write_history_csv(tmp.file("bad.csv"), {1.0}, {0.5, 0.25}),
                  invalid_parameter);
}
