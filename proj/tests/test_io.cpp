#include <filesystem>

#include "doctest.h"
#include "fio/io.hpp"
#include "support.hpp"

using namespace fio;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fio_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("FIOG layout and round trip") {
  const Grid g(2, 8);
  const GridFunction f = fio::testing::random_function(g, 3);
  const std::string bytes = encode_fiog({g, Domain::space, f.values});
  REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 1 + 16 * g.size());
  CHECK(bytes.substr(0, 4) == "FIOG");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);
  CHECK(bytes[12] == 8);
  CHECK(bytes[16] == 0);
  const GridArray back = decode_fiog(bytes);
  CHECK(back.grid == g);
  CHECK(back.values == f.values);

  const fs::path path = scratch("f.fiog");
  write_fiog(path, f, {{"tool", "test"}});
  CHECK(read_grid_function(path).values == f.values);
  const auto side = nlohmann::json::parse(read_file(sidecar_path(path)));
  CHECK(side["n"] == 2);
  CHECK(side["N"] == 8);
  CHECK(side["domain"] == "space");
  CHECK(side["L"].get<double>() == doctest::Approx(kTwoPi));
  for (const auto& entry : fs::directory_iterator(path.parent_path()))
    CHECK(entry.path().string().find(".tmp.") == std::string::npos);

  // Frequency files come back as space samples.
  const Spectrum F = forward_dft(f);
  write_fiog(scratch("F.fiog"), GridArray{g, Domain::frequency, F.coeffs});
  CHECK(max_abs_diff(read_grid_function(scratch("F.fiog")).values, f.values) < 1e-13);
}

TEST_CASE("FIOG rejects malformed input") {
  const Grid g(2, 8);
  std::string bytes = encode_fiog({g, Domain::space, std::vector<cplx>(g.size(), 1.0)});
  CHECK_THROWS_AS(decode_fiog(bytes.substr(0, bytes.size() - 3)), FormatError);
  CHECK_THROWS_AS(decode_fiog(bytes + "x"), FormatError);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_fiog(bad), FormatError);
  bad = bytes;
  bad[4] = 2;
  CHECK_THROWS_AS(decode_fiog(bad), FormatError);
  bad = bytes;
  bad[12] = 12;  // not a power of two
  CHECK_THROWS_AS(decode_fiog(bad), FormatError);
  bad = bytes;
  bad[16] = 7;
  CHECK_THROWS_AS(decode_fiog(bad), FormatError);
  CHECK_THROWS_AS(read_fiog(scratch("missing.fiog")), FormatError);
}

TEST_CASE("FIOS round trips") {
  const Grid g(2, 8);
  std::vector<SeparableTerm> terms;
  terms.push_back({fio::testing::random_function(g, 1), EtaProfile::radial({RadialFactor::bracket(-0.5)})});
  terms.push_back({fio::testing::random_function(g, 2), EtaProfile::radial({RadialFactor::lp_shell(2)}, cplx(0, 2))});
  const RoughSymbol sep = RoughSymbol::separable(g, terms);

  const RoughSymbol back = decode_fios(encode_fios(sep));
  CHECK(!back.is_dense());
  CHECK(back.rank() == 2);
  CHECK(max_reconstruction_error(sep, {&back}) == 0.0);

  const RoughSymbol dense = sep.to_dense();
  const fs::path path = scratch("a.fios");
  write_fios(path, dense);
  const RoughSymbol d2 = read_fios(path);
  CHECK(d2.is_dense());
  CHECK(d2.table() == dense.table());
  const auto side = nlohmann::json::parse(read_file(sidecar_path(path)));
  CHECK(side["representation"] == "dense");

  std::string bytes = encode_fios(sep);
  bytes[18] = 5;
  CHECK_THROWS_AS(decode_fios(bytes), FormatError);
  CHECK_THROWS_AS(decode_fios(encode_fiog({g, Domain::space, std::vector<cplx>(g.size())})), FormatError);
}

TEST_CASE("encoding is deterministic") {
  const Grid g(2, 16);
  const GridFunction b = lacunary_field(g, 1.0, 3, 42);
  CHECK(encode_fiog({g, Domain::space, b.values}) == encode_fiog({g, Domain::space, lacunary_field(g, 1.0, 3, 42).values}));
}
