#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cwsrep/errors.hpp"
#include "cwsrep/json_io.hpp"
#include "test_util.hpp"

using namespace cwsrep;
using io::json;

TEST_CASE("polynomial round trip is exact") {
  const HomPoly f = testutil::random_poly(5, 3);
  const json j = io::to_json(f);
  CHECK(j["degree"] == 5);
  const HomPoly g = io::poly_from_json(json::parse(j.dump()));
  CHECK(max_coeff_diff(f, g) == 0.0);
}

TEST_CASE("matrix and BlockCWS round trip") {
  const CMat A = testutil::random_cws(3, 6, 4, false);
  CHECK((io::matrix_from_json(json::parse(io::to_json(A).dump())) - A).norm() == 0.0);
  BlockCWS b{3, 6, false, A};
  const BlockCWS c = io::cws_from_json(json::parse(io::to_json(b).dump()));
  CHECK(c.n == 3);
  CHECK(c.d == 6);
  CHECK((c.entries - A).norm() == 0.0);
  const json nested = json::parse(R"([[1, [0, 2]], [-3, 0.5]])");
  const CMat m = io::matrix_from_json(nested);
  CHECK(m(0, 1) == cplx(0, 2));
  CHECK(m(1, 0) == cplx(-3, 0));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(io::poly_from_json(json::parse(R"({"terms": []})")), ValidationError);
  CHECK_THROWS_AS(io::poly_from_json(json::parse(R"({"degree": 2, "terms": [{"a": 1, "j": 0, "k": 0}]})")),
                  ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"rows": 2, "cols": 2, "entries": [1, 2, 3]})")),
                  ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"([[1, 2], [3]])")), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"([["a"]])")), ValidationError);
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/file.json"), IoError);

  const auto path = std::filesystem::temp_directory_path() / "cwsrep_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(io::read_json_file(path.string()), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("support sweep CSV layout") {
  const RangeSample s = support_sweep(testutil::random_cws(2, 4, 1, false), 8);
  const std::string csv = io::to_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,h,lambda_1,lambda_2,lambda_3,lambda_4,re_z,im_z");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == 8);
}

TEST_CASE("report serialization carries the key fields") {
  const HomPoly f = char_poly(testutil::random_cws(3, 3, 2, false));
  const json h = io::to_json(hyperbolicity_verdict(f));
  CHECK(h["status"] == "strictly_hyperbolic");
  const json inv = io::to_json(invariance_report(f, 3));
  CHECK(inv["cyclic"] == true);
  const json v = io::to_json(validate_cws(testutil::random_cws(3, 3, 2, false), 3));
  CHECK(v["valid"] == true);
}
