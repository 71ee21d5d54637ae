#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polymat/polymatrix.hpp"
#include "polymat/sampling.hpp"
#include "polymat/suite.hpp"

using namespace polymat;

namespace {

const char* kChaos2Json = R"({
  "n": 3,
  "dims": [2, 2],
  "multilinear": true,
  "terms": [
    {"vars": [1, 2], "matrix": [[1, 0], [0, 0]]},
    {"vars": [1, 3], "matrix": [[0, 0], [0, 1]]},
    {"vars": [2, 3], "matrix": [[0, 1], [1, 0]]}
  ]
})";

// naive oracle: recompute term by term without touching PolyMatrix internals
Matrix naive_evaluate(const PolyMatrix& f, const Vector& x) {
  Matrix out = Matrix::Zero(f.rows(), f.cols());
  for (const auto& [key, coeff] : f.terms()) {
    double prod = 1.0;
    for (int v : key) prod *= x[v - 1];
    out += prod * coeff;
  }
  return out;
}

}  // namespace

TEST_CASE("parse canonicalizes the chaos2 document") {
  PolyMatrix f = parse_polymatrix(std::string(kChaos2Json));
  CHECK(f.n() == 3);
  CHECK(f.rows() == 2);
  CHECK(f.multilinear_flag());
  REQUIRE(f.terms().size() == 3);
  Matrix c12 = f.terms().at({1, 2});
  CHECK(c12(0, 0) == 1.0);
  CHECK(c12(1, 1) == 0.0);
  Matrix c23 = f.terms().at({2, 3});
  CHECK(c23(0, 1) == 1.0);
}

TEST_CASE("parse errors carry the offending term index") {
  std::string dup = R"({"n":2,"dims":[1,1],"multilinear":true,"terms":[
    {"vars":[1],"matrix":[[1]]},{"vars":[1],"matrix":[[2]]}]})";
  CHECK_THROWS_WITH_AS(parse_polymatrix(dup), doctest::Contains("term 1"),
                       ValidationError);

  std::string out_of_range = R"({"n":2,"dims":[1,1],"multilinear":true,"terms":[
    {"vars":[3],"matrix":[[1]]}]})";
  CHECK_THROWS_AS(parse_polymatrix(out_of_range), ValidationError);

  std::string repeated = R"({"n":2,"dims":[1,1],"multilinear":true,"terms":[
    {"vars":[1,1],"matrix":[[1]]}]})";
  CHECK_THROWS_AS(parse_polymatrix(repeated), ValidationError);

  std::string bad_dims = R"({"n":2,"dims":[2,2],"multilinear":true,"terms":[
    {"vars":[1],"matrix":[[1,0]]}]})";
  CHECK_THROWS_AS(parse_polymatrix(bad_dims), ValidationError);

  std::string empty = R"({"n":4,"dims":[2,2],"multilinear":true,"terms":[]})";
  CHECK(parse_polymatrix(empty).is_zero());
}

TEST_CASE("degree cap is enforced at parse time") {
  std::string deep = R"({"n":8,"dims":[1,1],"multilinear":true,"terms":[
    {"vars":[1,2,3,4,5,6,7],"matrix":[[1]]}]})";
  CHECK_THROWS_AS(parse_polymatrix(deep), ValidationError);
  Limits loose;
  loose.max_degree = 7;
  CHECK(parse_polymatrix(deep, loose).degree() == 7);
}

TEST_CASE("round trip preserves the term map") {
  PolyMatrix f = suite::random_multilinear(5, 3, 2, 3, 42, false);
  PolyMatrix g = parse_polymatrix(serialize(f).dump());
  REQUIRE(f.terms().size() == g.terms().size());
  for (const auto& [key, coeff] : f.terms()) {
    REQUIRE(g.terms().count(key) == 1);
    CHECK((coeff - g.terms().at(key)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("evaluate on the chaos2 instance") {
  PolyMatrix f = suite::chaos2();
  Vector ones = Vector::Ones(3);
  Matrix v = f.evaluate(ones);
  CHECK(v(0, 0) == 1.0);
  CHECK(v(0, 1) == 1.0);
  CHECK(v(1, 0) == 1.0);
  CHECK(v(1, 1) == 1.0);
  CHECK(f.evaluate(Vector::Zero(3)).isZero(0.0));
  CHECK_THROWS_AS(f.evaluate(Vector::Zero(4)), ValidationError);
}

TEST_CASE("evaluate agrees with the naive oracle") {
  PolyMatrix f = suite::random_multilinear(4, 3, 2, 2, 7);
  for (int i = 0; i < 5; ++i) {
    Vector x = sample_vector(DistributionSpec::gaussian(), 4, 11, i);
    CHECK((f.evaluate(x) - naive_evaluate(f, x)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("decoupled evaluation") {
  PolyMatrix f = suite::chaos2();
  SUBCASE("identical copies reproduce evaluate exactly") {
    Vector x = sample_vector(DistributionSpec::gaussian(), 3, 5, 0);
    Matrix direct = f.evaluate(x);
    Matrix dec = f.evaluate_decoupled({x, x});
    CHECK((direct - dec).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("unit-vector copies isolate half of one coefficient") {
    Vector e1 = Vector::Zero(3), e2 = Vector::Zero(3);
    e1[0] = 1.0;
    e2[1] = 1.0;
    Matrix dec = f.evaluate_decoupled({e1, e2});
    CHECK(dec(0, 0) == doctest::Approx(0.5));
    CHECK(dec(0, 1) == 0.0);
    CHECK(dec(1, 1) == 0.0);
  }
  SUBCASE("degree one reduces to plain evaluation") {
    PolyMatrix lin(2, 1, 1, true);
    Matrix c(1, 1);
    c << 2.0;
    lin.add_term({1}, c);
    Vector x(2);
    x << 3.0, -1.0;
    CHECK(lin.evaluate_decoupled({x})(0, 0) == doctest::Approx(6.0));
  }
  SUBCASE("copy count must match the degree") {
    Vector x = Vector::Ones(3);
    CHECK_THROWS_AS(f.evaluate_decoupled({x}), ValidationError);
  }
}

TEST_CASE("partial derivatives") {
  PolyMatrix f = suite::chaos2();
  PolyMatrix df = f.partial_derivative(1);
  Vector x(3);
  x << 0.0, 2.5, -1.5;
  Matrix v = df.evaluate(x);
  CHECK(v(0, 0) == doctest::Approx(2.5));   // x2
  CHECK(v(1, 1) == doctest::Approx(-1.5));  // x3
  CHECK(v(0, 1) == 0.0);

  PolyMatrix constant(3, 2, 2, true);
  constant.add_term({}, Matrix::Ones(2, 2));
  CHECK(constant.partial_derivative(2).is_zero());

  PolyMatrix g = suite::random_multilinear(5, 3, 2, 2, 13);
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j) {
      PolyMatrix dij = g.partial_derivative(i).partial_derivative(j);
      PolyMatrix dji = g.partial_derivative(j).partial_derivative(i);
      REQUIRE(dij.terms().size() == dji.terms().size());
      for (const auto& [key, coeff] : dij.terms())
        CHECK((coeff - dji.terms().at(key)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("derivative scales with multiplicity") {
  PolyMatrix p(2, 1, 1, false);
  Matrix c(1, 1);
  c << 3.0;
  p.add_term({1, 1, 2}, c);  // 3 x1^2 x2
  PolyMatrix d1 = p.partial_derivative(1);
  REQUIRE(d1.terms().count({1, 2}) == 1);
  CHECK(d1.terms().at({1, 2})(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("homogeneous parts reassemble the polynomial") {
  PolyMatrix f = suite::random_multilinear(6, 3, 2, 2, 19, false);
  CHECK(f.homogeneous_part(f.degree()).is_homogeneous());
  CHECK(f.homogeneous_part(5).is_zero());
  Vector x = sample_vector(DistributionSpec::gaussian(), 6, 3, 1);
  Matrix sum = Matrix::Zero(2, 2);
  for (int d = 0; d <= f.degree(); ++d)
    sum += f.homogeneous_part(d).evaluate(x);
  CHECK((sum - f.evaluate(x)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("expectation") {
  PolyMatrix f = suite::random_multilinear(5, 3, 2, 2, 23);
  CHECK(f.expectation(DistributionSpec::rademacher()).isZero(0.0));
  CHECK(f.expectation(DistributionSpec::pbiased(0.2)).isZero(1e-12));

  Matrix a(1, 2);
  a << 2.0, -1.0;
  PolyMatrix sq(1, 1, 2, false);
  sq.add_term({1, 1}, a);
  CHECK((sq.expectation(DistributionSpec::gaussian()) - a).cwiseAbs().maxCoeff() == 0.0);

  PolyMatrix quartic(1, 1, 2, false);
  quartic.add_term({1, 1, 1, 1}, a);
  CHECK((quartic.expectation(DistributionSpec::gaussian()) - 3.0 * a)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("quartic Gaussian expectation matches Monte Carlo") {
  Matrix a(1, 1);
  a << 1.0;
  PolyMatrix quartic(1, 1, 1, false);
  quartic.add_term({1, 1, 1, 1}, a);
  std::vector<double> vals(200000);
  parallel_for(static_cast<std::int64_t>(vals.size()), 0, [&](std::int64_t i) {
    Vector x = sample_vector(DistributionSpec::gaussian(), 1, 2024, i);
    vals[i] = quartic.evaluate(x)(0, 0);
  });
  MeanStderr ms = mean_stderr(vals);
  CHECK(std::abs(ms.mean - 3.0) <= 4.0 * ms.se);
}

TEST_CASE("multilinear evaluation is linear in each coordinate") {
  PolyMatrix f = suite::random_multilinear(5, 3, 2, 2, 29);
  Vector x = sample_vector(DistributionSpec::gaussian(), 5, 31, 0);
  for (int i = 0; i < 5; ++i) {
    Vector lo = x, hi = x, mid = x;
    lo[i] = 1.0;
    hi[i] = 3.0;
    mid[i] = 2.0;
    Matrix expected = 0.5 * (f.evaluate(lo) + f.evaluate(hi));
    CHECK((f.evaluate(mid) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}
