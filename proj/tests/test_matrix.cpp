#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsinfer/matrix.hpp"
#include "rsinfer/philox.hpp"
#include "rsinfer/sample.hpp"

using namespace rsinfer;

TEST_CASE("identity inverts to identity") {
  const SymmetricMatrix inv = invert_spd(SymmetricMatrix::identity(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(inv(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("diagonal inverse") {
  SymmetricMatrix m(2);
  m.set(0, 0, 2.0);
  m.set(1, 1, 4.0);
  const SymmetricMatrix inv = invert_spd(m);
  CHECK(inv(0, 0) == doctest::Approx(0.5));
  CHECK(inv(1, 1) == doctest::Approx(0.25));
  CHECK(inv(0, 1) == doctest::Approx(0.0));
}

namespace {

SymmetricMatrix random_spd(int dim, RngStream &rng) {
  // A' A + dim * I is comfortably positive definite
  std::vector<double> a(dim * dim);
  for (auto &v : a) v = rng.normal();
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      double acc = 0;
      for (int k = 0; k < dim; ++k) acc += a[k * dim + i] * a[k * dim + j];
      m.set(i, j, acc + (i == j ? dim : 0.0));
    }
  return m;
}

}  // namespace

TEST_CASE("multiply-back check on random SPD matrices") {
  RngStream rng(99, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const SymmetricMatrix m = random_spd(4, rng);
    const SymmetricMatrix inv = invert_spd(m);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0;
        for (int k = 0; k < 4; ++k) acc += m(i, k) * inv(k, j);
        CHECK(std::fabs(acc - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("double inversion returns the matrix") {
  RngStream rng(123, 0);
  const SymmetricMatrix m = random_spd(5, rng);
  const SymmetricMatrix back = invert_spd(invert_spd(m));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(std::fabs(back(i, j) - m(i, j)) < 1e-8 * std::fabs(m(i, j)) + 1e-8);
}

TEST_CASE("degenerate matrix raises NotPositiveDefinite") {
  SymmetricMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(0, 1, 1.0);
  m.set(1, 1, 1.0);  // rank one
  CHECK_THROWS_AS(invert_spd(m), NotPositiveDefinite);

  SymmetricMatrix zero(1);
  CHECK_THROWS_AS(invert_spd(zero), NotPositiveDefinite);
}

TEST_CASE("sample construction rejects non-finite entries") {
  CHECK_THROWS(Sample(2, 1, {1.0, std::nan("")}));
  CHECK_THROWS(Sample(2, 1, {1.0, std::numeric_limits<double>::infinity()}));
  CHECK_THROWS(Sample(2, 2, {1.0, 2.0, 3.0}));  // size mismatch
  const Sample ok(2, 1, {1.0, 2.0});
  CHECK(ok.rows() == 2);
}
