#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disarr/isotropic.hpp"
#include "disarr/oracle.hpp"
#include "support.hpp"

using namespace disarr;
using testsupport::random_matrix;

TEST_CASE("2-D grid search on diag(2,-1)") {
  SearchReport rep = rotation_grid_search_2d(Matrix::diagonal({2, -1}), 10000);
  CHECK(rep.best_value >= 1.0 - 1e-12);
  CHECK(rep.best_value <= 1.0 + 1e-4 * std::sqrt(5.0));
  CHECK(rep.best_parameters.size() == 1);
  CHECK(rep.evaluations > 10000);
}

TEST_CASE("2-D grid search reaches zero on traceless input") {
  SplitMix64 rng(51);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    Matrix m = testsupport::random_traceless_symmetric(2, rng);
    SearchReport rep = rotation_grid_search_2d(m, 10000);
    CHECK(rep.best_value <= 1e-3 * (frobenius_norm(m) + 1.0));
  }
}

TEST_CASE("2-D grid search is exact for the identity") {
  for (int res : {2, 17, 503}) {
    SearchReport rep = rotation_grid_search_2d(Matrix::identity(2), res);
    CHECK(rep.best_value == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK_THROWS(rotation_grid_search_2d(Matrix::identity(3), 100));
  CHECK_THROWS(rotation_grid_search_2d(Matrix::identity(2), 1));
}

TEST_CASE("grid search agrees with the closed-form minimum") {
  SplitMix64 rng(52);
  for (int rep_i = 0; rep_i < 100; ++rep_i) {
    Matrix m = random_matrix(2, rng, 2.0);
    SearchReport rep = rotation_grid_search_2d(m, 10000);
    const double closed = minimizing_rotation(m).objective;
    CHECK(std::abs(rep.best_value - closed) <= 1e-6 * (frobenius_norm(m) + 1.0));
    CHECK(rep.best_value >= std::abs(trace(m)) - 1e-9 * (frobenius_norm(m) + 1.0));
  }
}

TEST_CASE("random search on the identity returns the dimension") {
  for (int n : {2, 3, 4}) {
    SearchReport rep = rotation_random_search(Matrix::identity(n), 50, 7);
    CHECK(rep.best_value == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("random search approaches the trace bound in 3-D") {
  SplitMix64 rng(53);
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    Matrix m = random_matrix(3, rng, 1.5);
    SearchReport rep = rotation_random_search(m, 100000, 99 + rep_i);
    const double scale = frobenius_norm(m) + 1.0;
    CHECK(std::abs(rep.best_value - std::abs(trace(m))) <= 1e-3 * scale);
    CHECK(rep.best_value >= std::abs(trace(m)) - 1e-9 * scale);
    CHECK(rep.best_parameters.size() == 4);  // quaternion
  }
}

TEST_CASE("random search is deterministic and loosely monotone in trials") {
  SplitMix64 rng(54);
  Matrix m = random_matrix(3, rng);
  SearchReport a = rotation_random_search(m, 2000, 42);
  SearchReport b = rotation_random_search(m, 2000, 42);
  CHECK(a.best_value == b.best_value);
  CHECK(a.evaluations == b.evaluations);
  REQUIRE(a.best_parameters.size() == b.best_parameters.size());
  for (std::size_t i = 0; i < a.best_parameters.size(); ++i)
    CHECK(a.best_parameters[i] == b.best_parameters[i]);

  SearchReport c = rotation_random_search(m, 8000, 42);
  CHECK(c.best_value <= a.best_value + 1e-3 * (frobenius_norm(m) + 1.0));
}

TEST_CASE("infimum probe on the zero matrix") {
  SearchReport rep = infimum_probe(Matrix(2), 10, 8, {Vector::zero(2)},
                                   {Matrix::identity(2)});
  CHECK(rep.best_value == 0.0);
}

TEST_CASE("infimum probe on a traceless target stays near zero") {
  Matrix m = Matrix::diagonal({1, -1});
  std::vector<Matrix> rotations{minimizing_rotation(m).rotation, Matrix::identity(2)};
  std::vector<Vector> offsets{Vector::zero(2), Vector{0.5, 0.5}};
  SearchReport rep = infimum_probe(m, 50, 128, offsets, rotations);
  CHECK(rep.best_value <= 0.1 * frobenius_norm(m));
  CHECK(rep.best_value >= std::abs(trace(m)) - 1e-9);
  CHECK(rep.evaluations == 4);
}

TEST_CASE("infimum probe shrinks as the resolution doubles") {
  SplitMix64 rng(55);
  for (int rep_i = 0; rep_i < 3; ++rep_i) {
    Matrix m = random_matrix(2, rng, 1.5);
    std::vector<Matrix> rotations{minimizing_rotation(m).rotation};
    std::vector<Vector> offsets{Vector::zero(2)};
    const int n = 20;
    // circulation bound on the covered cube (1 - 2/(n+2)) Q
    const double covered = std::pow(1.0 - 2.0 / (n + 2), 2);
    double prev = 1e300;
    for (int res : {8, 16, 32, 64}) {
      SearchReport rep = infimum_probe(m, n, res, offsets, rotations);
      CHECK(rep.best_value <= prev + 1e-9);
      CHECK(rep.best_value >=
            std::abs(trace(m)) * covered - 1e-9 * (frobenius_norm(m) + 1.0));
      prev = rep.best_value;
    }
  }
}

TEST_CASE("lower bound is never violated by any search") {
  SplitMix64 rng(56);
  for (int rep_i = 0; rep_i < 50; ++rep_i) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    Matrix m = random_matrix(n, rng, 2.0);
    SearchReport rep = rotation_random_search(m, 200, rng.next_u64());
    CHECK(rep.best_value >= std::abs(trace(m)) - 1e-9 * (frobenius_norm(m) + 1.0));
  }
}
