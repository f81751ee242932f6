// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bica/linalg.hpp"
#include "bica/matrix_io.hpp"
#include "bica/rng.hpp"

using bica::Matrix;

namespace {

Matrix random_matrix(bica::Index rows, bica::Index cols, std::uint64_t seed) {
  bica::RngStream rng(seed);
  Matrix m(rows, cols);
  for (bica::Index i = 0; i < rows; ++i) {
    for (bica::Index j = 0; j < cols; ++j) {
      m(i, j) = rng.standard_normal();
    }
  }
  return m;
}

Matrix random_spd(bica::Index d, std::uint64_t seed) {
  const Matrix g = random_matrix(d, d, seed);
  return g * g.transpose() + Matrix::Identity(d, d);
}

}  // namespace

TEST_CASE("lu_det_inverse on the identity") {
  const Matrix eye = Matrix::Identity(3, 3);
  const auto r = bica::lu_det_inverse(eye);
  CHECK(r.det == doctest::Approx(1.0));
  CHECK((r.inverse - eye).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lu_det_inverse on a diagonal matrix") {
  Matrix m(2, 2);
  m << 2.0, 0.0, 0.0, 0.5;
  const auto r = bica::lu_det_inverse(m);
  CHECK(r.det == doctest::Approx(1.0));
  CHECK(r.inverse(0, 0) == doctest::Approx(0.5));
  CHECK(r.inverse(1, 1) == doctest::Approx(2.0));
  CHECK(r.inverse(0, 1) == 0.0);
}

TEST_CASE("inverse residual on a random 4x4") {
  const Matrix a = random_matrix(4, 4, 7) + 4.0 * Matrix::Identity(4, 4);
  const auto r = bica::lu_det_inverse(a);
  CHECK((a * r.inverse - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lu_det_inverse rejects singular input") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(bica::lu_det_inverse(m), bica::SingularMatrixError);
  CHECK_THROWS_AS(bica::lu_det_inverse(Matrix::Zero(3, 3)), bica::SingularMatrixError);
}

TEST_CASE("det of inverse is reciprocal") {
  for (const std::uint64_t seed : {11, 12, 13}) {
    const Matrix a = random_matrix(5, 5, seed) + 3.0 * Matrix::Identity(5, 5);
    const auto r = bica::lu_det_inverse(a);
    const auto rinv = bica::lu_det_inverse(r.inverse);
    CHECK(r.det * rinv.det == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("solve_spd trivial and diagonal cases") {
  Matrix b(2, 1);
  b << 3.0, 4.0;
  const Matrix x = bica::solve_spd(Matrix::Identity(2, 2), b);
  CHECK(x(0, 0) == doctest::Approx(3.0));
  CHECK(x(1, 0) == doctest::Approx(4.0));

  Matrix m(2, 2);
  m << 4.0, 0.0, 0.0, 9.0;
  Matrix b2(2, 1);
  b2 << 8.0, 27.0;
  const Matrix x2 = bica::solve_spd(m, b2);
  CHECK(x2(0, 0) == doctest::Approx(2.0));
  CHECK(x2(1, 0) == doctest::Approx(3.0));
}

TEST_CASE("solve_spd residual bound on a random SPD system") {
  const Matrix m = random_spd(5, 11);
  const Matrix b = random_matrix(5, 3, 12);
  const Matrix x = bica::solve_spd(m, b);
  CHECK((m * x - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("solve_spd agrees with the LU route up to 16x16") {
  for (const bica::Index d : {2, 4, 8, 16}) {
    const Matrix m = random_spd(d, 20 + static_cast<std::uint64_t>(d));
    const Matrix b = random_matrix(d, 2, 40 + static_cast<std::uint64_t>(d));
    const Matrix x_chol = bica::solve_spd(m, b);
    const Matrix x_lu = bica::lu_det_inverse(m).inverse * b;
    CHECK((x_chol - x_lu).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("solve_spd rejects indefinite and asymmetric input") {
  Matrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(bica::solve_spd(neg, Matrix::Identity(2, 2)),
                  bica::NotPositiveDefiniteError);
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(bica::solve_spd(asym, Matrix::Identity(2, 2)),
                  bica::InvalidParameterError);
}

TEST_CASE("condition number of a known matrix") {
  Matrix m(2, 2);
  m << 10.0, 0.0, 0.0, 0.5;
  CHECK(bica::condition_number(m) == doctest::Approx(20.0));
}

TEST_CASE("matrix CSV and JSON round trips") {
  const Matrix m = random_matrix(3, 4, 99);

  std::stringstream csv(bica::matrix_to_csv(m));
  const Matrix from_csv = bica::matrix_from_csv(csv);
  CHECK((from_csv - m).cwiseAbs().maxCoeff() == 0.0);

  const Matrix from_json = bica::matrix_from_json(bica::matrix_to_json(m));
  CHECK((from_json - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix JSON layout is row-major") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const auto j = bica::matrix_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 2);
  CHECK(j["data"][1] == 2.0);
  CHECK(j["data"][2] == 3.0);
}

TEST_CASE("matrix_from_json rejects bad payloads") {
  auto j = bica::matrix_to_json(Matrix::Identity(2, 2));
  j["data"][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bica::matrix_from_json(j), bica::NonFiniteError);
  auto j2 = bica::matrix_to_json(Matrix::Identity(2, 2));
  j2["rows"] = 3;
  CHECK_THROWS_AS(bica::matrix_from_json(j2), bica::InvalidParameterError);
}
