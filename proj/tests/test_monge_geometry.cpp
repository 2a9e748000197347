#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

using namespace monge;

TEST_CASE("isAntiMonge membership") {
  CHECK(isAntiMonge(MatrixXd::Constant(3, 3, 1.0), 0.0));

  MatrixXd strict(2, 2);
  strict << 0, 1, 1, 0;
  CHECK_FALSE(isAntiMonge(strict, 0.0));
  CHECK(secondDifference(strict)(0, 0) == -2.0);

  CHECK(isAntiMonge(genTheta2<double>(12, 1.0), 1e-12));
  CHECK(isAntiMonge(MatrixXd::Random(1, 6), 0.0));  // vacuous: no 2x2 block
  CHECK_THROWS_AS(isAntiMonge(strict, -1.0), std::invalid_argument);
}

TEST_CASE("membership survives ker-D shifts") {
  SeededRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto cone = randomAntiMonge<double>(6, 5, 1.0, rng);
    const bool member = isAntiMonge(cone.matrix, 1e-12);
    MatrixXd shifted = cone.matrix;
    shifted.colwise() += VectorXd(testutil::randomMatrix(6, 1, rng, 5.0));
    shifted.rowwise() += VectorXd(testutil::randomMatrix(5, 1, rng, 5.0)).transpose();
    CHECK(member == isAntiMonge(shifted, 1e-9));
  }
}

TEST_CASE("variation corner formula and its l1 companion") {
  CHECK(variation(MatrixXd::Constant(4, 4, 2.0)) == 0.0);

  MatrixXd corner(2, 2);
  corner << 0, 0, 0, 1;
  CHECK(variation(corner) == 1.0);

  SeededRng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cone = randomAntiMonge<double>(7, 6, 1.0, rng);
    CHECK(std::abs(variation(cone.matrix) - variationL1(cone.matrix)) <
          1e-10 * (1.0 + cone.variation));
  }
}

TEST_CASE("decompose constructs the unique structural triple") {
  MatrixXd two(2, 2);
  two << 1, 2, 3, 4;
  const auto dec = decompose(two);
  MatrixXd expectedR(2, 2), expectedS(2, 2);
  expectedR << 1, 1, 3, 3;
  expectedS << 0, 1, 0, 1;
  CHECK((dec.R - expectedR).cwiseAbs().maxCoeff() == 0.0);
  CHECK((dec.S - expectedS).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dec.B.cwiseAbs().maxCoeff() == 0.0);

  const auto constant = decompose(MatrixXd::Constant(3, 5, 4.0));
  CHECK((constant.R - MatrixXd::Constant(3, 5, 4.0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(constant.S.cwiseAbs().maxCoeff() == 0.0);
  CHECK(constant.B.cwiseAbs().maxCoeff() == 0.0);

  const Index n = 5;
  MatrixXd grid(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) grid(i, j) = static_cast<double>((i + 1) * (j + 1));
  }
  const auto gdec = decompose(grid);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) CHECK(gdec.B(i, j) == doctest::Approx(i * j).epsilon(1e-14));
  }
  CHECK(gdec.B(n - 1, n - 1) == doctest::Approx(variation(grid)).epsilon(1e-14));
}

TEST_CASE("decomposition is exact for arbitrary input and clean on the cone") {
  SeededRng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    // off-cone inputs still reassemble exactly
    const MatrixXd any = testutil::randomMatrix(6, 8, rng, 10.0);
    const auto dec = decompose(any);
    CHECK((dec.reconstruct() - any).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, any.cwiseAbs().maxCoeff()));

    const auto cone = randomAntiMonge<double>(6, 8, 1.0, rng);
    const auto cdec = decompose(cone.matrix);
    const MatrixXd& B = cdec.B;
    CHECK(B.row(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(B.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cdec.S.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(B.minCoeff() >= -1e-12);
    // bivariate isotonic: nondecreasing along rows and columns
    CHECK((B.rightCols(7) - B.leftCols(7)).minCoeff() >= -1e-12);
    CHECK((B.bottomRows(5) - B.topRows(5)).minCoeff() >= -1e-12);
    CHECK(isAntiMonge(B, 1e-12));
    const double scale = cone.matrix.cwiseAbs().maxCoeff();
    CHECK(B(5, 7) == doctest::Approx(variation(cone.matrix)).epsilon(1e-10));
    CHECK(B.cwiseAbs().maxCoeff() == doctest::Approx(B(5, 7)).epsilon(1e-12));
    CHECK(cdec.R.cwiseAbs().maxCoeff() <= 4.0 * scale + 1e-12);
    CHECK(cdec.S.cwiseAbs().maxCoeff() <= 4.0 * scale + 1e-12);
    CHECK(B.cwiseAbs().maxCoeff() <= 4.0 * scale + 1e-12);
  }
}

TEST_CASE("lowRankApprox meets its rank and error budget") {
  // variation zero: reconstruction is exact for any r
  const MatrixXd flat = MatrixXd::Constant(6, 6, 3.0);
  CHECK((lowRankApprox(flat, 2) - flat).cwiseAbs().maxCoeff() < 1e-12);

  {
    const Index n = 64;
    const MatrixXd theta = genTheta2<double>(n, 1.0);
    const Index r = 4;
    const MatrixXd approx = lowRankApprox(theta, r);
    const double err2 = (approx - theta).squaredNorm();
    const double v = variation(theta);
    CHECK(err2 <= 2.0 * n * n * v * v / (r * r * r));
    const auto svd = fullSvd(approx);
    Index numericalRank = 0;
    for (Index i = 0; i < svd.singularValues.size(); ++i) {
      if (svd.singularValues(i) > 1e-9) ++numericalRank;
    }
    CHECK(numericalRank <= 3 * r + 3);
  }

  CHECK_THROWS_AS(lowRankApprox(flat, 0), std::invalid_argument);
}

TEST_CASE("lowRankApprox error is sandwiched on the worst-case matrix") {
  const Index n = 32;
  const MatrixXd theta = worstCaseMatrix<double>(n, 1.0);
  const double v = variation(theta);
  const auto svd = fullSvd(theta);
  for (Index r : {2, 4, 8}) {
    const MatrixXd approx = lowRankApprox(theta, r);
    const double err2 = (approx - theta).squaredNorm();
    // optimal rank-(3r+3) error from the singular value tail
    double tail = 0;
    for (Index i = 3 * r + 3; i < svd.singularValues.size(); ++i) {
      tail += svd.singularValues(i) * svd.singularValues(i);
    }
    CHECK(err2 >= tail - 1e-12);
    CHECK(err2 <= 2.0 * n * n * v * v / (r * r * r));
  }
}

TEST_CASE("worstCaseMatrix spectrum and variation") {
  const Index n = 32;
  const double v0 = 2.0;
  const MatrixXd theta = worstCaseMatrix<double>(n, v0);

  CHECK(isAntiMonge(theta, 1e-12));
  CHECK((theta - theta.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // the second difference is (v0/n) I of size n-1, so the variation comes out
  // at v0 (n-1)/n rather than v0 on the nose
  CHECK(std::abs(variationL1(theta) - v0 * (n - 1.0) / n) < 1e-10);
  const MatrixXd expectedDiff = (v0 / n) * MatrixXd::Identity(n - 1, n - 1);
  CHECK((secondDifference(theta) - expectedDiff).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(theta);
  REQUIRE(eig.info() == Eigen::Success);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (Index i = 1; i < n; ++i) {  // i-th largest; the final eigenvalue is 0
    const double mu = eig.eigenvalues()(n - i);
    CHECK(mu >= v0 * n / (pi2 * i * i) - 1e-9);
    CHECK(mu <= 4.0 * v0 * n / (pi2 * i * i) + 1e-9);
  }
  CHECK(std::abs(eig.eigenvalues()(0)) < 1e-10);

  CHECK_THROWS_AS(worstCaseMatrix<double>(1, 1.0), std::invalid_argument);
}

TEST_CASE("worstCaseMatrix singular value tail is fat") {
  // tail lower bound derived from mu_i >= v0 n / (pi^2 i^2):
  // sum_{i>r} mu_i^2 >= (v0^2 n^2 / (3 pi^4)) ((r+1)^{-3} - n^{-3})
  const double v0 = 1.0;
  const double pi4 = std::pow(std::numbers::pi, 4.0);
  for (Index n : {16, 32}) {
    const auto svd = fullSvd(worstCaseMatrix<double>(n, v0));
    for (Index r : {1, 2, 4, 8}) {
      double tail = 0;
      for (Index i = r; i < svd.singularValues.size(); ++i) {
        tail += svd.singularValues(i) * svd.singularValues(i);
      }
      const double lower = v0 * v0 * n * n / (3.0 * pi4) *
                           (1.0 / std::pow(r + 1.0, 3.0) - 1.0 / std::pow(n, 3.0));
      CHECK(tail >= lower);
    }
  }
}
