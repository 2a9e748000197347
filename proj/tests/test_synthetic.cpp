#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include <map>

using namespace monge;

TEST_CASE("seeded rng streams are reproducible and distinct") {
  SeededRng a(123, 7), b(123, 7), c(123, 8);
  bool allEqual = true, anyDiffer = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.nextU64();
    allEqual = allEqual && (x == b.nextU64());
    anyDiffer = anyDiffer || (x != c.nextU64());
  }
  CHECK(allEqual);
  CHECK(anyDiffer);

  SeededRng bounded(5);
  for (int i = 0; i < 1000; ++i) CHECK(bounded.nextBounded(7) < 7);
}

TEST_CASE("staircase ground truth") {
  // n = 9, V = sigma = 1: k = 9^(1/3) ~ 2.08, floor(k) = 2, far corner
  // (V / 4) * 2 * 2 = 1 before centering
  const MatrixXd raw = genTheta1Raw<double>(9, 1.0, 1.0);
  CHECK(raw(0, 0) == 0.0);
  CHECK(raw.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(raw(8, 8) == doctest::Approx(1.0));

  const MatrixXd centered = genTheta1<double>(9, 1.0, 1.0);
  CHECK(isAntiMonge(centered, 1e-12));
  CHECK(centered.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(centered.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(variation(centered) - 1.0) < 1e-12);

  // floor(k) < 1 is rejected, not patched
  CHECK_THROWS_AS(genTheta1<double>(2, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(genTheta1<double>(1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("pseudoinverse ground truth") {
  const Index n = 12;
  const double v = 3.0;
  const MatrixXd theta = genTheta2<double>(n, v);

  const MatrixXd expected = (v / (n - 1)) * MatrixXd::Identity(n - 1, n - 1);
  CHECK((secondDifference(theta) - expected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((theta - theta.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(theta.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(isAntiMonge(theta, 1e-12));
  CHECK(std::abs(variationL1(theta) - v) < 1e-10);

  // spectrum maps through the singular values of D
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(theta);
  REQUIRE(eig.info() == Eigen::Success);
  const VectorXd dsv = dSingularValues<double>(n);  // ascending
  for (Index i = 0; i < n - 1; ++i) {
    const double expectedEig = (v / (n - 1)) / (dsv(i) * dsv(i));  // descending in i
    CHECK(eig.eigenvalues()(n - 1 - i) == doctest::Approx(expectedEig).epsilon(1e-9));
  }
  CHECK(std::abs(eig.eigenvalues()(0)) < 1e-10);
}

TEST_CASE("gaussian noise moments and determinism") {
  SeededRng rng(61);
  const MatrixXd big = gaussianNoise<double>(1000, 1000, 2.0, rng);
  const double mean = big.mean();
  const double sd = std::sqrt((big.array() - mean).square().sum() / (big.size() - 1));
  CHECK(std::abs(mean) < 4.0 * 2.0 / 1000.0);
  CHECK(std::abs(sd - 2.0) < 0.01 * 2.0);

  SeededRng r1(99, 3), r2(99, 3);
  const MatrixXd a = gaussianNoise<double>(8, 8, 1.0, r1);
  const MatrixXd b = gaussianNoise<double>(8, 8, 1.0, r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(gaussianNoise<double>(4, 4, 0.0, r1), std::invalid_argument);
}

TEST_CASE("random cone members record their own bookkeeping") {
  SeededRng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cone = randomAntiMonge<double>(6, 9, 0.7, rng);
    CHECK(isAntiMonge(cone.matrix, 1e-12));
    CHECK(std::abs(variationL1(cone.matrix) - cone.variation) < 1e-9 * (1.0 + cone.variation));
    const auto dec = decompose(cone.matrix);
    CHECK((dec.B - cone.isotonicCore).cwiseAbs().maxCoeff() <
          1e-10 * (1.0 + cone.isotonicCore.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("random shuffles invert and cover orderings uniformly") {
  SeededRng rng(63);
  const MatrixXd m = testutil::randomMatrix(5, 4, rng);
  const auto sh = randomShuffle(m, rng);
  CHECK((applyPermutations(sh.shuffled, sh.rows.inverse(), sh.cols.inverse()) - m)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const MatrixXd single = MatrixXd::Constant(1, 1, 3.0);
  CHECK(randomShuffle(single, rng).shuffled(0, 0) == 3.0);

  // chi-squared uniformity over the 3! row orders
  const int draws = 10000;
  std::map<std::vector<Index>, int> counts;
  for (int d = 0; d < draws; ++d) {
    counts[randomPermutation(3, rng).indices()]++;
  }
  CHECK(counts.size() == 6);
  double chi2 = 0;
  const double expected = draws / 6.0;
  for (const auto& [perm, count] : counts) {
    chi2 += (count - expected) * (count - expected) / expected;
  }
  CHECK(chi2 < 20.5);  // df = 5 at p ~ 0.001
}
