#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "freeact/spectra.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

namespace {

// The top eigenvector on a tree ball is radial, so lambda(r) is the top
// eigenvalue of the path operator on spheres 0..r with weights 2, sqrt3, ...
double radial_lambda(std::size_t r) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r + 1), static_cast<Eigen::Index>(r + 1));
  for (std::size_t k = 0; k < r; ++k) {
    const double w = k == 0 ? 2.0 : std::sqrt(3.0);
    T(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = w;
    T(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = w;
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T).eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("constants") {
  CHECK(kKestenNorm == doctest::Approx(3.4641016151).epsilon(1e-10));
  CHECK(kDisplacementBound == doctest::Approx(0.5358983849).epsilon(1e-9));
  CHECK(kKazhdanEpsilon == doctest::Approx(0.5176380902).epsilon(1e-9));
  CHECK(kKazhdanEpsilon * kKazhdanEpsilon == doctest::Approx(kDisplacementBound / 2));
}

TEST_CASE("cayley balls have the tree shape") {
  for (std::size_t r = 0; r <= 6; ++r) {
    const CayleyBall b = cayley_ball(r);
    CHECK(b.dim() == cayley_ball_dimension(r));
    CHECK(b.op.symmetric());
    CHECK(b.op.max_row_degree() <= 4);
    std::size_t nnz = b.op.col.size();
    CHECK(nnz == 2 * (b.dim() - 1));
    for (std::uint32_t v = 1; v < b.dim(); ++v) {
      CHECK(b.length[v] == b.length[b.parent[v]] + 1);
      CHECK(b.left_mult[b.parent[v]][static_cast<std::size_t>(b.first[v])] == v);
      CHECK(b.word(v).size() == b.length[v]);
    }
  }
  CHECK_THROWS_AS(cayley_ball(10, 1000), ResourceLimit);
}

TEST_CASE("lanczos agrees with dense and radial references") {
  for (std::size_t r = 1; r <= 5; ++r) {
    const CayleyBall b = cayley_ball(r);
    const double dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b.op.to_dense()).eigenvalues().maxCoeff();
    const EigEstimate e = top_eigenvalue(b.op, 1e-10);
    CHECK(std::abs(e.value - dense) <= 1e-9);
    CHECK(std::abs(e.value - radial_lambda(r)) <= 1e-9);
  }
  for (std::size_t r = 6; r <= 9; ++r) {
    const EigEstimate e = top_eigenvalue(cayley_ball(r).op, 1e-10);
    CHECK(std::abs(e.value - radial_lambda(r)) <= 1e-9);
  }
  CHECK(radial_lambda(1) == doctest::Approx(2.0));
  CHECK(radial_lambda(2) == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("the kesten table increases toward 2 sqrt 3") {
  const KestenReport k = kesten_report(8, 1e-10);
  CHECK(k.strictly_increasing);
  CHECK(k.below_norm);
  CHECK(k.gap_shrinking);
  REQUIRE(k.rows.size() == 8);
  for (const KestenRow& row : k.rows) {
    CHECK(row.estimate.residual <= 1e-10);
    CHECK(std::abs(row.estimate.value - radial_lambda(row.r)) <= 1e-9);
  }
}

TEST_CASE("ritz vectors are unit Perron vectors") {
  const CayleyBall b = cayley_ball(4);
  EigOptions opt;
  opt.keep_vector = true;
  const EigEstimate e = top_eigenvalue(b.op, 1e-10, opt);
  REQUIRE(e.vector.size() == static_cast<Eigen::Index>(b.dim()));
  CHECK(e.vector.norm() == doctest::Approx(1.0));
  CHECK(e.vector.minCoeff() >= -1e-12);
  CHECK(b.op.quadratic_form(e.vector) == doctest::Approx(e.value).epsilon(1e-12));
}

TEST_CASE("displacement equals 4 minus the quadratic form") {
  const CayleyBall b = cayley_ball(4);
  Gen g(9);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim()));
    for (std::uint32_t v = 0; v < b.dim(); ++v)
      if (b.length[v] < 4) xi[v] = normal(g.engine());
    xi.normalize();
    auto [sigma, mx] = displacement(b, xi);
    CHECK(sigma == doctest::Approx(4.0 - b.op.quadratic_form(xi)).epsilon(1e-12));
    CHECK(mx * mx <= sigma + 1e-12);
    CHECK(2 * mx * mx >= sigma - 1e-12);
  }
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim()));
  bad[static_cast<Eigen::Index>(b.dim() - 1)] = 1;
  CHECK_THROWS_AS(displacement(b, bad), InvalidInput);
}

TEST_CASE("the displacement bound holds with the worst vector attaining 4 - lambda") {
  for (std::size_t r = 2; r <= 5; ++r) {
    const DisplacementReport d = displacement_bound(r, 500, 1e-10, 3);
    CHECK(d.sigma_bound_holds);
    CHECK(d.max_form_bound_holds);
    CHECK(d.worst_sigma == doctest::Approx(4.0 - radial_lambda(r - 1)).epsilon(1e-10));
    CHECK(d.worst_sigma_explicit == doctest::Approx(d.worst_sigma).epsilon(1e-10));
    CHECK(d.identity_error <= 1e-9);
    CHECK(d.min_sample_sigma >= d.worst_sigma - 1e-9);
  }
}

TEST_CASE("a built pair's orbit ball has the cayley spectrum") {
  auto o = make_oracle(OracleKind::RandomGraph);
  FreePairBuilder b(*o, BuilderConfig{6, {}});
  b.run_rounds(4);
  b.extend_for_ball(0, 4);
  for (std::size_t r = 1; r <= 4; ++r) {
    const OrbitSpectrumReport rep = kazhdan_check_on_orbit(b.pair(), 0, r, 1e-10);
    CHECK(rep.isomorphic);
    CHECK(rep.agrees);
    CHECK(rep.vertices == cayley_ball_dimension(r));
    CHECK(std::abs(rep.lambda_orbit - radial_lambda(r)) <= 1e-9);
  }
  const FreePair cyclic{PartialAutomorphism(std::vector<Element>{0, 1}, std::vector<Element>{1, 0}),
                        PartialAutomorphism(std::vector<Element>{0, 1}, std::vector<Element>{1, 0})};
  CHECK_THROWS_AS(kazhdan_check_on_orbit(cyclic, 0, 1, 1e-10), CertificationFailure);
}
