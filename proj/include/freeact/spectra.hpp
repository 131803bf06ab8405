#pragma once

// Spectral checks for the generator sum S = a + a^-1 + b + b^-1 acting on
// balls of the free group and on orbit balls of a constructed free pair.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "freeact/freepair.hpp"

namespace freeact {

inline const double kKestenNorm = 2.0 * std::sqrt(3.0);
inline const double kDisplacementBound = 4.0 - 2.0 * std::sqrt(3.0);
inline const double kKazhdanEpsilon = std::sqrt(2.0 - std::sqrt(3.0));

// Symmetric operator in compressed row form.
struct SparseSymOp {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::string provenance;

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  std::size_t max_row_degree() const;
  bool symmetric() const;
  Eigen::MatrixXd to_dense() const;
};

// Builds an adjacency operator from an undirected edge list (each edge once).
SparseSymOp adjacency_operator(std::size_t dim,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                               std::string provenance);

// Ball of radius r in the free group on a, b. Vertex 0 is the identity and
// vertices are ordered by word length. Words grow on the left, so the parent
// of c.w is w.
struct CayleyBall {
  std::size_t radius = 0;
  std::vector<std::uint32_t> parent;        // parent[0] = 0
  std::vector<Letter> first;                // first letter of each non-root word
  std::vector<std::uint8_t> length;
  // left_mult[w][c] = index of c.w, or kOutside when |c.w| > radius.
  std::vector<std::array<std::uint32_t, 4>> left_mult;
  SparseSymOp op;

  static constexpr std::uint32_t kOutside = 0xffffffffu;
  std::size_t dim() const { return parent.size(); }
  ReducedWord word(std::uint32_t v) const;  // v != 0
};

// 1 + 2 (3^r - 1).
std::size_t cayley_ball_dimension(std::size_t r);
// Throws ResourceLimit when the dimension exceeds max_dim.
CayleyBall cayley_ball(std::size_t r, std::size_t max_dim = 2'000'000);

struct EigOptions {
  std::size_t krylov = 80;          // Lanczos steps per restart
  std::size_t max_matvecs = 20000;
  std::uint64_t seed = 1;
  bool keep_vector = false;
};

struct EigEstimate {
  double value = 0;
  double residual = 0;   // ||S y - value y|| for the unit Ritz vector y
  std::size_t iterations = 0;  // matrix-vector products
  std::size_t restarts = 0;
  Eigen::VectorXd vector;  // filled when keep_vector
};

// Largest eigenvalue by restarted Lanczos from a seeded random start. The
// Ritz vector is rebuilt in a second pass so no Krylov basis is stored.
// Throws CertificationFailure when the residual stays above tol.
EigEstimate top_eigenvalue(const SparseSymOp& op, double tol, const EigOptions& options = {});

struct KestenRow {
  std::size_t r = 0;
  std::size_t dim = 0;
  EigEstimate estimate;
  double gap = 0;  // kKestenNorm - value
};

struct KestenReport {
  std::vector<KestenRow> rows;
  double tol = 0;
  bool strictly_increasing = false;
  bool below_norm = false;
  bool gap_shrinking = false;
};

KestenReport kesten_report(std::size_t r_max, double tol, std::size_t max_dim = 2'000'000);

struct DisplacementReport {
  std::size_t r = 0;
  double worst_sigma = 0;           // 4 - lambda(r - 1)
  double worst_sigma_explicit = 0;  // sum of squared displacements of the worst vector
  double identity_error = 0;        // max |explicit - (4 - <S xi, xi>)| over tested vectors
  std::size_t samples = 0;
  double min_sample_sigma = 0;
  double min_sample_max_form = 0;   // min over samples of max_i ||rho(f_i) xi - xi||
  bool sigma_bound_holds = false;   // worst_sigma >= kDisplacementBound - 1e-9
  bool max_form_bound_holds = false;
};

// Sum over the two generators of ||rho(f) xi - xi||^2 and the larger of the
// two norms, for xi on the ball (left-regular action, rho(f) xi (w) = xi(f^-1 w)).
// xi must vanish outside radius - 1.
std::pair<double, double> displacement(const CayleyBall& ball, const Eigen::VectorXd& xi);

DisplacementReport displacement_bound(std::size_t r, std::size_t samples, double tol,
                                      std::uint64_t seed = 1);

struct OrbitSpectrumReport {
  std::size_t r = 0;
  Element base = 0;
  std::size_t vertices = 0;
  bool isomorphic = false;     // word -> point map is a bijection respecting letters
  double lambda_orbit = 0;
  double lambda_cayley = 0;
  double difference = 0;
  double inner_orbit = 0;      // lambda on the radius r - 1 orbit ball
  double inner_cayley = 0;
  bool agrees = false;         // both differences <= agreement
};

// Compares the spectrum of the orbit ball of `base` under the pair with the
// abstract Cayley ball. Throws CertificationFailure when the orbit ball is
// not a tree ball.
OrbitSpectrumReport kazhdan_check_on_orbit(const FreePair& pair, Element base, std::size_t r,
                                           double tol, double agreement = 1e-9);

}  // namespace freeact
