#include "freeact/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <unordered_map>

namespace freeact {

namespace {

constexpr Letter kLetters[] = {Letter::A, Letter::AInv, Letter::B, Letter::BInv};

// Deterministic uniform and normal variates from raw generator bits.
class Variates {
 public:
  explicit Variates(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    return rad * std::cos(ang);
  }

 private:
  std::mt19937_64 rng_;
  std::optional<double> spare_;
};

}  // namespace

void SparseSymOp::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[static_cast<Eigen::Index>(i)] = s;
  }
}

double SparseSymOp::quadratic_form(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return x.dot(y);
}

std::size_t SparseSymOp::max_row_degree() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < dim; ++i) d = std::max(d, row_ptr[i + 1] - row_ptr[i]);
  return d;
}

bool SparseSymOp::symmetric() const {
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const std::size_t j = col[k];
      bool found = false;
      for (std::size_t t = row_ptr[j]; t < row_ptr[j + 1] && !found; ++t)
        found = col[t] == i && val[t] == val[k];
      if (!found) return false;
    }
  return true;
}

Eigen::MatrixXd SparseSymOp::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      m(static_cast<Eigen::Index>(i), col[k]) += val[k];
  return m;
}

SparseSymOp adjacency_operator(std::size_t dim,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                               std::string provenance) {
  SparseSymOp op;
  op.dim = dim;
  op.provenance = std::move(provenance);
  std::vector<std::size_t> degree(dim, 0);
  for (const auto& [u, v] : edges) {
    if (u >= dim || v >= dim) throw InvalidInput("edge endpoint outside operator dimension");
    ++degree[u];
    if (u != v) ++degree[v];
  }
  op.row_ptr.assign(dim + 1, 0);
  for (std::size_t i = 0; i < dim; ++i) op.row_ptr[i + 1] = op.row_ptr[i] + degree[i];
  op.col.resize(op.row_ptr[dim]);
  op.val.assign(op.row_ptr[dim], 1.0);
  std::vector<std::size_t> fill(op.row_ptr.begin(), op.row_ptr.end() - 1);
  for (const auto& [u, v] : edges) {
    op.col[fill[u]++] = v;
    if (u != v) op.col[fill[v]++] = u;
  }
  for (std::size_t i = 0; i < dim; ++i)
    std::sort(op.col.begin() + static_cast<std::ptrdiff_t>(op.row_ptr[i]),
              op.col.begin() + static_cast<std::ptrdiff_t>(op.row_ptr[i + 1]));
  return op;
}

std::size_t cayley_ball_dimension(std::size_t r) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < r; ++i) p *= 3;
  return 1 + 2 * (p - 1);
}

ReducedWord CayleyBall::word(std::uint32_t v) const {
  std::vector<Letter> letters;
  while (v != 0) {
    letters.push_back(first[v]);
    v = parent[v];
  }
  return ReducedWord::make(std::move(letters));
}

CayleyBall cayley_ball(std::size_t r, std::size_t max_dim) {
  if (r > 19) throw ResourceLimit("Cayley ball radius too large");
  const std::size_t dim = cayley_ball_dimension(r);
  if (dim > max_dim)
    throw ResourceLimit("Cayley ball of radius " + std::to_string(r) + " has dimension " +
                        std::to_string(dim) + " > " + std::to_string(max_dim));
  CayleyBall b;
  b.radius = r;
  b.parent.reserve(dim);
  b.first.reserve(dim);
  b.length.reserve(dim);
  b.left_mult.reserve(dim);
  b.parent.push_back(0);
  b.first.push_back(Letter::A);
  b.length.push_back(0);
  b.left_mult.push_back({CayleyBall::kOutside, CayleyBall::kOutside, CayleyBall::kOutside,
                         CayleyBall::kOutside});
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(dim - 1);
  for (std::uint32_t v = 0; v < b.parent.size(); ++v) {
    for (Letter c : kLetters) {
      const auto ci = static_cast<std::size_t>(c);
      if (v != 0 && c == inverse(b.first[v])) {
        b.left_mult[v][ci] = b.parent[v];
        continue;
      }
      if (b.length[v] == r) {
        b.left_mult[v][ci] = CayleyBall::kOutside;
        continue;
      }
      const auto child = static_cast<std::uint32_t>(b.parent.size());
      b.parent.push_back(v);
      b.first.push_back(c);
      b.length.push_back(static_cast<std::uint8_t>(b.length[v] + 1));
      b.left_mult.push_back({CayleyBall::kOutside, CayleyBall::kOutside, CayleyBall::kOutside,
                             CayleyBall::kOutside});
      b.left_mult[v][ci] = child;
      edges.emplace_back(v, child);
    }
  }
  b.op = adjacency_operator(b.dim(), edges, "cayley-ball r=" + std::to_string(r));
  return b;
}

EigEstimate top_eigenvalue(const SparseSymOp& op, double tol, const EigOptions& options) {
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");
  const std::size_t n = op.dim;
  if (n == 0) throw InvalidInput("empty operator");
  EigEstimate est;
  if (n == 1) {
    est.value = op.row_ptr[1] > 0 ? op.val[0] : 0.0;
    est.iterations = 0;
    if (options.keep_vector) est.vector = Eigen::VectorXd::Ones(1);
    return est;
  }
  const auto N = static_cast<Eigen::Index>(n);
  Variates var(options.seed);
  Eigen::VectorXd start(N);
  for (Eigen::Index i = 0; i < N; ++i) start[i] = 2.0 * var.uniform() - 1.0;
  start.normalize();

  Eigen::VectorXd v(N), v_prev(N), w(N), y(N), Sy(N);
  while (true) {
    const std::size_t m = std::min(options.krylov, n);
    std::vector<double> alpha, beta;
    // Pass 1: tridiagonal coefficients.
    v = start;
    v_prev.setZero();
    double b = 0;
    for (std::size_t j = 0; j < m; ++j) {
      op.multiply(v, w);
      ++est.iterations;
      const double a = w.dot(v);
      w -= a * v + b * v_prev;
      alpha.push_back(a);
      b = w.norm();
      if (j + 1 == m || b < 1e-30) break;
      beta.push_back(b);
      v_prev = v;
      v = w / b;
    }
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd s = es.eigenvectors().col(k - 1);

    // Pass 2: regenerate the Lanczos vectors and accumulate the Ritz vector.
    v = start;
    v_prev.setZero();
    y = s[0] * v;
    for (Eigen::Index j = 0; j + 1 < k; ++j) {
      op.multiply(v, w);
      ++est.iterations;
      w -= alpha[static_cast<std::size_t>(j)] * v + (j > 0 ? beta[static_cast<std::size_t>(j - 1)] : 0.0) * v_prev;
      v_prev = v;
      v = w / beta[static_cast<std::size_t>(j)];
      y += s[j + 1] * v;
    }
    y.normalize();
    op.multiply(y, Sy);
    ++est.iterations;
    est.value = y.dot(Sy);
    est.residual = (Sy - est.value * y).norm();
    if (est.residual <= tol) break;
    if (est.iterations >= options.max_matvecs)
      throw CertificationFailure("Lanczos did not reach residual " + std::to_string(tol) + " (got " +
                                 std::to_string(est.residual) + ")");
    ++est.restarts;
    start = y;
  }
  if (options.keep_vector) {
    // The Perron vector of a nonnegative operator can be taken nonnegative.
    if (y.sum() < 0) y = -y;
    est.vector = y;
  }
  return est;
}

KestenReport kesten_report(std::size_t r_max, double tol, std::size_t max_dim) {
  if (r_max < 1) throw InvalidInput("r_max must be >= 1");
  KestenReport rep;
  rep.tol = tol;
  for (std::size_t r = 1; r <= r_max; ++r) {
    const CayleyBall ball = cayley_ball(r, max_dim);
    KestenRow row;
    row.r = r;
    row.dim = ball.dim();
    row.estimate = top_eigenvalue(ball.op, tol);
    row.gap = kKestenNorm - row.estimate.value;
    rep.rows.push_back(std::move(row));
  }
  rep.strictly_increasing = rep.below_norm = rep.gap_shrinking = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rep.below_norm = rep.below_norm && rep.rows[i].estimate.value < kKestenNorm;
    if (i == 0) continue;
    rep.strictly_increasing =
        rep.strictly_increasing && rep.rows[i].estimate.value > rep.rows[i - 1].estimate.value;
    rep.gap_shrinking = rep.gap_shrinking && rep.rows[i].gap < rep.rows[i - 1].gap;
  }
  return rep;
}

std::pair<double, double> displacement(const CayleyBall& ball, const Eigen::VectorXd& xi) {
  if (static_cast<std::size_t>(xi.size()) != ball.dim()) throw InvalidInput("vector size differs from ball");
  for (std::size_t w = 0; w < ball.dim(); ++w)
    if (std::size_t{ball.length[w]} + 1 > ball.radius && xi[static_cast<Eigen::Index>(w)] != 0.0)
      throw InvalidInput("vector does not vanish outside the inner ball");
  double sum = 0, max_norm = 0;
  for (Letter f : {Letter::A, Letter::B}) {
    const auto finv = static_cast<std::size_t>(inverse(f));
    double sq = 0;
    for (std::size_t w = 0; w < ball.dim(); ++w) {
      const std::uint32_t u = ball.left_mult[w][finv];
      const double moved = u == CayleyBall::kOutside ? 0.0 : xi[u];
      const double d = moved - xi[static_cast<Eigen::Index>(w)];
      sq += d * d;
    }
    sum += sq;
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  return {sum, max_norm};
}

DisplacementReport displacement_bound(std::size_t r, std::size_t samples, double tol,
                                      std::uint64_t seed) {
  if (r < 2) throw InvalidInput("displacement bound needs r >= 2");
  DisplacementReport rep;
  rep.r = r;
  rep.samples = samples;
  const CayleyBall ball = cayley_ball(r);
  const CayleyBall inner = cayley_ball(r - 1);
  EigOptions opt;
  opt.keep_vector = true;
  opt.seed = seed;
  const EigEstimate worst = top_eigenvalue(inner.op, tol, opt);
  rep.worst_sigma = 4.0 - worst.value;

  // The inner ball is a prefix of the ball in vertex order.
  const auto N = static_cast<Eigen::Index>(ball.dim());
  const auto M = static_cast<Eigen::Index>(inner.dim());
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(N);
  xi.head(M) = worst.vector;
  xi.normalize();
  auto [sigma_w, max_w] = displacement(ball, xi);
  rep.worst_sigma_explicit = sigma_w;
  rep.identity_error = std::abs(sigma_w - (4.0 - ball.op.quadratic_form(xi)));
  rep.min_sample_sigma = sigma_w;
  rep.min_sample_max_form = max_w;

  Variates var(seed ^ 0x5eed5eedull);
  const Eigen::VectorXd perron = xi.head(M);
  for (std::size_t s = 0; s < samples; ++s) {
    Eigen::VectorXd g(M);
    for (Eigen::Index i = 0; i < M; ++i) g[i] = var.normal();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
    switch (s % 3) {
      case 0: x.head(M) = g; break;
      case 1: x.head(M) = perron + 0.1 * g / g.norm(); break;
      default: x.head(M) = perron + 1e-3 * g / g.norm(); break;
    }
    x.normalize();
    auto [sigma, mx] = displacement(ball, x);
    rep.identity_error = std::max(rep.identity_error, std::abs(sigma - (4.0 - ball.op.quadratic_form(x))));
    rep.min_sample_sigma = std::min(rep.min_sample_sigma, sigma);
    rep.min_sample_max_form = std::min(rep.min_sample_max_form, mx);
  }
  rep.sigma_bound_holds = rep.worst_sigma >= kDisplacementBound - 1e-9 &&
                          rep.min_sample_sigma >= kDisplacementBound - 1e-9;
  rep.max_form_bound_holds = rep.min_sample_max_form >= kKazhdanEpsilon - 1e-9;
  return rep;
}

namespace {

SparseSymOp orbit_operator(const SchreierBall& sb) {
  std::unordered_map<Element, std::uint32_t> index;
  for (std::size_t i = 0; i < sb.vertices.size(); ++i)
    index.emplace(sb.vertices[i], static_cast<std::uint32_t>(i));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(sb.edges.size());
  for (const SchreierEdge& e : sb.edges) edges.emplace_back(index.at(e.from), index.at(e.to));
  return adjacency_operator(sb.vertices.size(), edges,
                            "schreier-ball base=" + std::to_string(sb.base) + " r=" + std::to_string(sb.radius));
}

// Checks that w -> w(base) is a bijection from the Cayley ball onto the orbit
// ball carrying every orbit edge to the matching Cayley edge.
bool isomorphic_to_cayley(const FreePair& pair, const SchreierBall& sb, const CayleyBall& cb) {
  if (sb.vertices.size() != cb.dim()) return false;
  std::vector<Element> point(cb.dim());
  std::unordered_map<Element, std::uint32_t> index;
  point[0] = sb.base;
  index.emplace(sb.base, 0);
  for (std::uint32_t v = 1; v < cb.dim(); ++v) {
    auto p = apply_letter(cb.first[v], pair, point[cb.parent[v]]);
    if (!p || !index.emplace(*p, v).second) return false;
    point[v] = *p;
  }
  for (Element x : sb.vertices)
    if (!index.count(x)) return false;
  for (const SchreierEdge& e : sb.edges) {
    const std::uint32_t u = index.at(e.from);
    if (cb.left_mult[u][static_cast<std::size_t>(e.letter)] != index.at(e.to)) return false;
  }
  return sb.edges.size() + 1 == cb.dim();
}

}  // namespace

OrbitSpectrumReport kazhdan_check_on_orbit(const FreePair& pair, Element base, std::size_t r,
                                           double tol, double agreement) {
  if (r < 1) throw InvalidInput("orbit ball radius must be >= 1");
  OrbitSpectrumReport rep;
  rep.r = r;
  rep.base = base;
  const SchreierBall sb = schreier_ball(pair, base, r);
  if (!sb.is_tree_ball())
    throw CertificationFailure("orbit ball of radius " + std::to_string(r) + " at " + std::to_string(base) +
                               (sb.complete ? " has a cycle" : " is incomplete"));
  rep.vertices = sb.vertices.size();
  const CayleyBall cb = cayley_ball(r);
  rep.isomorphic = isomorphic_to_cayley(pair, sb, cb);
  if (!rep.isomorphic) throw CertificationFailure("orbit ball is not isomorphic to the Cayley ball");
  rep.lambda_orbit = top_eigenvalue(orbit_operator(sb), tol).value;
  rep.lambda_cayley = top_eigenvalue(cb.op, tol).value;
  rep.difference = std::abs(rep.lambda_orbit - rep.lambda_cayley);

  const SchreierBall sb_inner = schreier_ball(pair, base, r - 1);
  const CayleyBall cb_inner = cayley_ball(r - 1);
  rep.inner_orbit = top_eigenvalue(orbit_operator(sb_inner), tol).value;
  rep.inner_cayley = top_eigenvalue(cb_inner.op, tol).value;
  rep.agrees = rep.difference <= agreement && std::abs(rep.inner_orbit - rep.inner_cayley) <= agreement;
  return rep;
}

}  // namespace freeact
