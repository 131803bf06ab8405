#include "freeact/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>

#include "freeact/closure.hpp"
#include "freeact/neumann.hpp"
#include "freeact/spectra.hpp"

namespace freeact {

namespace {

std::vector<Element> all_ids(const StructureOracle& oracle) {
  std::vector<Element> v(oracle.size());
  std::iota(v.begin(), v.end(), Element{0});
  return v;
}

std::size_t tree_ball_size(std::size_t r) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < r; ++i) p *= 3;
  return 2 * p - 1;
}

std::string violation_text(const FixedPointReport& fp) {
  if (fp.violations.empty()) return "none";
  return fp.violations.front().word.to_string() + "@" + std::to_string(fp.violations.front().x);
}

CheckResult fixed_point_check(std::string name, const FixedPointReport& fp) {
  return {std::move(name),
          fp.clean(),
          {{"L", fmt(fp.max_length)},
           {"words", fmt(fp.words)},
           {"points", fmt(fp.points)},
           {"evaluations", fmt(fp.evaluations)},
           {"defined", fmt(fp.defined)},
           {"violations", fmt(fp.violation_count)},
           {"first", violation_text(fp)}},
          "exact"};
}

bool inside(const StructureOracle& oracle, const FreePair& pair) {
  for (Element e : covered_points(pair))
    if (!oracle.contains(e)) return false;
  return true;
}

std::string type_violation_text(const StructureOracle& oracle, const FreePair& pair) {
  for (auto [name, m] : {std::pair{"phi", &pair.phi}, std::pair{"gamma", &pair.gamma}})
    if (auto v = m->type_violation(oracle))
      return std::string(name) + ":" + std::to_string(v->first) + "," + std::to_string(v->second);
  return "none";
}

// Sizes (phi, gamma) walk forward one step at a time from the initial (1, 1).
bool step_chain_holds(const FreePair& pair, const std::vector<ExtensionRecord>& steps,
                      std::size_t& bad_index) {
  std::size_t phi = 1, gamma = 1;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ExtensionRecord& s = steps[i];
    std::size_t& grown = s.side == Side::Phi ? phi : gamma;
    if (s.phi_before != phi || s.gamma_before != gamma || s.after <= grown) {
      bad_index = i;
      return false;
    }
    grown = s.after;
  }
  bad_index = steps.size();
  return phi == pair.phi.size() && gamma == pair.gamma.size();
}

}  // namespace

std::vector<CheckResult> certify(StructureOracle& oracle, const FreePair& pair,
                                 const std::vector<ExtensionRecord>& steps, std::size_t L,
                                 std::size_t radius) {
  std::vector<CheckResult> out;
  const bool in_window = inside(oracle, pair);
  const bool nonempty = !pair.phi.empty() && !pair.gamma.empty();

  const std::string tv = in_window ? type_violation_text(oracle, pair) : "outside_window";
  const bool types_ok = in_window && tv == "none";
  out.push_back({"types",
                 types_ok,
                 {{"phi", fmt(pair.phi.size())}, {"gamma", fmt(pair.gamma.size())}, {"violation", tv}},
                 "exact"});

  std::size_t bad = 0;
  const bool chain_ok = nonempty && step_chain_holds(pair, steps, bad);
  out.push_back({"step_chain",
                 chain_ok,
                 {{"steps", fmt(steps.size())}, {"first_bad", chain_ok ? "none" : fmt(bad)}},
                 "exact"});

  std::size_t held = 0;
  std::string first_bad = "none";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    bool ok = false;
    try {
      ok = freshness_ledger(pair, steps[i]).holds;
    } catch (const InvalidInput&) {
    }
    held += ok ? 1 : 0;
    if (!ok && first_bad == "none") first_bad = fmt(i);
  }
  out.push_back({"freshness",
                 held == steps.size(),
                 {{"steps", fmt(steps.size())}, {"held", fmt(held)}, {"first_bad", first_bad}},
                 "exact"});

  bool init_ok = false;
  if (nonempty) {
    std::vector<Element> init{pair.phi.domain()[0], pair.phi.image()[0], pair.gamma.domain()[0],
                              pair.gamma.image()[0]};
    std::sort(init.begin(), init.end());
    init_ok = std::adjacent_find(init.begin(), init.end()) == init.end();
  }
  out.push_back({"init_disjoint", init_ok, {{"points", nonempty ? "4" : "0"}}, "exact"});

  out.push_back(fixed_point_check("fixed_points", check_fixed_points(pair, L, all_ids(oracle))));

  const Element base = nonempty ? pair.phi.domain()[0] : 0;
  std::string failure;
  FreePair extended;
  if (!types_ok || !chain_ok) {
    failure = "pair_not_certified";
  } else {
    try {
      FreePairBuilder builder(oracle, BuilderConfig{L, {}}, pair, steps);
      builder.extend_for_ball(base, radius);
      extended = builder.pair();
    } catch (const std::exception&) {
      failure = "extension_failed";
    }
  }
  for (std::size_t r = 1; r <= radius; ++r) {
    const std::string name = "ball_r" + std::to_string(r);
    const std::size_t expected = tree_ball_size(r);
    if (!failure.empty()) {
      out.push_back({name, false, {{"r", fmt(r)}, {"expected", fmt(expected)}, {"reason", failure}}, "exact"});
      continue;
    }
    const SchreierBall sb = schreier_ball(extended, base, r);
    out.push_back({name,
                   sb.is_tree_ball() && sb.vertices.size() == expected,
                   {{"r", fmt(r)},
                    {"base", fmt(base)},
                    {"vertices", fmt(sb.vertices.size())},
                    {"expected", fmt(expected)},
                    {"edges", fmt(sb.edges.size())},
                    {"complete", fmt(sb.complete)},
                    {"acyclic", fmt(sb.acyclic)}},
                   "exact"});
  }
  if (radius > 0) {
    if (failure.empty()) {
      out.push_back(fixed_point_check("ball_fixed_points",
                                      check_fixed_points(extended, L, covered_points(extended))));
      const std::string etv = type_violation_text(oracle, extended);
      out.push_back({"ball_types",
                     etv == "none",
                     {{"phi", fmt(extended.phi.size())},
                      {"gamma", fmt(extended.gamma.size())},
                      {"violation", etv}},
                     "exact"});
    } else {
      out.push_back({"ball_fixed_points", false, {{"reason", failure}}, "exact"});
      out.push_back({"ball_types", false, {{"reason", failure}}, "exact"});
    }
  }
  return out;
}

namespace {

std::optional<std::size_t> expected_orbits(OracleKind kind, std::size_t n) {
  switch (kind) {
    case OracleKind::RandomGraph:
      return std::size_t{1} << (n * (n - 1) / 2);
    case OracleKind::DenseLinearOrder: {
      std::size_t f = 1;
      for (std::size_t i = 2; i <= n; ++i) f *= i;
      return f;
    }
    case OracleKind::PureSet:
      return 1;
    case OracleKind::EquivTower:
      if (n == 1) return 1;
      return std::nullopt;
  }
  return std::nullopt;
}

std::size_t count_constructed(const std::vector<ExtensionRecord>& steps) {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const ExtensionRecord& s) { return s.constructed; }));
}

}  // namespace

Report cmd_orbits(const RunConfig& cfg) {
  Report rep("orbits");
  rep.set_config(cfg.echo());
  auto oracle = StructureOracle::create(cfg.oracle);
  const std::size_t level = cfg.oracle.level;
  const std::size_t next = oracle->next_probe_level(level);
  oracle->grow_to(level);
  const std::size_t size = oracle->size_at_level(level);
  rep.check("window_size", size >= 30, {{"level", fmt(level)}, {"elements", fmt(size)}, {"minimum", "30"}});

  const std::vector<Element> empty;
  std::vector<std::size_t> counts;
  for (std::size_t n = 1; n <= 4; ++n) {
    const OrbitPartition p = orbit_partition(*oracle, empty, n, level, TupleView::Injective);
    counts.push_back(p.class_count());
    rep.row("orbits",
            {{"n", fmt(n)}, {"level", fmt(level)}, {"tuples", fmt(p.tuple_count)}, {"classes", fmt(p.class_count())}},
            "exact");
    if (auto e = expected_orbits(oracle->kind(), n))
      rep.check("orbits_n" + std::to_string(n), p.class_count() == *e,
                {{"classes", fmt(p.class_count())}, {"expected", fmt(*e)}});
  }

  // Oligomorphic kinds keep their counts as the window grows; the tower keeps
  // gaining pair orbits.
  bool stable = true;
  Fields fields{{"level", fmt(level)}, {"next", fmt(next)}};
  const std::size_t n_max = oracle->kind() == OracleKind::EquivTower ? 2 : 3;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const OrbitPartition p = orbit_partition(*oracle, empty, n, next, TupleView::Injective);
    fields.emplace_back("n" + std::to_string(n), fmt(counts[n - 1]) + "/" + fmt(p.class_count()));
    stable = stable && p.class_count() == counts[n - 1];
  }
  if (oracle->kind() == OracleKind::EquivTower)
    rep.check("orbits_grow", !stable, std::move(fields));
  else
    rep.check("orbits_stable", stable, std::move(fields));
  return rep;
}

Report cmd_build(const RunConfig& cfg) {
  Report rep("build");
  rep.set_config(cfg.echo());
  auto oracle = StructureOracle::create(cfg.oracle);
  FreePairBuilder builder(*oracle, BuilderConfig{cfg.cert_depth, {}});
  builder.run_rounds(cfg.rounds);

  PairArtifact art;
  art.oracle = cfg.oracle;
  art.journal = oracle->journal();
  art.pair = builder.pair();
  art.steps = builder.steps();
  art.cert_depth = cfg.cert_depth;
  art.ball_radius = cfg.ball_radius;
  rep.row("build",
          {{"rounds", fmt(cfg.rounds)},
           {"steps", fmt(art.steps.size())},
           {"constructed_steps", fmt(count_constructed(art.steps))},
           {"phi", fmt(art.pair.phi.size())},
           {"gamma", fmt(art.pair.gamma.size())},
           {"window", fmt(oracle->size())},
           {"level", fmt(oracle->level())},
           {"journal", fmt(art.journal.size())}},
          "exact");

  for (CheckResult& c : certify(*oracle, art.pair, art.steps, art.cert_depth, art.ball_radius)) {
    art.certification.push_back(render_check(c));
    rep.add(std::move(c));
  }
  if (!cfg.pair.empty()) {
    save_pair(cfg.pair, art);
    rep.note("pair written to " + cfg.pair);
  }
  return rep;
}

Report cmd_verify(const RunConfig& cfg) {
  if (cfg.pair.empty()) throw ParseError("verify needs a pair file (--pair)");
  const PairArtifact art = load_pair(cfg.pair);
  RunConfig echo = cfg;
  echo.oracle = art.oracle;
  echo.cert_depth = art.cert_depth;
  echo.ball_radius = art.ball_radius;
  Report rep("verify");
  rep.set_config(echo.echo());

  auto oracle = StructureOracle::replay(art.oracle, art.journal);
  rep.row("artifact",
          {{"journal", fmt(art.journal.size())},
           {"window", fmt(oracle->size())},
           {"phi", fmt(art.pair.phi.size())},
           {"gamma", fmt(art.pair.gamma.size())},
           {"steps", fmt(art.steps.size())}},
          "exact");

  std::vector<std::string> lines;
  for (CheckResult& c : certify(*oracle, art.pair, art.steps, art.cert_depth, art.ball_radius)) {
    lines.push_back(render_check(c));
    rep.add(std::move(c));
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < std::max(lines.size(), art.certification.size()); ++i)
    if (i >= lines.size() || i >= art.certification.size() || lines[i] != art.certification[i]) ++mismatches;
  rep.check("roundtrip", mismatches == 0,
            {{"recorded", fmt(art.certification.size())},
             {"recomputed", fmt(lines.size())},
             {"mismatches", fmt(mismatches)}});
  return rep;
}

std::string cmd_window(const RunConfig& cfg) {
  auto oracle = StructureOracle::create(cfg.oracle);
  return export_window(window(*oracle, cfg.oracle.level));
}

Report cmd_spectra(const RunConfig& cfg) {
  Report rep("spectra");
  rep.set_config(cfg.echo());
  const std::string tol = fmt(cfg.tol);
  const KestenReport k = kesten_report(cfg.rmax, cfg.tol, cfg.max_dim);
  for (const KestenRow& row : k.rows)
    rep.row("kesten",
            {{"r", fmt(row.r)},
             {"dim", fmt(row.dim)},
             {"lambda", fmt(row.estimate.value)},
             {"residual", fmt(row.estimate.residual)},
             {"matvecs", fmt(row.estimate.iterations)},
             {"gap", fmt(row.gap)}},
            tol);

  const double lambda1 = k.rows.front().estimate.value;
  rep.check("kesten_lambda1", std::abs(lambda1 - 2.0) <= 1e-9,
            {{"lambda", fmt(lambda1)}, {"expected", "2"}}, "1e-09");
  rep.check("kesten_increasing", k.strictly_increasing, {{"rows", fmt(k.rows.size())}}, tol);
  double top = 0;
  for (const KestenRow& row : k.rows) top = std::max(top, row.estimate.value);
  rep.check("kesten_below_norm", k.below_norm && top < 3.4641017,
            {{"max_lambda", fmt(top)}, {"norm", fmt(kKestenNorm)}}, tol);
  if (cfg.rmax >= 12) {
    const double l12 = k.rows[11].estimate.value;
    rep.check("kesten_r12", l12 >= 3.37, {{"lambda", fmt(l12)}, {"minimum", "3.37"}}, tol);
  }

  double dense_err = 0;
  const std::size_t dense_max = std::min<std::size_t>(5, cfg.rmax);
  for (std::size_t r = 1; r <= dense_max; ++r) {
    const CayleyBall ball = cayley_ball(r, cfg.max_dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ball.op.to_dense(), Eigen::EigenvaluesOnly);
    const double dense = es.eigenvalues().maxCoeff();
    const double diff = std::abs(dense - k.rows[r - 1].estimate.value);
    dense_err = std::max(dense_err, diff);
    rep.row("dense", {{"r", fmt(r)}, {"lambda_dense", fmt(dense)}, {"difference", fmt(diff)}}, "1e-09");
  }
  rep.check("kesten_dense", dense_err <= 1e-9, {{"rmax", fmt(dense_max)}, {"max_difference", fmt(dense_err)}},
            "1e-09");

  // Worst inner-ball vector at radius r is the Perron vector of radius r - 1.
  double worst = 4.0;
  for (std::size_t r = 2; r <= cfg.rmax; ++r) {
    const double s = 4.0 - k.rows[r - 2].estimate.value;
    worst = std::min(worst, s);
    rep.row("displacement", {{"r", fmt(r)}, {"worst_sigma", fmt(s)}}, tol);
  }
  rep.check("displacement_worst", worst >= kDisplacementBound - 1e-9,
            {{"rmax", fmt(cfg.rmax)}, {"worst_sigma", fmt(worst)}, {"bound", fmt(kDisplacementBound)}}, "1e-09");

  const std::size_t sample_max = std::min<std::size_t>(6, cfg.rmax);
  double min_max_form = 4.0, min_sigma = 4.0, identity = 0, explicit_gap = 0;
  std::size_t total = 0;
  for (std::size_t r = 2; r <= sample_max; ++r) {
    const DisplacementReport d = displacement_bound(r, cfg.samples, cfg.tol, cfg.oracle.seed);
    rep.row("samples",
            {{"r", fmt(r)},
             {"samples", fmt(d.samples)},
             {"min_sigma", fmt(d.min_sample_sigma)},
             {"min_max_form", fmt(d.min_sample_max_form)},
             {"worst_sigma_explicit", fmt(d.worst_sigma_explicit)},
             {"identity_error", fmt(d.identity_error)}},
            tol);
    min_max_form = std::min(min_max_form, d.min_sample_max_form);
    min_sigma = std::min(min_sigma, d.min_sample_sigma);
    identity = std::max(identity, d.identity_error);
    explicit_gap = std::max(explicit_gap, std::abs(d.worst_sigma_explicit - d.worst_sigma));
    total += d.samples;
  }
  if (sample_max >= 2) {
    rep.check("displacement_samples", min_sigma >= kDisplacementBound - 1e-9,
              {{"samples", fmt(total)}, {"min_sigma", fmt(min_sigma)}, {"bound", fmt(kDisplacementBound)}},
              "1e-09");
    rep.check("kazhdan_max_form", min_max_form >= kKazhdanEpsilon - 1e-9,
              {{"samples", fmt(total)}, {"min_max_form", fmt(min_max_form)}, {"epsilon", fmt(kKazhdanEpsilon)}},
              "1e-09");
    rep.check("displacement_identity", identity <= 1e-9 && explicit_gap <= 1e-9,
              {{"identity_error", fmt(identity)}, {"explicit_gap", fmt(explicit_gap)}}, "1e-09");
  }

  if (!cfg.pair.empty()) {
    const PairArtifact art = load_pair(cfg.pair);
    auto oracle = StructureOracle::replay(art.oracle, art.journal);
    const std::size_t R = std::min(art.ball_radius, cfg.rmax);
    const Element base = art.pair.phi.empty() ? 0 : art.pair.phi.domain()[0];
    FreePair extended = art.pair;
    std::string failure;
    try {
      FreePairBuilder builder(*oracle, BuilderConfig{art.cert_depth, {}}, art.pair, art.steps);
      builder.extend_for_ball(base, R);
      extended = builder.pair();
    } catch (const std::exception&) {
      failure = "extension_failed";
    }
    for (std::size_t r = 1; r <= R; ++r) {
      const std::string name = "orbit_r" + std::to_string(r);
      if (failure.empty()) {
        try {
          const OrbitSpectrumReport o = kazhdan_check_on_orbit(extended, base, r, cfg.tol);
          rep.check(name, o.isomorphic && o.agrees,
                    {{"r", fmt(r)},
                     {"vertices", fmt(o.vertices)},
                     {"lambda_orbit", fmt(o.lambda_orbit)},
                     {"lambda_cayley", fmt(o.lambda_cayley)},
                     {"difference", fmt(o.difference)},
                     {"inner_difference", fmt(std::abs(o.inner_orbit - o.inner_cayley))}},
                    "1e-09");
          continue;
        } catch (const CertificationFailure&) {
          rep.check(name, false, {{"r", fmt(r)}, {"reason", "not_a_tree_ball"}}, "1e-09");
          continue;
        }
      }
      rep.check(name, false, {{"r", fmt(r)}, {"reason", failure}}, "1e-09");
    }
  }
  return rep;
}

namespace {

std::string histogram_text(const std::vector<std::size_t>& h) {
  std::string out;
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (h[n] == 0) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(n) + ":" + std::to_string(h[n]);
  }
  return out.empty() ? "-" : out;
}

std::string mover_text(const PartialAutomorphism& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(m.domain()[i]) + "->" + std::to_string(m.image()[i]);
  }
  return out.empty() ? "-" : out;
}

CheckResult control_separation(OracleKind kind, std::uint64_t seed) {
  OracleParams p;
  p.kind = kind;
  p.seed = seed;
  p.level = default_level(kind);
  auto oracle = StructureOracle::create(p);
  const std::vector<Element> A{0, 1}, B{0, 1};
  const SeparationWitness w = separate(*oracle, A, B);
  const WitnessCheck c = recheck_witness(*oracle, w);
  return {"control_" + std::string(to_string(kind)),
          c.ok,
          {{"mover", mover_text(w.mover)}, {"reason", c.ok ? "none" : "recheck_failed"}},
          "exact"};
}

}  // namespace

Report cmd_counterexample(const RunConfig& cfg) {
  Report rep("counterexample");
  rep.set_config(cfg.echo());
  OracleParams tp = cfg.oracle;
  if (tp.kind != OracleKind::EquivTower) {
    tp.kind = OracleKind::EquivTower;
    tp.level = default_level(OracleKind::EquivTower);
  }
  auto tower = StructureOracle::create(tp);
  FreePairBuilder builder(*tower, BuilderConfig{cfg.cert_depth, {}});
  builder.run_rounds(cfg.rounds);
  const FreePair& pair = builder.pair();
  rep.row("build",
          {{"rounds", fmt(cfg.rounds)},
           {"phi", fmt(pair.phi.size())},
           {"gamma", fmt(pair.gamma.size())},
           {"window", fmt(tower->size())}},
          "exact");
  rep.add(fixed_point_check("home_sort_fixed_points", check_fixed_points(pair, cfg.cert_depth, all_ids(*tower))));

  for (auto [name, m] : {std::pair{"phi", &pair.phi}, std::pair{"gamma", &pair.gamma}}) {
    std::size_t finite = 0, max_n = 0;
    for (Element x : m->domain()) {
      const ImaginaryClass c = tower_fixed_class(*tower, *m, x);
      if (c.n < 64) ++finite;
      max_n = std::max(max_n, c.n);
    }
    rep.check(std::string("fixed_class_") + name, finite == m->size(),
              {{"points", fmt(m->size())}, {"finite", fmt(finite)}, {"max_n", fmt(max_n)}});
  }

  for (std::size_t d = 1; d <= cfg.demo_depth; ++d) {
    const TowerDemoReport demo = tower_neumann_failure_demo(*tower, 1, d, cfg.demo_budget);
    rep.check("demo_depth" + std::to_string(d), demo.failure_confirmed(),
              {{"x", fmt(demo.x)},
               {"candidates", fmt(demo.candidates)},
               {"separated", fmt(demo.separated)},
               {"exhaustive", fmt(demo.exhaustive)},
               {"max_fixed_index", fmt(demo.max_fixed_index)},
               {"histogram", histogram_text(demo.histogram)}});
    if (d == 1)
      rep.check("home_sort_separated", demo.home_sort_separated, {{"x", fmt(demo.x)}});
  }

  rep.add(control_separation(OracleKind::RandomGraph, cfg.oracle.seed));
  rep.add(control_separation(OracleKind::PureSet, cfg.oracle.seed));
  return rep;
}

int exit_code_for(const Report& r) { return r.passed() ? kExitPass : kExitCheckFailed; }

}  // namespace freeact
