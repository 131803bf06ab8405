#include "freeact/freepair.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace freeact {

namespace {

std::vector<Element> sorted_unique(std::vector<Element> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains_sorted(const std::vector<Element>& v, Element x) {
  return std::binary_search(v.begin(), v.end(), x);
}

constexpr Letter kLetters[] = {Letter::A, Letter::AInv, Letter::B, Letter::BInv};

}  // namespace

Letter inverse(Letter l) { return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1u); }

char letter_char(Letter l) {
  switch (l) {
    case Letter::A: return 'a';
    case Letter::AInv: return 'A';
    case Letter::B: return 'b';
    case Letter::BInv: return 'B';
  }
  return '?';
}

ReducedWord ReducedWord::make(std::vector<Letter> letters) {
  if (letters.empty()) throw InvalidInput("reduced word must have length >= 1");
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i + 1] == inverse(letters[i]))
      throw InvalidInput("word is not reduced at position " + std::to_string(i));
  ReducedWord w;
  w.letters_ = std::move(letters);
  return w;
}

ReducedWord ReducedWord::parse(std::string_view text) {
  std::vector<Letter> letters;
  for (char c : text) {
    switch (c) {
      case 'a': letters.push_back(Letter::A); break;
      case 'A': letters.push_back(Letter::AInv); break;
      case 'b': letters.push_back(Letter::B); break;
      case 'B': letters.push_back(Letter::BInv); break;
      default: throw InvalidInput(std::string("bad letter '") + c + "' in word");
    }
  }
  return make(std::move(letters));
}

std::string ReducedWord::to_string() const {
  std::string s;
  for (Letter l : letters_) s += letter_char(l);
  return s;
}

std::size_t reduced_word_count(std::size_t L) {
  std::size_t total = 0, layer = 4;
  for (std::size_t l = 1; l <= L; ++l, layer *= 3) total += layer;
  return total;
}

std::vector<ReducedWord> reduced_words(std::size_t L) {
  std::vector<ReducedWord> out;
  out.reserve(reduced_word_count(L));
  if (L == 0) return out;
  for (Letter l : kLetters) out.push_back(ReducedWord::make({l}));
  std::size_t begin = 0;
  for (std::size_t len = 2; len <= L; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Letter l : kLetters) {
        if (l == inverse(out[i].letters().back())) continue;
        std::vector<Letter> next = out[i].letters();
        next.push_back(l);
        out.push_back(ReducedWord::make(std::move(next)));
      }
    begin = end;
  }
  return out;
}

std::optional<Element> apply_letter(Letter l, const FreePair& pair, Element x) {
  switch (l) {
    case Letter::A: return pair.phi.apply(x);
    case Letter::AInv: return pair.phi.apply_inverse(x);
    case Letter::B: return pair.gamma.apply(x);
    case Letter::BInv: return pair.gamma.apply_inverse(x);
  }
  return std::nullopt;
}

std::optional<Element> apply_word(const ReducedWord& w, const FreePair& pair, Element x) {
  std::optional<Element> cur = x;
  for (auto it = w.letters().rbegin(); it != w.letters().rend() && cur; ++it)
    cur = apply_letter(*it, pair, *cur);
  return cur;
}

std::optional<Element> apply_word(const ReducedWord& w, const PartialAutomorphism& phi,
                                  const PartialAutomorphism& gamma, Element x) {
  std::optional<Element> cur = x;
  for (auto it = w.letters().rbegin(); it != w.letters().rend() && cur; ++it) {
    switch (*it) {
      case Letter::A: cur = phi.apply(*cur); break;
      case Letter::AInv: cur = phi.apply_inverse(*cur); break;
      case Letter::B: cur = gamma.apply(*cur); break;
      case Letter::BInv: cur = gamma.apply_inverse(*cur); break;
    }
  }
  return cur;
}

FixedPointReport check_fixed_points(const FreePair& pair, std::size_t L,
                                    std::span<const Element> window, std::size_t max_report) {
  FixedPointReport rep;
  rep.max_length = L;
  rep.words = reduced_word_count(L);
  rep.points = window.size();
  rep.evaluations = rep.words * rep.points;
  if (L == 0) return rep;

  // Every defined evaluation of a reduced word at x is a non-backtracking
  // walk from x, so walking the tree of letter sequences visits each
  // (word, x) with a defined value exactly once. Letters are applied
  // right to left, so the walk's letter sequence is the word reversed.
  std::vector<Letter> applied;
  std::vector<Element> points;
  for (Element x : window) {
    applied.clear();
    points.assign(1, x);
    std::vector<std::uint8_t> next(1, 0);
    while (!next.empty()) {
      const std::size_t depth = next.size() - 1;
      if (next.back() == 4 || depth == L) {
        next.pop_back();
        if (!applied.empty()) {
          applied.pop_back();
          points.pop_back();
        }
        continue;
      }
      const Letter l = kLetters[next.back()++];
      if (!applied.empty() && l == inverse(applied.back())) continue;
      auto y = apply_letter(l, pair, points.back());
      if (!y) continue;
      ++rep.defined;
      applied.push_back(l);
      points.push_back(*y);
      if (*y == x && rep.violation_count++ < max_report)
        rep.violations.push_back(
            FixedPointViolation{ReducedWord::make(std::vector<Letter>(applied.rbegin(), applied.rend())), x});
      next.push_back(0);
    }
  }
  return rep;
}

std::string_view to_string(Side s) { return s == Side::Phi ? "phi" : "gamma"; }
std::string_view to_string(Direction d) { return d == Direction::Domain ? "domain" : "image"; }

FreshnessLedger freshness_ledger(const FreePair& final_pair, const ExtensionRecord& rec) {
  const PartialAutomorphism& chosen = rec.side == Side::Phi ? final_pair.phi : final_pair.gamma;
  const PartialAutomorphism& other = rec.side == Side::Phi ? final_pair.gamma : final_pair.phi;
  const std::size_t before = rec.side == Side::Phi ? rec.phi_before : rec.gamma_before;
  const std::size_t other_before = rec.side == Side::Phi ? rec.gamma_before : rec.phi_before;
  if (rec.after > chosen.size() || before > rec.after || other_before > other.size())
    throw InvalidInput("step record does not fit the pair");

  const bool dom = rec.direction == Direction::Domain;
  const auto& src = dom ? chosen.domain() : chosen.image();
  const auto& dst = dom ? chosen.image() : chosen.domain();
  auto prefix = [](const std::vector<Element>& v, std::size_t n) {
    return sorted_unique(std::vector<Element>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)));
  };
  FreshnessLedger f;
  f.A = prefix(src, before);
  f.B = prefix(dst, before);
  f.C = prefix(src, rec.after);
  f.D = prefix(dst, rec.after);
  f.A_other = prefix(other.domain(), other_before);
  f.B_other = prefix(other.image(), other_before);

  std::vector<Element> tracked = f.C;
  tracked.insert(tracked.end(), f.B.begin(), f.B.end());
  tracked.insert(tracked.end(), f.A_other.begin(), f.A_other.end());
  tracked.insert(tracked.end(), f.B_other.begin(), f.B_other.end());
  tracked = sorted_unique(std::move(tracked));
  std::vector<Element> meet;
  std::set_intersection(f.D.begin(), f.D.end(), tracked.begin(), tracked.end(), std::back_inserter(meet));
  f.holds = meet == f.B;
  return f;
}

FreePairBuilder::FreePairBuilder(StructureOracle& oracle, BuilderConfig config)
    : oracle_(oracle), config_(config), separator_(oracle, config.policy) {
  if (!separator_.oracle_certified())
    throw CertificationFailure("acl of the empty set is not certified empty");
  const Element p = 0;
  const std::vector<Element> P{p};
  const SeparationWitness wq = separator_.separate(P, P);
  const Element q = wq.mover.image().front();
  Element r = 0;
  while (r == p || r == q) ++r;
  const std::vector<Element> R{r}, used{p, q, r};
  const SeparationWitness ws = separator_.separate(R, used);
  const Element s = ws.mover.image().front();
  pair_.phi.extend(p, q);
  pair_.gamma.extend(r, s);

  const std::vector<Element> pts = covered_points(pair_);
  if (pts.size() != 4) throw std::logic_error("initial domains and images are not disjoint");
  if (!check_fixed_points(pair_, config_.cert_depth, pts).clean())
    throw std::logic_error("initial pair has a fixed point");
  certified_length_ = config_.cert_depth;
}

FreePairBuilder::FreePairBuilder(StructureOracle& oracle, BuilderConfig config, FreePair pair,
                                 std::vector<ExtensionRecord> steps)
    : oracle_(oracle),
      config_(config),
      separator_(oracle, config.policy),
      pair_(std::move(pair)),
      steps_(std::move(steps)),
      certified_length_(config.cert_depth) {}

void FreePairBuilder::extend_step(Side side, Direction dir, std::span<const Element> target) {
  PartialAutomorphism& m = map_of(side);
  const PartialAutomorphism& other = map_of(side == Side::Phi ? Side::Gamma : Side::Phi);
  const bool dom = dir == Direction::Domain;
  const std::vector<Element>& A = dom ? m.domain() : m.image();
  const std::vector<Element>& B = dom ? m.image() : m.domain();

  std::vector<Element> C = sorted_unique(std::vector<Element>(target.begin(), target.end()));
  for (Element e : C)
    if (!oracle_.contains(e)) throw InvalidInput("target element not in window: " + std::to_string(e));
  const std::vector<Element> A_sorted = sorted_unique(A);
  for (Element a : A_sorted)
    if (!contains_sorted(C, a)) throw InvalidInput("target does not contain the current set");
  std::vector<Element> fresh_src;
  for (Element c : C)
    if (!contains_sorted(A_sorted, c)) fresh_src.push_back(c);
  if (fresh_src.empty()) return;
  separator_.require_closed(C, "extension target");

  std::vector<Element> avoid = C;
  avoid.insert(avoid.end(), B.begin(), B.end());
  avoid.insert(avoid.end(), other.domain().begin(), other.domain().end());
  avoid.insert(avoid.end(), other.image().begin(), other.image().end());
  const FreshImage img = find_fresh_image(oracle_, A, B, fresh_src, avoid, config_.policy, false);

  ExtensionRecord rec;
  rec.side = side;
  rec.direction = dir;
  rec.phi_before = pair_.phi.size();
  rec.gamma_before = pair_.gamma.size();
  const std::size_t before = m.size();
  for (std::size_t i = 0; i < fresh_src.size(); ++i) {
    if (dom)
      m.extend(fresh_src[i], img.points[i]);
    else
      m.extend(img.points[i], fresh_src[i]);
  }
  rec.after = m.size();
  rec.level = oracle_.level();
  rec.constructed = img.constructed;
  steps_.push_back(rec);
  if (!freshness_ledger(pair_, rec).holds) throw std::logic_error("freshness ledger violated");
  verify_step(side, before);
}

void FreePairBuilder::verify_step(Side side, std::size_t before) {
  const PartialAutomorphism& m = map_of(side);
  const auto& dom = m.domain();
  const auto& img = m.image();
  for (std::size_t i = before; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (oracle_.pair_code(dom[j], dom[i]) != oracle_.pair_code(img[j], img[i]))
        throw std::logic_error("extension does not preserve types");

  // A new fixed point lies on a closed reduced walk of length <= L through a
  // new edge, hence within L/2 steps of one of its endpoints.
  const std::size_t L = config_.cert_depth;
  std::unordered_map<Element, std::size_t> dist;
  std::deque<Element> queue;
  for (std::size_t i = before; i < m.size(); ++i)
    for (Element e : {dom[i], img[i]})
      if (dist.emplace(e, 0).second) queue.push_back(e);
  while (!queue.empty()) {
    const Element u = queue.front();
    queue.pop_front();
    const std::size_t d = dist[u];
    if (d >= L / 2 + 1) continue;
    for (Letter l : kLetters)
      if (auto v = apply_letter(l, pair_, u))
        if (dist.emplace(*v, d + 1).second) queue.push_back(*v);
  }
  std::vector<Element> starts;
  starts.reserve(dist.size());
  for (const auto& [e, d] : dist) starts.push_back(e);
  std::sort(starts.begin(), starts.end());
  if (!check_fixed_points(pair_, L, starts, 1).clean())
    throw std::logic_error("extension created a fixed point");
  certified_length_ = L;
}

void FreePairBuilder::run_rounds(std::size_t rounds) {
  const std::pair<Side, Direction> phases[] = {{Side::Phi, Direction::Domain},
                                               {Side::Phi, Direction::Image},
                                               {Side::Gamma, Direction::Domain},
                                               {Side::Gamma, Direction::Image}};
  for (std::size_t round = 0; round < rounds; ++round)
    for (const auto& [side, dir] : phases) {
      const PartialAutomorphism& m = map_of(side);
      const std::vector<Element>& cur = dir == Direction::Domain ? m.domain() : m.image();
      const std::vector<Element> covered = sorted_unique(cur);
      Element x = 0;
      while (contains_sorted(covered, x)) ++x;
      if (!oracle_.contains(x)) oracle_.grow_to(oracle_.next_probe_level(oracle_.level()));
      const std::vector<Element> single{x};
      const AclResult closure = acl(oracle_, single);
      if (!closure.certified()) throw CertificationFailure("acl of " + std::to_string(x) + " is indeterminate");
      std::vector<Element> target = cur;
      target.insert(target.end(), closure.members.begin(), closure.members.end());
      extend_step(side, dir, target);
    }
}

void FreePairBuilder::extend_for_ball(Element base, std::size_t r) {
  struct Node {
    Element point;
    std::optional<Letter> arrived;
    std::size_t depth;
  };
  std::deque<Node> queue{{base, std::nullopt, 0}};
  while (!queue.empty()) {
    const Node n = queue.front();
    queue.pop_front();
    if (n.depth >= r) continue;
    for (Letter l : kLetters) {
      if (n.arrived && l == inverse(*n.arrived)) continue;
      if (!apply_letter(l, pair_, n.point)) {
        const Side side = (l == Letter::A || l == Letter::AInv) ? Side::Phi : Side::Gamma;
        const Direction dir = (l == Letter::A || l == Letter::B) ? Direction::Domain : Direction::Image;
        const PartialAutomorphism& m = map_of(side);
        std::vector<Element> target = dir == Direction::Domain ? m.domain() : m.image();
        target.push_back(n.point);
        extend_step(side, dir, target);
      }
      queue.push_back(Node{*apply_letter(l, pair_, n.point), l, n.depth + 1});
    }
  }
}

BuildResult build(StructureOracle& oracle, std::size_t rounds, std::size_t cert_depth,
                  const SearchPolicy& policy) {
  FreePairBuilder builder(oracle, BuilderConfig{cert_depth, policy});
  builder.run_rounds(rounds);
  BuildResult out;
  out.pair = builder.pair();
  out.steps = builder.steps();
  std::vector<Element> window(oracle.size());
  std::iota(window.begin(), window.end(), Element{0});
  out.fixed_points = check_fixed_points(out.pair, cert_depth, window);
  return out;
}

std::vector<Element> covered_points(const FreePair& pair) {
  std::vector<Element> v;
  for (const PartialAutomorphism* m : {&pair.phi, &pair.gamma}) {
    v.insert(v.end(), m->domain().begin(), m->domain().end());
    v.insert(v.end(), m->image().begin(), m->image().end());
  }
  return sorted_unique(std::move(v));
}

SchreierBall schreier_ball(const FreePair& pair, Element base, std::size_t r) {
  SchreierBall ball;
  ball.base = base;
  ball.radius = r;
  ball.complete = true;

  struct Node {
    Element point;
    std::optional<Letter> arrived;
    std::size_t depth;
  };
  std::unordered_map<Element, std::size_t> index;
  std::vector<std::size_t> parent;
  auto vertex = [&](Element v) {
    auto [it, inserted] = index.emplace(v, ball.vertices.size());
    if (inserted) {
      ball.vertices.push_back(v);
      parent.push_back(parent.size());
    }
    return it->second;
  };
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  struct EdgeKey {
    Element from, to;
    Letter letter;
    bool operator==(const EdgeKey&) const = default;
  };
  struct EdgeHash {
    std::size_t operator()(const EdgeKey& e) const {
      return (std::uint64_t{e.from} * 0x9e3779b97f4a7c15ull) ^ (std::uint64_t{e.to} << 2) ^
             static_cast<std::uint64_t>(e.letter);
    }
  };
  std::unordered_set<EdgeKey, EdgeHash> seen_edges;
  ball.acyclic = true;

  vertex(base);
  std::deque<Node> queue{{base, std::nullopt, 0}};
  while (!queue.empty()) {
    const Node n = queue.front();
    queue.pop_front();
    ++ball.walk_nodes;
    if (n.depth >= r) continue;
    for (Letter l : kLetters) {
      if (n.arrived && l == inverse(*n.arrived)) continue;
      auto y = apply_letter(l, pair, n.point);
      if (!y) {
        ball.complete = false;
        continue;
      }
      // Store each edge in its positive orientation.
      EdgeKey key = (l == Letter::A || l == Letter::B) ? EdgeKey{n.point, *y, l}
                                                       : EdgeKey{*y, n.point, inverse(l)};
      const std::size_t iu = vertex(n.point), iv = vertex(*y);
      if (seen_edges.insert(key).second) {
        ball.edges.push_back(SchreierEdge{key.from, key.to, key.letter});
        const std::size_t ru = find(iu), rv = find(iv);
        if (ru == rv)
          ball.acyclic = false;
        else
          parent[ru] = rv;
      }
      queue.push_back(Node{*y, l, n.depth + 1});
    }
  }
  return ball;
}

SchreierBall schreier_ball(FreePairBuilder& builder, Element base, std::size_t r) {
  builder.extend_for_ball(base, r);
  return schreier_ball(builder.pair(), base, r);
}

namespace {

void require_tower(const StructureOracle& oracle) {
  if (oracle.kind() != OracleKind::EquivTower)
    throw InvalidInput("imaginary classes are defined for the equivalence tower only");
}

// Least n with E_n(x, y); 64 when none of the representable relations hold.
std::size_t least_agreeing_index(PairCode code) {
  std::uint64_t mask = code == 0 ? 0 : code >> 1;
  std::size_t n = 1;
  while ((mask & 1) && n < 64) {
    mask >>= 1;
    ++n;
  }
  return n;
}

}  // namespace

bool same_class(const StructureOracle& oracle, const ImaginaryClass& a, const ImaginaryClass& b) {
  require_tower(oracle);
  if (a.n != b.n || a.n == 0) return false;
  const PairCode code = oracle.pair_code(a.representative, b.representative);
  if (code == 0) return true;
  return a.n > 63 || ((code >> a.n) & 1) == 0;
}

ImaginaryClass tower_fixed_class(const StructureOracle& oracle, const PartialAutomorphism& f,
                                 Element x) {
  require_tower(oracle);
  auto y = f.apply(x);
  if (!y) throw InvalidInput("point " + std::to_string(x) + " is not in the domain");
  return ImaginaryClass{least_agreeing_index(oracle.pair_code(x, *y)), x};
}

TowerDemoReport tower_neumann_failure_demo(StructureOracle& oracle, Element x, std::size_t depth,
                                           std::size_t budget) {
  require_tower(oracle);
  oracle.grow_to(depth);
  if (!oracle.contains(x)) throw InvalidInput("point " + std::to_string(x) + " is not in the window");
  TowerDemoReport rep;
  rep.x = x;
  rep.depth = depth;
  rep.histogram.assign(65, 0);
  const std::size_t count = oracle.size_at_level(depth);
  for (Element y = 0; y < count; ++y) {
    if (rep.candidates >= budget) break;
    ++rep.candidates;
    const std::vector<Element> d{x}, im{y};
    const PartialAutomorphism g(d, im);
    const ImaginaryClass c = tower_fixed_class(oracle, g, x);
    if (c.n >= 64) {
      ++rep.separated;
      continue;
    }
    ++rep.histogram[c.n];
    rep.max_fixed_index = std::max(rep.max_fixed_index, c.n);
  }
  rep.exhaustive = rep.candidates == count;
  while (rep.histogram.size() > 1 && rep.histogram.back() == 0) rep.histogram.pop_back();

  Separator sep(oracle);
  const std::vector<Element> X{x};
  const SeparationWitness w = sep.separate(X, X);
  rep.home_sort_separated = recheck_witness(oracle, w).ok;
  return rep;
}

}  // namespace freeact
