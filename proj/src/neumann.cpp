#include "freeact/neumann.hpp"

#include <algorithm>
#include <unordered_set>

namespace freeact {

namespace {

std::vector<Element> sorted_unique(std::span<const Element> s) {
  std::vector<Element> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains_sorted(const std::vector<Element>& v, Element x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Depth-first search for the id-lexicographically least image tuple.
class WindowSearch {
 public:
  WindowSearch(const StructureOracle& oracle, std::vector<Element> dst_base,
               const std::vector<std::vector<PairCode>>& req,
               const std::unordered_set<Element>& avoid, std::size_t budget)
      : oracle_(oracle), full_(std::move(dst_base)), req_(req), avoid_(avoid), budget_(budget) {}

  std::optional<std::vector<Element>> run() {
    base_size_ = full_.size();
    n_ = oracle_.size();
    if (dfs(0)) return std::vector<Element>(full_.begin() + static_cast<std::ptrdiff_t>(base_size_), full_.end());
    return std::nullopt;
  }
  std::size_t nodes() const { return nodes_; }

 private:
  bool dfs(std::size_t i) {
    if (i == req_.size()) return true;
    const auto& want = req_[i];
    for (Element y = 0; y < n_; ++y) {
      if (nodes_++ >= budget_) return false;
      if (avoid_.count(y)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < want.size() && ok; ++j) ok = oracle_.pair_code(full_[j], y) == want[j];
      if (!ok) continue;
      full_.push_back(y);
      if (dfs(i + 1)) return true;
      full_.pop_back();
      if (nodes_ >= budget_) return false;
    }
    return false;
  }

  const StructureOracle& oracle_;
  std::vector<Element> full_;
  const std::vector<std::vector<PairCode>>& req_;
  const std::unordered_set<Element>& avoid_;
  std::size_t budget_;
  std::size_t base_size_ = 0;
  std::size_t n_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace

FreshImage find_fresh_image(StructureOracle& oracle, std::span<const Element> src_base,
                            std::span<const Element> dst_base, std::span<const Element> points,
                            std::span<const Element> avoid, const SearchPolicy& policy,
                            bool check_bases) {
  if (src_base.size() != dst_base.size())
    throw InvalidInput("fresh image: bases differ in length");
  for (auto* s : {&src_base, &dst_base, &points, &avoid})
    for (Element e : *s)
      if (!oracle.contains(e)) throw InvalidInput("element not in window: " + std::to_string(e));
  if (check_bases && oracle.qf_type(src_base) != oracle.qf_type(dst_base))
    throw InvalidInput("fresh image: bases have different types");

  std::vector<Element> src(src_base.begin(), src_base.end());
  src.insert(src.end(), points.begin(), points.end());
  std::vector<std::vector<PairCode>> req(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t pos = src_base.size() + i;
    for (std::size_t j = 0; j < pos; ++j) {
      const PairCode c = oracle.pair_code(src[j], src[pos]);
      if (c == 0) throw InvalidInput("fresh image: points repeat or meet the base");
      req[i].push_back(c);
    }
  }
  std::unordered_set<Element> avoid_set(avoid.begin(), avoid.end());
  std::vector<Element> dst(dst_base.begin(), dst_base.end());

  std::size_t level_cap = oracle.params().level;
  for (std::size_t i = 0; i < policy.grow_steps; ++i) level_cap = oracle.next_probe_level(level_cap);

  FreshImage out;
  while (true) {
    WindowSearch search(oracle, dst, req, avoid_set, policy.node_budget);
    auto found = search.run();
    out.nodes += search.nodes();
    if (found) {
      out.points = std::move(*found);
      out.level = oracle.level();
      return out;
    }
    if (oracle.level() >= level_cap) break;
    try {
      oracle.grow_to(oracle.next_probe_level(oracle.level()));
    } catch (const ResourceLimit&) {
      break;
    }
  }
  if (!policy.allow_construct)
    throw ResourceLimit("separation search budget exhausted at level " + std::to_string(oracle.level()));

  // Greedy completion: each prefix of a realizable tuple extends in the limit.
  const std::size_t before = oracle.size();
  std::vector<Element> avoid_vec(avoid_set.begin(), avoid_set.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Element y = oracle.realize_profile(dst, req[i], avoid_vec);
    dst.push_back(y);
    out.points.push_back(y);
  }
  out.level = oracle.level();
  out.constructed = oracle.size() > before;
  return out;
}

Separator::Separator(StructureOracle& oracle, SearchPolicy policy)
    : oracle_(oracle), policy_(policy) {}

bool Separator::oracle_certified() {
  if (!certified_) {
    const NoAlgebraicityReport rep =
        assert_no_algebraicity(oracle_, 8, oracle_.params().level, oracle_.params().seed, 2);
    certified_ = rep.passed;
  }
  return *certified_;
}

void Separator::require_closed(std::span<const Element> set, const std::string& what) {
  const ClosureCertificate c = certify_closed(oracle_, set, oracle_certified());
  if (!c.closed) throw CertificationFailure(what + " is not certified acl-closed (" + c.note + ")");
}

SeparationWitness Separator::separate(std::span<const Element> A, std::span<const Element> B) {
  if (!oracle_certified()) throw CertificationFailure("acl of the empty set is not certified empty");
  SeparationWitness w;
  w.moved_set = sorted_unique(A);
  w.avoided_set = sorted_unique(B);
  const FreshImage img = find_fresh_image(oracle_, {}, {}, w.moved_set, w.avoided_set, policy_);
  w.mover = PartialAutomorphism(w.moved_set, img.points);
  w.level = img.level;
  w.constructed = img.constructed;
  return w;
}

SeparationWitness Separator::separate_over(std::span<const Element> A, std::span<const Element> B,
                                           std::span<const Element> C) {
  SeparationWitness w;
  w.fixed_base = sorted_unique(B);
  w.moved_set = sorted_unique(C);
  w.avoided_set = sorted_unique(A);
  for (Element b : w.fixed_base)
    if (!contains_sorted(w.moved_set, b)) throw InvalidInput("separate_over: B is not contained in C");
  require_closed(w.avoided_set, "A");
  require_closed(w.fixed_base, "B");
  require_closed(w.moved_set, "C");

  std::vector<Element> rest;
  for (Element c : w.moved_set)
    if (!contains_sorted(w.fixed_base, c)) rest.push_back(c);
  std::vector<Element> avoid = w.avoided_set;
  avoid.insert(avoid.end(), w.fixed_base.begin(), w.fixed_base.end());
  const FreshImage img = find_fresh_image(oracle_, w.fixed_base, w.fixed_base, rest, avoid, policy_);

  w.mover = PartialAutomorphism::identity(w.fixed_base);
  for (std::size_t i = 0; i < rest.size(); ++i) w.mover.extend(rest[i], img.points[i]);
  w.level = img.level;
  w.constructed = img.constructed;
  return w;
}

SeparationWitness separate(StructureOracle& oracle, std::span<const Element> A,
                           std::span<const Element> B, const SearchPolicy& policy) {
  return Separator(oracle, policy).separate(A, B);
}

SeparationWitness separate_over(StructureOracle& oracle, std::span<const Element> A,
                                std::span<const Element> B, std::span<const Element> C,
                                const SearchPolicy& policy) {
  return Separator(oracle, policy).separate_over(A, B, C);
}

WitnessCheck recheck_witness(const StructureOracle& oracle, const SeparationWitness& w) {
  WitnessCheck r;
  for (Element b : w.fixed_base) {
    auto y = w.mover.apply(b);
    if (!y || *y != b) {
      r.reason = "base point " + std::to_string(b) + " not fixed";
      return r;
    }
  }
  if (sorted_unique(w.mover.domain()) != w.moved_set) {
    r.reason = "mover domain differs from the moved set";
    return r;
  }
  for (Element y : w.mover.image())
    if (!oracle.contains(y)) {
      r.reason = "image point " + std::to_string(y) + " outside the window";
      return r;
    }
  if (auto bad = w.mover.type_violation(oracle)) {
    r.reason = "pair (" + std::to_string(bad->first) + "," + std::to_string(bad->second) +
               ") changes type";
    return r;
  }
  std::vector<Element> meet;
  for (Element y : sorted_unique(w.mover.image()))
    if (contains_sorted(w.avoided_set, y)) meet.push_back(y);
  std::vector<Element> allowed;
  for (Element b : w.fixed_base)
    if (contains_sorted(w.avoided_set, b)) allowed.push_back(b);
  if (meet != allowed) {
    r.reason = "image meets the avoided set outside the base";
    return r;
  }
  r.ok = true;
  return r;
}

}  // namespace freeact
