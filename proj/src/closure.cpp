#include "freeact/closure.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

namespace freeact {

namespace {

struct CodesHash {
  std::size_t operator()(const std::vector<PairCode>& v) const {
    std::uint64_t h = 1469598103934665603ull ^ v.size();
    for (PairCode c : v) h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::vector<Element> sorted_unique(std::span<const Element> s) {
  std::vector<Element> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string join_codes(const std::vector<PairCode>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::size_t OrbitPartition::class_of(const StructureOracle& oracle, std::span<const Element> t) const {
  std::vector<Element> full(base.begin(), base.end());
  full.insert(full.end(), t.begin(), t.end());
  const QfType q = oracle.qf_type(full);
  auto it = std::lower_bound(classes.begin(), classes.end(), q,
                             [](const OrbitClass& c, const QfType& k) { return c.type < k; });
  if (it == classes.end() || it->type != q) return npos;
  return static_cast<std::size_t>(it - classes.begin());
}

OrbitPartition orbit_partition(StructureOracle& oracle, std::span<const Element> base,
                               std::size_t arity, std::size_t level, TupleView view) {
  oracle.grow_to(level);
  const std::size_t count = oracle.size_at_level(level);
  for (Element e : base)
    if (e >= count) throw InvalidInput("base element " + std::to_string(e) + " not in window(level)");

  OrbitPartition part;
  part.base.assign(base.begin(), base.end());
  part.arity = arity;
  part.view = view;
  part.level = level;
  part.window_size = count;

  const std::size_t m = base.size() + arity;
  std::vector<Element> full(m);
  std::copy(base.begin(), base.end(), full.begin());
  std::vector<PairCode> key(m * (m ? m - 1 : 0) / 2);
  std::unordered_map<std::vector<PairCode>, std::size_t, CodesHash> index;
  std::vector<OrbitClass> classes;

  if (arity > 0 && count == 0) return part;
  std::vector<Element> t(arity, 0);
  while (true) {
    bool injective = true;
    if (view == TupleView::Injective)
      for (std::size_t i = 0; i < arity && injective; ++i)
        for (std::size_t j = i + 1; j < arity && injective; ++j) injective = t[i] != t[j];
    if (injective) {
      std::copy(t.begin(), t.end(), full.begin() + static_cast<std::ptrdiff_t>(base.size()));
      std::size_t k = 0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) key[k++] = oracle.pair_code(full[i], full[j]);
      auto [it, inserted] = index.try_emplace(key, classes.size());
      if (inserted) classes.push_back(OrbitClass{QfType(oracle.kind(), m, key), 0, t});
      ++classes[it->second].count;
      ++part.tuple_count;
    }
    // Odometer over window^arity, last position fastest.
    std::size_t pos = arity;
    while (pos > 0) {
      --pos;
      if (++t[pos] < count) break;
      t[pos] = 0;
      if (pos == 0) {
        pos = arity + 1;
        break;
      }
    }
    if (arity == 0 || pos == arity + 1) break;
  }
  std::sort(classes.begin(), classes.end(),
            [](const OrbitClass& a, const OrbitClass& b) { return a.type < b.type; });
  part.classes = std::move(classes);
  return part;
}

std::size_t ClassCertificate::growth_steps() const {
  std::size_t g = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] > sizes[i - 1]) ++g;
  return g;
}

namespace {

// Least tuple (in id-lexicographic order) with the type of t, or t itself
// when the search budget runs out.
std::vector<Element> least_realization(const StructureOracle& oracle, const std::vector<Element>& t,
                                       std::size_t budget = 200000) {
  std::vector<Element> cur;
  std::size_t nodes = 0;
  const std::size_t n = oracle.size();
  auto dfs = [&](auto&& self) -> bool {
    const std::size_t i = cur.size();
    if (i == t.size()) return true;
    for (Element y = 0; y < n; ++y) {
      if (nodes++ >= budget) return false;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = oracle.pair_code(cur[j], y) == oracle.pair_code(t[j], t[i]);
      if (!ok) continue;
      cur.push_back(y);
      if (self(self)) return true;
      cur.pop_back();
      if (nodes >= budget) return false;
    }
    return false;
  };
  if (dfs(dfs)) return cur;
  return t;
}

std::size_t start_level_for(const StructureOracle& oracle, const std::vector<Element>& probe) {
  std::size_t start = oracle.params().level;
  for (Element e : probe) start = std::max(start, oracle.level_containing(e));
  return start;
}

AclResult acl_impl(StructureOracle& oracle, std::span<const Element> base,
                   std::optional<std::size_t> budget_level) {
  AclResult r;
  r.base = sorted_unique(base);
  for (Element e : r.base)
    if (!oracle.contains(e)) throw InvalidInput("element not in window: " + std::to_string(e));
  r.probe_base = least_realization(oracle, r.base);
  const std::size_t start = start_level_for(oracle, r.probe_base);
  std::size_t level_max = start;
  if (budget_level)
    level_max = *budget_level;
  else
    for (int i = 0; i < 4; ++i) level_max = oracle.next_probe_level(level_max);
  r.start_level = start;
  r.final_level = start;
  r.members = r.base;
  if (start > level_max) {
    r.note = "start level exceeds level_max";
    return r;
  }
  try {
    oracle.grow_to(start);
  } catch (const ResourceLimit& e) {
    r.note = e.what();
    return r;
  }

  const std::vector<Element>& E = r.probe_base;
  auto profile_of = [&](Element x, std::vector<PairCode>& out) {
    out.resize(E.size());
    for (std::size_t j = 0; j < E.size(); ++j) out[j] = oracle.pair_code(E[j], x);
  };
  auto in_base = [&](Element x) { return std::find(E.begin(), E.end(), x) != E.end(); };

  std::unordered_map<std::vector<PairCode>, std::size_t, CodesHash> index;
  std::vector<std::vector<Element>> members_by_class;
  std::vector<PairCode> buf;
  const std::size_t n0 = oracle.size_at_level(start);
  for (Element x = 0; x < n0; ++x) {
    if (in_base(x)) continue;
    profile_of(x, buf);
    auto [it, inserted] = index.try_emplace(buf, r.classes.size());
    if (inserted) {
      ClassCertificate c;
      c.profile = buf;
      c.representative = x;
      r.classes.push_back(std::move(c));
      members_by_class.emplace_back();
    }
    members_by_class[it->second].push_back(x);
  }

  auto record = [&](std::size_t lvl) {
    std::vector<std::size_t> sizes(r.classes.size(), 0);
    const std::size_t n = oracle.size_at_level(lvl);
    for (Element y = 0; y < n; ++y) {
      if (in_base(y)) continue;
      profile_of(y, buf);
      auto it = index.find(buf);
      if (it != index.end()) ++sizes[it->second];
    }
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      auto& c = r.classes[i];
      if (c.verdict != ClassCertificate::Verdict::Undecided) continue;
      c.levels.push_back(lvl);
      c.sizes.push_back(sizes[i]);
      const std::size_t k = c.sizes.size();
      if (c.growth_steps() >= 2) {
        c.verdict = ClassCertificate::Verdict::Infinite;
        c.decided_at = lvl;
      } else if (k >= 3 && c.sizes[k - 1] == c.sizes[k - 2] && c.sizes[k - 2] == c.sizes[k - 3]) {
        c.verdict = ClassCertificate::Verdict::Finite;
        c.decided_at = lvl;
      }
    }
  };
  auto undecided = [&] {
    return std::any_of(r.classes.begin(), r.classes.end(), [](const ClassCertificate& c) {
      return c.verdict == ClassCertificate::Verdict::Undecided;
    });
  };

  std::size_t lvl = start;
  record(lvl);
  while (undecided()) {
    const std::size_t next = oracle.next_probe_level(lvl);
    if (next > level_max) {
      r.note = "level_max reached before every class was decided";
      break;
    }
    try {
      oracle.grow_to(next);
    } catch (const ResourceLimit& e) {
      r.note = e.what();
      break;
    }
    lvl = next;
    record(lvl);
  }
  r.final_level = lvl;
  // Members of finite classes over the probed tuple correspond to elements
  // with the same profile over the original base.
  std::vector<std::vector<PairCode>> finite;
  for (std::size_t i = 0; i < r.classes.size(); ++i)
    if (r.classes[i].verdict == ClassCertificate::Verdict::Finite) {
      if (r.probe_base == r.base)
        r.members.insert(r.members.end(), members_by_class[i].begin(), members_by_class[i].end());
      else
        finite.push_back(r.classes[i].profile);
    }
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    std::vector<PairCode> prof(r.base.size());
    for (Element y = 0; y < oracle.size(); ++y) {
      if (std::binary_search(r.base.begin(), r.base.end(), y)) continue;
      for (std::size_t j = 0; j < r.base.size(); ++j) prof[j] = oracle.pair_code(r.base[j], y);
      if (std::binary_search(finite.begin(), finite.end(), prof)) r.members.push_back(y);
    }
  }
  std::sort(r.members.begin(), r.members.end());
  r.status = undecided() ? AclStatus::Indeterminate : AclStatus::Certified;
  return r;
}

}  // namespace

AclResult acl(StructureOracle& oracle, std::span<const Element> base, std::size_t level_max) {
  return acl_impl(oracle, base, level_max);
}

AclResult acl(StructureOracle& oracle, std::span<const Element> base) {
  return acl_impl(oracle, base, std::nullopt);
}

NoAlgebraicityReport assert_no_algebraicity(StructureOracle& oracle, std::size_t sample_size,
                                            std::size_t level, std::uint64_t seed,
                                            std::size_t max_base) {
  NoAlgebraicityReport rep;
  rep.kind = oracle.kind();
  rep.level = level;
  oracle.grow_to(level);
  const std::size_t count = oracle.size_at_level(level);
  std::mt19937_64 rng(seed);
  rep.passed = true;
  rep.min_growth_steps = static_cast<std::size_t>(-1);
  for (std::size_t s = 0; s < sample_size; ++s) {
    AlgebraicitySample sample;
    std::size_t want = s == 0 ? 0 : static_cast<std::size_t>(rng() % (max_base + 1));
    want = std::min(want, count);
    while (sample.base.size() < want) {
      const Element e = static_cast<Element>(rng() % count);
      if (std::find(sample.base.begin(), sample.base.end(), e) == sample.base.end())
        sample.base.push_back(e);
    }
    sample.result = acl(oracle, sample.base);
    std::vector<Element> expect = sorted_unique(sample.base);
    sample.passed = sample.result.certified() && sample.result.members == expect;
    std::ostringstream detail;
    for (const auto& c : sample.result.classes) {
      if (c.verdict == ClassCertificate::Verdict::Infinite)
        rep.min_growth_steps = std::min(rep.min_growth_steps, c.growth_steps());
      if (c.verdict == ClassCertificate::Verdict::Infinite) continue;
      detail << (c.verdict == ClassCertificate::Verdict::Finite ? "finite" : "undecided")
             << " class rep=" << c.representative << " profile=[" << join_codes(c.profile)
             << "] size=" << (c.sizes.empty() ? 0 : c.sizes.back()) << "; ";
    }
    if (!sample.result.note.empty()) detail << sample.result.note;
    sample.detail = detail.str();
    rep.passed = rep.passed && sample.passed;
    rep.samples.push_back(std::move(sample));
  }
  if (rep.min_growth_steps == static_cast<std::size_t>(-1)) rep.min_growth_steps = 0;
  return rep;
}

ClosureCertificate certify_closed(StructureOracle& oracle, std::span<const Element> set,
                                  bool oracle_certified, std::size_t probe_max_size) {
  ClosureCertificate cert;
  std::vector<Element> s = sorted_unique(set);
  bool probe = s.size() <= probe_max_size;
  for (Element e : s) {
    if (!oracle.contains(e)) throw InvalidInput("element not in window: " + std::to_string(e));
  }
  if (probe) {
    AclResult r = acl(oracle, s);
    cert.basis = ClosureCertificate::Basis::Probed;
    cert.closed = r.certified() && r.members == s;
    cert.note = r.certified() ? "probed" : "indeterminate: " + r.note;
    return cert;
  }
  cert.basis = ClosureCertificate::Basis::Structural;
  cert.closed = oracle_certified;
  cert.note = oracle_certified ? "oracle certified without algebraicity"
                               : "oracle not certified without algebraicity";
  return cert;
}

}  // namespace freeact
