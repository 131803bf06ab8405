#include "freeact/structures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace freeact {

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::RandomGraph:
      return "random-graph";
    case OracleKind::DenseLinearOrder:
      return "dlo";
    case OracleKind::EquivTower:
      return "equiv-tower";
    case OracleKind::PureSet:
      return "pure-set";
  }
  return "?";
}

std::optional<OracleKind> parse_oracle_kind(std::string_view name) {
  if (name == "random-graph" || name == "RandomGraph") return OracleKind::RandomGraph;
  if (name == "dlo" || name == "DenseLinearOrder") return OracleKind::DenseLinearOrder;
  if (name == "equiv-tower" || name == "EquivTower") return OracleKind::EquivTower;
  if (name == "pure-set" || name == "PureSet") return OracleKind::PureSet;
  return std::nullopt;
}

std::size_t default_level(OracleKind kind) {
  switch (kind) {
    case OracleKind::RandomGraph:
      return 2;
    case OracleKind::DenseLinearOrder:
      return 31;
    case OracleKind::EquivTower:
      return 2;
    case OracleKind::PureSet:
      return 30;
  }
  return 0;
}

PairCode swap_pair_code(OracleKind kind, PairCode code) {
  if (kind == OracleKind::DenseLinearOrder && code != 0) return code == 1 ? 2 : 1;
  return code;
}

// ---------------------------------------------------------------------------
// QfType

QfType::QfType(OracleKind kind, std::size_t arity, std::vector<PairCode> codes)
    : kind_(kind), arity_(arity), codes_(std::move(codes)) {
  if (codes_.size() != arity_ * (arity_ ? arity_ - 1 : 0) / 2)
    throw std::invalid_argument("QfType: code count does not match arity");
}

std::size_t QfType::index(std::size_t i, std::size_t j, std::size_t n) {
  // i < j; offset of row i in the upper triangle.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

PairCode QfType::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0;
  if (i < j) return codes_[index(i, j, arity_)];
  return swap_pair_code(kind_, codes_[index(j, i, arity_)]);
}

QfType QfType::select(std::span<const std::size_t> positions) const {
  const std::size_t n = positions.size();
  std::vector<PairCode> codes;
  codes.reserve(n * (n ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) codes.push_back(at(positions[i], positions[j]));
  return QfType(kind_, n, std::move(codes));
}

std::string QfType::to_string() const {
  std::vector<std::string> atoms;
  auto var = [](std::size_t i) { return "x" + std::to_string(i); };
  for (std::size_t i = 0; i < arity_; ++i) {
    for (std::size_t j = i + 1; j < arity_; ++j) {
      const PairCode c = at(i, j);
      if (c == 0) {
        atoms.push_back(var(i) + "=" + var(j));
        continue;
      }
      atoms.push_back(var(i) + "!=" + var(j));
      switch (kind_) {
        case OracleKind::DenseLinearOrder:
          atoms.push_back(c == 1 ? var(i) + "<" + var(j) : var(i) + ">" + var(j));
          break;
        case OracleKind::RandomGraph:
          atoms.push_back((c == 1 ? "E(" : "!E(") + var(i) + "," + var(j) + ")");
          break;
        case OracleKind::EquivTower: {
          std::uint64_t mask = c >> 1;
          for (int b = 0; mask; ++b, mask >>= 1)
            if (mask & 1)
              atoms.push_back("!E" + std::to_string(b + 1) + "(" + var(i) + "," + var(j) + ")");
          break;
        }
        case OracleKind::PureSet:
          break;
      }
    }
  }
  std::string out = "{";
  for (std::size_t k = 0; k < atoms.size(); ++k) out += (k ? ", " : "") + atoms[k];
  if (kind_ == OracleKind::EquivTower && arity_ > 1) out += atoms.empty() ? "" : "; other E_i hold";
  return out + "}";
}

std::size_t QfTypeHash::operator()(const QfType& t) const {
  std::uint64_t h = 1469598103934665603ull ^ t.arity();
  for (PairCode c : t.codes()) {
    h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Export

std::string export_window(const FiniteStructure& s) {
  std::ostringstream out;
  out << "WINDOW/1 kind=" << to_string(s.kind) << " size=" << s.size() << "\n";
  out << "signature";
  for (const auto& r : s.signature) out << " " << r.name << "/" << r.arity;
  out << "\n";
  for (std::size_t i = 0; i < s.elements.size(); ++i)
    out << "element " << s.elements[i] << " " << s.descriptors[i] << "\n";
  for (const auto& r : s.signature) {
    auto it = s.relations.find(r.name);
    if (it == s.relations.end()) continue;
    for (const auto& t : it->second) {
      out << "tuple " << r.name;
      for (Element e : t) out << " " << e;
      out << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// StructureOracle base

StructureOracle::StructureOracle(const OracleParams& params) : params_(params) {}

std::size_t StructureOracle::size_at_level(std::size_t lvl) const {
  if (lvl >= checkpoints_.size())
    throw InvalidInput("size_at_level: level " + std::to_string(lvl) + " not reached");
  return checkpoints_[lvl];
}

std::size_t StructureOracle::level_containing(Element x) const {
  if (!contains(x)) throw InvalidInput("element " + std::to_string(x) + " not in window");
  auto it = std::upper_bound(checkpoints_.begin(), checkpoints_.end(), static_cast<std::size_t>(x));
  return static_cast<std::size_t>(it - checkpoints_.begin());
}

void StructureOracle::grow_to(std::size_t lvl) {
  while (checkpoints_.empty() || level() < lvl) {
    const std::size_t next = checkpoints_.size();
    grow_level_checked(next);
  }
}

void StructureOracle::grow_level_checked(std::size_t next) {
  grow_one_level(next);
  checkpoints_.push_back(size());
  journal_.push_back(JournalEntry{JournalEntry::Kind::Grow, next, {}, {}});
}

void StructureOracle::check_capacity(std::size_t additional) const {
  if (size() + additional > params_.max_elements)
    throw ResourceLimit("window would exceed max_elements=" + std::to_string(params_.max_elements));
}

PairCode StructureOracle::pair_code(Element x, Element y) const {
  if (!contains(x) || !contains(y))
    throw InvalidInput("element not in window: " + std::to_string(contains(x) ? y : x));
  if (x == y) return 0;
  return raw_pair_code(x, y);
}

QfType StructureOracle::qf_type(std::span<const Element> t) const {
  for (Element e : t)
    if (!contains(e)) throw InvalidInput("element not in window: " + std::to_string(e));
  std::vector<PairCode> codes;
  codes.reserve(t.size() * (t.size() ? t.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      codes.push_back(t[i] == t[j] ? 0 : raw_pair_code(t[i], t[j]));
  return QfType(kind(), t.size(), std::move(codes));
}

bool StructureOracle::same_orbit(std::span<const Element> t1, std::span<const Element> t2) const {
  if (t1.size() != t2.size()) throw InvalidInput("same_orbit: arity mismatch");
  return qf_type(t1) == qf_type(t2);
}

void StructureOracle::validate_profile(std::span<const Element> base,
                                       std::span<const PairCode> profile) const {
  if (base.size() != profile.size()) throw InvalidInput("profile length does not match base");
  for (Element e : base)
    if (!contains(e)) throw InvalidInput("base element not in window: " + std::to_string(e));
}

std::optional<Element> StructureOracle::find_realization(std::span<const Element> base,
                                                         std::span<const PairCode> profile,
                                                         std::span<const Element> avoid) const {
  validate_profile(base, profile);
  const std::size_t n = size();
  std::vector<char> blocked(n, 0);
  for (Element a : avoid)
    if (a < n) blocked[a] = 1;
  for (Element y = 0; y < n; ++y) {
    if (blocked[y]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < base.size() && ok; ++j)
      ok = (base[j] == y ? 0 : raw_pair_code(base[j], y)) == profile[j];
    if (ok) return y;
  }
  return std::nullopt;
}

Element StructureOracle::construct_checked(std::span<const Element> base,
                                           std::span<const PairCode> profile) {
  check_capacity(1);
  std::optional<Element> made = construct(base, profile);
  if (!made) throw InvalidInput("demand is not realizable in this structure");
  for (std::size_t j = 0; j < base.size(); ++j)
    if (raw_pair_code(base[j], *made) != profile[j])
      throw std::logic_error("constructed element does not realize its demand");
  journal_.push_back(JournalEntry{JournalEntry::Kind::Construct, 0,
                                  std::vector<Element>(base.begin(), base.end()),
                                  std::vector<PairCode>(profile.begin(), profile.end())});
  return *made;
}

Element StructureOracle::realize_profile(std::span<const Element> base,
                                         std::span<const PairCode> profile,
                                         std::span<const Element> avoid) {
  validate_profile(base, profile);
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (profile[j] != 0) continue;
    // The demand pins x to base[j].
    for (std::size_t k = 0; k < base.size(); ++k)
      if (pair_code(base[k], base[j]) != profile[k])
        throw InvalidInput("inconsistent demand: equality conflicts with base type");
    if (std::find(avoid.begin(), avoid.end(), base[j]) != avoid.end())
      throw InvalidInput("demand forces an avoided element");
    return base[j];
  }
  if (auto found = find_realization(base, profile, avoid)) return *found;
  return construct_checked(base, profile);
}

Element StructureOracle::realize_extension(std::span<const Element> base, const QfType& demand) {
  const std::size_t n = base.size();
  if (demand.arity() != n + 1) throw InvalidInput("demand arity must be |base| + 1");
  std::vector<std::size_t> prefix(n);
  for (std::size_t i = 0; i < n; ++i) prefix[i] = i;
  if (demand.select(prefix) != qf_type(base))
    throw InvalidInput("inconsistent demand: restriction to base differs from base type");
  std::vector<PairCode> profile(n);
  for (std::size_t j = 0; j < n; ++j) profile[j] = demand.at(j, n);
  return realize_profile(base, profile, {});
}

FiniteStructure StructureOracle::snapshot_prefix(std::size_t count) const {
  if (count > size()) throw InvalidInput("snapshot larger than window");
  FiniteStructure s;
  s.kind = kind();
  s.signature = signature();
  s.elements.resize(count);
  s.descriptors.resize(count);
  for (Element i = 0; i < count; ++i) {
    s.elements[i] = i;
    s.descriptors[i] = describe(i);
  }
  add_relation_tuples(count, s);
  return s;
}

FiniteStructure window(StructureOracle& oracle, std::size_t level) {
  oracle.grow_to(level);
  return oracle.snapshot_prefix(oracle.size_at_level(level));
}

// ---------------------------------------------------------------------------
// PureSet

namespace {

class PureSetOracle final : public StructureOracle {
 public:
  explicit PureSetOracle(const OracleParams& p) : StructureOracle(p) {}

  std::string describe(Element x) const override { return "p" + std::to_string(x); }

 protected:
  std::size_t element_count() const override { return count_; }
  PairCode raw_pair_code(Element x, Element y) const override { return x == y ? 0 : 1; }
  void grow_one_level(std::size_t lvl) override {
    if (lvl == 0) return;
    check_capacity(1);
    ++count_;
  }
  std::optional<Element> construct(std::span<const Element>,
                                   std::span<const PairCode> profile) override {
    for (PairCode c : profile)
      if (c != 1) return std::nullopt;
    return static_cast<Element>(count_++);
  }
  std::vector<RelationSymbol> signature() const override { return {}; }
  void add_relation_tuples(std::size_t, FiniteStructure&) const override {}

 private:
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Dense linear order
//
// Canonical points come in generations: {0,1,2}, then below the minimum,
// between every consecutive pair and above the maximum. Level L holds the
// first L canonical points. Canonical points are dyadic; constructed points
// are chosen non-dyadic so they never collide with a later canonical point.

using Rational = boost::multiprecision::cpp_rational;

class DloOracle final : public StructureOracle {
 public:
  explicit DloOracle(const OracleParams& p) : StructureOracle(p) {}

  std::size_t next_probe_level(std::size_t lvl) const override {
    if (lvl < 3) return lvl + 1;
    std::size_t g = 3;
    while (g <= lvl) g = 2 * g + 1;
    return g;
  }

  std::string describe(Element x) const override {
    const Rational& q = pos_[x];
    std::ostringstream s;
    s << "q=" << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1) s << "/" << boost::multiprecision::denominator(q);
    return s.str();
  }

 protected:
  std::size_t element_count() const override { return pos_.size(); }

  PairCode raw_pair_code(Element x, Element y) const override {
    const double a = approx_[x], b = approx_[y];
    if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) return a < b ? 1 : 2;
    return pos_[x] < pos_[y] ? 1 : 2;
  }

  void grow_one_level(std::size_t lvl) override {
    if (lvl == 0) return;
    const std::size_t idx = lvl - 1;
    while (canonical_.size() <= idx) next_generation();
    check_capacity(1);
    add(canonical_[idx]);
  }

  std::optional<Element> construct(std::span<const Element> base,
                                   std::span<const PairCode> profile) override {
    std::optional<Rational> lo, hi;
    for (std::size_t j = 0; j < base.size(); ++j) {
      const Rational& p = pos_[base[j]];
      if (profile[j] == 1) {
        if (!lo || p > *lo) lo = p;
      } else if (profile[j] == 2) {
        if (!hi || p < *hi) hi = p;
      } else {
        return std::nullopt;
      }
    }
    if (lo && hi && !(*lo < *hi)) return std::nullopt;
    Rational a, b;
    if (lo && hi) {
      a = *lo;
      b = *hi;
    } else if (lo) {
      a = *lo;
      b = *lo + 1;
    } else if (hi) {
      a = *hi - 1;
      b = *hi;
    } else {
      a = taken_.empty() ? Rational(0) : *taken_.rbegin();
      b = a + 1;
    }
    Rational p = a + (b - a) / 3;
    while (taken_.count(p) || is_dyadic(p)) p = a + (p - a) / 3;
    return add(p);
  }

  std::vector<RelationSymbol> signature() const override { return {{"<", 2}}; }

  void add_relation_tuples(std::size_t count, FiniteStructure& out) const override {
    auto& lt = out.relations["<"];
    for (Element x = 0; x < count; ++x)
      for (Element y = 0; y < count; ++y)
        if (x != y && raw_pair_code(x, y) == 1) lt.push_back({x, y});
  }

 private:
  static bool is_dyadic(const Rational& q) {
    boost::multiprecision::cpp_int d = boost::multiprecision::denominator(q);
    return (d & (d - 1)) == 0;
  }

  void next_generation() {
    if (canonical_.empty()) {
      canonical_ = {Rational(0), Rational(1), Rational(2)};
      sorted_ = canonical_;
      return;
    }
    std::vector<Rational> fresh;
    fresh.push_back(sorted_.front() - 1);
    for (std::size_t i = 0; i + 1 < sorted_.size(); ++i)
      fresh.push_back((sorted_[i] + sorted_[i + 1]) / 2);
    fresh.push_back(sorted_.back() + 1);
    canonical_.insert(canonical_.end(), fresh.begin(), fresh.end());
    sorted_.insert(sorted_.end(), fresh.begin(), fresh.end());
    std::sort(sorted_.begin(), sorted_.end());
  }

  Element add(const Rational& p) {
    pos_.push_back(p);
    approx_.push_back(p.convert_to<double>());
    taken_.insert(p);
    return static_cast<Element>(pos_.size() - 1);
  }

  std::vector<Rational> canonical_;  // generation order
  std::vector<Rational> sorted_;     // all canonical points generated, ascending
  std::vector<Rational> pos_;
  std::vector<double> approx_;
  std::set<Rational> taken_;
};

// ---------------------------------------------------------------------------
// Tower of equivalence relations
//
// An element is a finitely supported vector of class ids together with a
// copy tag; E_i(x, y) iff x_i = y_i. The copy tag keeps distinct elements
// that agree on every coordinate, so no type over a finite set is realized
// only finitely often. Level L holds vectors with support in the first L
// coordinates, class ids < L + 2 and copy tags < max(1, L).

class TowerOracle final : public StructureOracle {
 public:
  static constexpr std::size_t kMaxCoords = 62;

  explicit TowerOracle(const OracleParams& p) : StructureOracle(p) {}

  std::string describe(Element x) const override {
    const auto& e = elems_[x];
    std::string s = "(";
    if (e.coords.empty()) s += "0";
    for (std::size_t i = 0; i < e.coords.size(); ++i) s += (i ? "," : "") + std::to_string(e.coords[i]);
    s += ")#" + std::to_string(e.copy);
    if (e.constructed) s += "*";
    return s;
  }

 protected:
  struct Item {
    std::vector<std::uint32_t> coords;  // no trailing zeros
    std::uint32_t copy = 0;
    bool constructed = false;
  };

  std::size_t element_count() const override { return elems_.size(); }

  PairCode raw_pair_code(Element x, Element y) const override {
    const auto& a = elems_[x].coords;
    const auto& b = elems_[y].coords;
    const std::size_t n = std::max(a.size(), b.size());
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = i < a.size() ? a[i] : 0;
      const std::uint32_t v = i < b.size() ? b[i] : 0;
      if (u != v) mask |= std::uint64_t{1} << i;
    }
    return (mask << 1) | 1;
  }

  void grow_one_level(std::size_t lvl) override {
    if (lvl == 0) {
      check_capacity(1);
      elems_.push_back(Item{});
      return;
    }
    const std::uint32_t values = static_cast<std::uint32_t>(lvl + 2);
    const std::uint32_t copies = static_cast<std::uint32_t>(std::max<std::size_t>(1, lvl));
    const std::uint32_t prev_values = static_cast<std::uint32_t>(lvl + 1);
    const std::uint32_t prev_copies =
        static_cast<std::uint32_t>(std::max<std::size_t>(1, lvl - 1));
    std::size_t total = 1;
    for (std::size_t i = 0; i < lvl; ++i) total *= values;
    const std::size_t prev_total = (lvl == 1 ? 1 : [&] {
      std::size_t t = 1;
      for (std::size_t i = 0; i + 1 < lvl; ++i) t *= prev_values;
      return t;
    }()) * prev_copies;
    check_capacity(total * copies - prev_total);
    std::vector<std::uint32_t> v(lvl, 0);
    for (std::size_t code = 0; code < total; ++code) {
      // v[0] is the most significant digit.
      std::size_t c = code;
      for (std::size_t i = lvl; i-- > 0;) {
        v[i] = static_cast<std::uint32_t>(c % values);
        c /= values;
      }
      bool in_prev = v[lvl - 1] == 0;
      for (std::size_t i = 0; i + 1 < lvl && in_prev; ++i) in_prev = v[i] < prev_values;
      if (lvl == 1) in_prev = v[0] == 0;
      for (std::uint32_t k = 0; k < copies; ++k) {
        if (in_prev && k < prev_copies) continue;
        Item it;
        it.coords = v;
        while (!it.coords.empty() && it.coords.back() == 0) it.coords.pop_back();
        it.copy = k;
        elems_.push_back(std::move(it));
      }
    }
  }

  std::optional<Element> construct(std::span<const Element> base,
                                   std::span<const PairCode> profile) override {
    std::size_t len = 0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      if ((profile[j] & 1) == 0) return std::nullopt;
      len = std::max(len, elems_[base[j]].coords.size());
      len = std::max<std::size_t>(len, std::bit_width(profile[j] >> 1));
    }
    if (len > kMaxCoords) throw ResourceLimit("tower element support exceeds coordinate cap");
    auto coord = [&](Element e, std::size_t i) -> std::uint32_t {
      const auto& c = elems_[e].coords;
      return i < c.size() ? c[i] : 0;
    };
    Item it;
    it.coords.assign(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      std::optional<std::uint32_t> pinned;
      std::vector<std::uint32_t> used;
      for (std::size_t j = 0; j < base.size(); ++j) {
        const bool differs = (profile[j] >> (i + 1)) & 1;
        used.push_back(coord(base[j], i));
        if (!differs) pinned = coord(base[j], i);
      }
      if (pinned) {
        it.coords[i] = *pinned;
      } else {
        std::sort(used.begin(), used.end());
        std::uint32_t v = 0;
        for (std::uint32_t u : used)
          if (u == v) ++v;
        it.coords[i] = v;
      }
      for (std::size_t j = 0; j < base.size(); ++j) {
        const bool differs = (profile[j] >> (i + 1)) & 1;
        if (differs == (coord(base[j], i) == it.coords[i])) return std::nullopt;
      }
    }
    while (!it.coords.empty() && it.coords.back() == 0) it.coords.pop_back();
    it.copy = next_constructed_copy_++;
    it.constructed = true;
    elems_.push_back(std::move(it));
    return static_cast<Element>(elems_.size() - 1);
  }

  std::vector<RelationSymbol> signature() const override {
    std::vector<RelationSymbol> sig;
    for (std::size_t i = 1; i <= max_support(elems_.size()); ++i) sig.push_back({"E" + std::to_string(i), 2});
    return sig;
  }

  void add_relation_tuples(std::size_t count, FiniteStructure& out) const override {
    const std::size_t m = max_support(count);
    for (std::size_t i = 0; i < m; ++i) {
      auto& rel = out.relations["E" + std::to_string(i + 1)];
      for (Element x = 0; x < count; ++x)
        for (Element y = 0; y < count; ++y)
          if (x != y && ((raw_pair_code(x, y) >> (i + 1)) & 1) == 0) rel.push_back({x, y});
    }
  }

 private:
  std::size_t max_support(std::size_t count) const {
    std::size_t m = 0;
    for (std::size_t x = 0; x < count && x < elems_.size(); ++x) m = std::max(m, elems_[x].coords.size());
    return m;
  }

  std::vector<Item> elems_;
  std::uint32_t next_constructed_copy_ = 0;
};

// ---------------------------------------------------------------------------
// Random graph
//
// Level L adds 16 L seeded random vertices and then adds witnesses for every
// (U, V) demand with |U u V| <= min(L, extension_cap) until none is missing.

class RandomGraphOracle final : public StructureOracle {
 public:
  explicit RandomGraphOracle(const OracleParams& p) : StructureOracle(p), rng_(p.seed) {}

  std::string describe(Element x) const override { return "v" + std::to_string(x); }

  bool adjacent(Element x, Element y) const { return (adj_[x][y >> 6] >> (y & 63)) & 1; }

 protected:
  std::size_t element_count() const override { return adj_.size(); }

  PairCode raw_pair_code(Element x, Element y) const override { return adjacent(x, y) ? 1 : 2; }

  void grow_one_level(std::size_t lvl) override {
    if (lvl == 0) return;
    const std::size_t batch = 16 * lvl;
    check_capacity(batch);
    for (std::size_t i = 0; i < batch; ++i) add_random_vertex({}, {});
    close(std::min(lvl, params_.extension_cap));
  }

  std::optional<Element> construct(std::span<const Element> base,
                                   std::span<const PairCode> profile) override {
    for (PairCode c : profile)
      if (c != 1 && c != 2) return std::nullopt;
    return add_random_vertex(base, profile);
  }

  std::vector<RelationSymbol> signature() const override { return {{"E", 2}}; }

  void add_relation_tuples(std::size_t count, FiniteStructure& out) const override {
    auto& e = out.relations["E"];
    for (Element x = 0; x < count; ++x)
      for (Element y = 0; y < count; ++y)
        if (x != y && adjacent(x, y)) e.push_back({x, y});
  }

 private:
  Element add_random_vertex(std::span<const Element> base, std::span<const PairCode> profile) {
    const std::size_t n = adj_.size();
    if (n % 64 == 0) {
      ++words_;
      for (auto& row : adj_) row.push_back(0);
    }
    std::vector<std::uint64_t> row(words_, 0);
    for (std::size_t w = 0; w * 64 < n; ++w) row[w] = rng_();
    if (n % 64) row[n >> 6] &= (std::uint64_t{1} << (n & 63)) - 1;
    else if (n >> 6 < words_) row[n >> 6] = 0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      const Element b = base[j];
      if (profile[j] == 1) row[b >> 6] |= std::uint64_t{1} << (b & 63);
      else row[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
    }
    for (Element u = 0; u < n; ++u)
      if ((row[u >> 6] >> (u & 63)) & 1) adj_[u][n >> 6] |= std::uint64_t{1} << (n & 63);
    adj_.push_back(std::move(row));
    return static_cast<Element>(n);
  }

  // Adds witnesses until every demand of size <= k is met.
  void close(std::size_t k) {
    std::size_t lo = (k > closed_k_) ? 0 : closed_upto_;
    while (true) {
      const std::size_t n0 = adj_.size();
      if (n0 == 0) break;
      std::vector<Element> subset;
      for (std::size_t s = 1; s <= k && s <= n0; ++s) {
        subset.assign(s, 0);
        scan_subsets(subset, 0, 0, n0, lo);
      }
      lo = n0;
      if (adj_.size() == n0) break;
    }
    closed_k_ = std::max(closed_k_, k);
    closed_upto_ = adj_.size();
  }

  void scan_subsets(std::vector<Element>& subset, std::size_t pos, Element start, std::size_t n0,
                    std::size_t lo) {
    if (pos == subset.size()) {
      if (subset.back() >= lo) ensure_witnesses(subset);
      return;
    }
    for (Element v = start; v < n0; ++v) {
      subset[pos] = v;
      scan_subsets(subset, pos + 1, v + 1, n0, lo);
    }
  }

  void ensure_witnesses(const std::vector<Element>& subset) {
    const std::size_t s = subset.size();
    const std::uint32_t patterns = 1u << s;
    const std::uint32_t all = patterns == 32 ? ~0u : (1u << patterns) - 1;
    std::uint32_t found = 0;
    const std::size_t n = adj_.size();
    for (std::size_t w = 0; w < words_ && found != all; ++w) {
      std::uint64_t valid = ~std::uint64_t{0};
      if ((w + 1) * 64 > n) valid = n > w * 64 ? (std::uint64_t{1} << (n - w * 64)) - 1 : 0;
      for (Element e : subset)
        if ((e >> 6) == w) valid &= ~(std::uint64_t{1} << (e & 63));
      if (!valid) continue;
      for (std::uint32_t p = 0; p < patterns; ++p) {
        if (found & (1u << p)) continue;
        std::uint64_t m = valid;
        for (std::size_t i = 0; i < s && m; ++i)
          m &= ((p >> i) & 1) ? adj_[subset[i]][w] : ~adj_[subset[i]][w];
        if (m) found |= 1u << p;
      }
    }
    for (std::uint32_t p = 0; p < patterns; ++p) {
      if (found & (1u << p)) continue;
      check_capacity(1);
      std::vector<PairCode> profile(s);
      for (std::size_t i = 0; i < s; ++i) profile[i] = ((p >> i) & 1) ? 1 : 2;
      add_random_vertex(subset, profile);
    }
  }

  std::vector<std::vector<std::uint64_t>> adj_;
  std::size_t words_ = 0;
  std::mt19937_64 rng_;
  std::size_t closed_k_ = 0;
  std::size_t closed_upto_ = 0;
};

}  // namespace

std::unique_ptr<StructureOracle> StructureOracle::create(const OracleParams& params) {
  std::unique_ptr<StructureOracle> o;
  switch (params.kind) {
    case OracleKind::RandomGraph:
      o = std::make_unique<RandomGraphOracle>(params);
      break;
    case OracleKind::DenseLinearOrder:
      o = std::make_unique<DloOracle>(params);
      break;
    case OracleKind::EquivTower:
      o = std::make_unique<TowerOracle>(params);
      break;
    case OracleKind::PureSet:
      o = std::make_unique<PureSetOracle>(params);
      break;
  }
  o->grow_to(params.level);
  return o;
}

std::unique_ptr<StructureOracle> StructureOracle::replay(const OracleParams& params,
                                                         std::span<const JournalEntry> journal) {
  OracleParams p = params;
  p.level = 0;
  auto o = create(p);
  o->params_.level = params.level;
  for (const JournalEntry& e : journal) {
    if (e.kind == JournalEntry::Kind::Grow) {
      o->grow_to(e.level);
    } else {
      for (Element b : e.base)
        if (!o->contains(b)) throw ParseError("journal refers to an element not yet created");
      o->construct_checked(e.base, e.profile);
    }
  }
  return o;
}

std::vector<ExtensionDefect> extension_defects(const StructureOracle& oracle, std::size_t k,
                                               std::size_t count, std::size_t max_report) {
  if (oracle.kind() != OracleKind::RandomGraph)
    throw InvalidInput("extension_defects applies to random-graph windows only");
  std::vector<ExtensionDefect> defects;
  std::vector<Element> subset;
  // Enumerate subsets of size s <= k and every split into (U, V).
  auto check = [&](const std::vector<Element>& sub) {
    const std::size_t s = sub.size();
    std::vector<char> seen(std::size_t{1} << s, 0);
    for (Element z = 0; z < count; ++z) {
      if (std::find(sub.begin(), sub.end(), z) != sub.end()) continue;
      std::size_t p = 0;
      for (std::size_t i = 0; i < s; ++i)
        if (oracle.pair_code(sub[i], z) == 1) p |= std::size_t{1} << i;
      seen[p] = 1;
    }
    for (std::size_t p = 0; p < seen.size(); ++p) {
      if (seen[p] || defects.size() >= max_report) continue;
      ExtensionDefect d;
      for (std::size_t i = 0; i < s; ++i) ((p >> i) & 1 ? d.adjacent : d.non_adjacent).push_back(sub[i]);
      defects.push_back(std::move(d));
    }
  };
  auto rec = [&](auto&& self, Element start) -> void {
    check(subset);
    if (subset.size() == k) return;
    for (Element v = start; v < count; ++v) {
      subset.push_back(v);
      self(self, v + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
  return defects;
}

}  // namespace freeact
