#include "freeact/pair_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace freeact {

namespace {

template <class T>
std::string join(const std::vector<T>& v) {
  if (v.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <class T>
T number(std::string_view s, const std::string& what) {
  T out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(what + ": bad number '" + std::string(s) + "'");
  return out;
}

template <class T>
std::vector<T> number_list(std::string_view s, const std::string& what) {
  std::vector<T> out;
  if (s == "-") return out;
  for (auto part : split(s, ',')) out.push_back(number<T>(part, what));
  return out;
}

std::string_view keyed(std::string_view token, std::string_view key, const std::string& what) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
      token[key.size()] != '=')
    throw ParseError(what + ": expected " + std::string(key) + "=");
  return token.substr(key.size() + 1);
}

// Stages in file order; each line kind maps to one.
enum Stage { kHeader, kOracle, kJournal, kPhi, kGamma, kStep, kDepth, kRadius, kCert, kEnd };

}  // namespace

std::string write_pair(const PairArtifact& a) {
  std::ostringstream out;
  out << kPairFormat << '\n';
  out << "oracle " << to_string(a.oracle.kind) << " seed=" << a.oracle.seed
      << " level=" << a.oracle.level << " max_elements=" << a.oracle.max_elements
      << " ext_cap=" << a.oracle.extension_cap << '\n';
  for (const auto& e : a.journal) {
    if (e.kind == JournalEntry::Kind::Grow)
      out << "grow " << e.level << '\n';
    else
      out << "construct base=" << join(e.base) << " profile=" << join(e.profile) << '\n';
  }
  for (std::size_t i = 0; i < a.pair.phi.size(); ++i)
    out << "phi " << a.pair.phi.domain()[i] << ' ' << a.pair.phi.image()[i] << '\n';
  for (std::size_t i = 0; i < a.pair.gamma.size(); ++i)
    out << "gamma " << a.pair.gamma.domain()[i] << ' ' << a.pair.gamma.image()[i] << '\n';
  for (const auto& s : a.steps)
    out << "step " << to_string(s.side) << ' ' << to_string(s.direction) << ' ' << s.phi_before
        << ' ' << s.gamma_before << ' ' << s.after << ' ' << s.level << ' '
        << (s.constructed ? 1 : 0) << '\n';
  out << "cert_depth " << a.cert_depth << '\n';
  out << "ball_radius " << a.ball_radius << '\n';
  for (const auto& c : a.certification) out << "cert " << c << '\n';
  out << "end\n";
  return out.str();
}

PairArtifact read_pair(std::string_view text) {
  PairArtifact a;
  std::vector<Element> phi_d, phi_i, gamma_d, gamma_i;
  Stage stage = kHeader;
  bool have_depth = false, have_radius = false;
  std::size_t line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  auto advance = [&](Stage next, const std::string& what) {
    if (next < stage) throw ParseError(what + ": line out of order");
    stage = next;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string what = "pair line " + std::to_string(line_no);
    if (stage == kEnd) throw ParseError(what + ": content after end");
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line_no == 1) {
      if (raw != kPairFormat) throw ParseError(what + ": expected " + std::string(kPairFormat));
      stage = kHeader;
      continue;
    }
    if (raw.rfind("cert ", 0) == 0) {
      advance(kCert, what);
      if (!have_depth || !have_radius) throw ParseError(what + ": cert before parameters");
      a.certification.push_back(raw.substr(5));
      continue;
    }
    const auto tok = split(raw, ' ');
    const std::string_view head = tok[0];
    auto want = [&](std::size_t n) {
      if (tok.size() != n) throw ParseError(what + ": expected " + std::to_string(n) + " fields");
    };
    if (head == "oracle") {
      if (stage != kHeader) throw ParseError(what + ": duplicate or misplaced oracle line");
      want(6);
      auto kind = parse_oracle_kind(tok[1]);
      if (!kind) throw ParseError(what + ": unknown oracle kind");
      a.oracle.kind = *kind;
      a.oracle.seed = number<std::uint64_t>(keyed(tok[2], "seed", what), what);
      a.oracle.level = number<std::size_t>(keyed(tok[3], "level", what), what);
      a.oracle.max_elements = number<std::size_t>(keyed(tok[4], "max_elements", what), what);
      a.oracle.extension_cap = number<std::size_t>(keyed(tok[5], "ext_cap", what), what);
      stage = kOracle;
    } else if (stage == kHeader) {
      throw ParseError(what + ": expected oracle line");
    } else if (head == "grow") {
      advance(kJournal, what);
      want(2);
      JournalEntry e;
      e.kind = JournalEntry::Kind::Grow;
      e.level = number<std::size_t>(tok[1], what);
      a.journal.push_back(std::move(e));
    } else if (head == "construct") {
      advance(kJournal, what);
      want(3);
      JournalEntry e;
      e.kind = JournalEntry::Kind::Construct;
      e.base = number_list<Element>(keyed(tok[1], "base", what), what);
      e.profile = number_list<PairCode>(keyed(tok[2], "profile", what), what);
      if (e.base.size() != e.profile.size())
        throw ParseError(what + ": base and profile lengths differ");
      a.journal.push_back(std::move(e));
    } else if (head == "phi" || head == "gamma") {
      advance(head == "phi" ? kPhi : kGamma, what);
      want(3);
      auto& d = head == "phi" ? phi_d : gamma_d;
      auto& i = head == "phi" ? phi_i : gamma_i;
      d.push_back(number<Element>(tok[1], what));
      i.push_back(number<Element>(tok[2], what));
    } else if (head == "step") {
      advance(kStep, what);
      want(8);
      ExtensionRecord r;
      if (tok[1] == "phi") r.side = Side::Phi;
      else if (tok[1] == "gamma") r.side = Side::Gamma;
      else throw ParseError(what + ": bad side");
      if (tok[2] == "domain") r.direction = Direction::Domain;
      else if (tok[2] == "image") r.direction = Direction::Image;
      else throw ParseError(what + ": bad direction");
      r.phi_before = number<std::size_t>(tok[3], what);
      r.gamma_before = number<std::size_t>(tok[4], what);
      r.after = number<std::size_t>(tok[5], what);
      r.level = number<std::size_t>(tok[6], what);
      const auto c = number<int>(tok[7], what);
      if (c != 0 && c != 1) throw ParseError(what + ": bad constructed flag");
      r.constructed = c == 1;
      a.steps.push_back(r);
    } else if (head == "cert_depth") {
      advance(kDepth, what);
      want(2);
      if (have_depth) throw ParseError(what + ": duplicate cert_depth");
      a.cert_depth = number<std::size_t>(tok[1], what);
      have_depth = true;
    } else if (head == "ball_radius") {
      advance(kRadius, what);
      want(2);
      if (have_radius) throw ParseError(what + ": duplicate ball_radius");
      a.ball_radius = number<std::size_t>(tok[1], what);
      have_radius = true;
    } else if (head == "end") {
      want(1);
      if (!have_depth || !have_radius) throw ParseError(what + ": end before parameters");
      stage = kEnd;
    } else {
      throw ParseError(what + ": unknown line '" + std::string(head) + "'");
    }
  }
  if (stage != kEnd) throw ParseError("pair file truncated: missing end line");
  try {
    a.pair.phi = PartialAutomorphism(phi_d, phi_i);
    a.pair.gamma = PartialAutomorphism(gamma_d, gamma_i);
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("pair maps are not bijections: ") + e.what());
  }
  return a;
}

void save_pair(const std::string& path, const PairArtifact& a) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write pair file " + path);
  f << write_pair(a);
  if (!f) throw ParseError("failed writing pair file " + path);
}

PairArtifact load_pair(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open pair file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return read_pair(ss.str());
}

}  // namespace freeact
