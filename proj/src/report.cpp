#include "freeact/report.hpp"

#include <cstdio>
#include <sstream>

#include "freeact/config.hpp"

namespace freeact {

namespace {

std::string join_fields(const Fields& fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    out += ' ';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

}  // namespace

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string render_check(const CheckResult& c) {
  return "check " + c.name + (c.pass ? " PASS" : " FAIL") + join_fields(c.fields) + " tol=" + c.tol;
}

void Report::check(std::string name, bool pass, Fields fields, std::string tol) {
  add({std::move(name), pass, std::move(fields), std::move(tol)});
}

void Report::add(CheckResult c) {
  body_.push_back(render_check(c));
  checks_.push_back(std::move(c));
}

void Report::row(std::string table, Fields fields, std::string tol) {
  body_.push_back("row " + table + join_fields(fields) + " tol=" + tol);
}

void Report::note(std::string text) {
  for (char& c : text)
    if (c == '\n') c = ' ';
  body_.push_back("note " + text);
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return !checks_.empty();
}

std::string Report::render(bool with_timing) const {
  std::ostringstream out;
  out << "report " << command_ << '\n';
  out << "version freeact " << kVersion << " format " << kReportFormat << '\n';
  if (!config_.empty()) out << "config" << join_fields(config_) << '\n';
  for (const auto& line : body_) out << line << '\n';
  if (with_timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds_);
    out << "timing seconds=" << buf << '\n';
  }
  std::size_t failed = 0;
  for (const auto& c : checks_) failed += c.pass ? 0 : 1;
  out << "status " << (passed() ? "PASS" : "FAIL") << " checks=" << checks_.size()
      << " failed=" << failed << '\n';
  return out.str();
}

std::vector<std::pair<std::string, std::string>> check_lines(const std::string& rendered) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(rendered);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("check ", 0) != 0) continue;
    const auto end = line.find(' ', 6);
    out.emplace_back(line.substr(6, end - 6), line);
  }
  return out;
}

}  // namespace freeact
