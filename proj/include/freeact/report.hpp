#pragma once

// Line-oriented command reports.
//
//   report <command>
//   version freeact <version> format REPORT/1
//   config <key>=<value> ...
//   row <table> <key>=<value> ... tol=<t>
//   check <name> PASS|FAIL <key>=<value> ... tol=<t>
//   note <text>
//   timing seconds=<s>
//   status PASS|FAIL checks=<n> failed=<k>
//
// Every line except "timing" is deterministic for a fixed configuration.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace freeact {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportFormat = "REPORT/1";

using Fields = std::vector<std::pair<std::string, std::string>>;

struct CheckResult {
  std::string name;
  bool pass = false;
  Fields fields;
  std::string tol;  // "exact" for integer and set comparisons
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set_config(Fields echo) { config_ = std::move(echo); }
  void check(std::string name, bool pass, Fields fields, std::string tol = "exact");
  void add(CheckResult c);
  void row(std::string table, Fields fields, std::string tol);
  void note(std::string text);
  void set_seconds(double s) { seconds_ = s; }

  const std::string& command() const { return command_; }
  const std::vector<CheckResult>& checks() const { return checks_; }
  const CheckResult* find(const std::string& name) const;
  bool passed() const;

  // Full text; without timing the output is reproducible byte for byte.
  std::string render(bool with_timing = true) const;

 private:
  std::string command_;
  Fields config_;
  std::vector<std::string> body_;  // rows, checks and notes in emission order
  std::vector<CheckResult> checks_;
  double seconds_ = 0;
};

// The "check ..." line for one result.
std::string render_check(const CheckResult& c);

// Report rendering helpers for numbers.
std::string fmt(double v);
std::string fmt(std::size_t v);
inline std::string fmt(unsigned v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v);

// Parses "check" lines back out of a rendered report: name -> full line.
std::vector<std::pair<std::string, std::string>> check_lines(const std::string& rendered);

}  // namespace freeact
