#pragma once

// Command implementations behind the freeact CLI. Each returns a Report;
// library errors propagate as exceptions (see exit_code_for).

#include <string>
#include <vector>

#include "freeact/config.hpp"
#include "freeact/freepair.hpp"
#include "freeact/pair_io.hpp"
#include "freeact/report.hpp"

namespace freeact {

enum ExitCode { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitResource = 3 };

// Re-derives every certified property of a pair from the pair, its step
// records and the oracle alone: type preservation, the step chain, the
// freshness ledger of every step, disjointness of the initial maps, absence
// of fixed points for words of length <= L on every window element, and tree
// balls of radius 1..radius around the first domain point. The ball check
// extends a copy of the pair, which may add elements to the oracle.
// Never throws for a bad pair; failures become FAIL results.
std::vector<CheckResult> certify(StructureOracle& oracle, const FreePair& pair,
                                 const std::vector<ExtensionRecord>& steps, std::size_t L,
                                 std::size_t radius);

Report cmd_orbits(const RunConfig& cfg);
// Persists the pair to cfg.pair when set.
Report cmd_build(const RunConfig& cfg);
// Reads cfg.pair; throws ParseError when it is missing or malformed.
Report cmd_verify(const RunConfig& cfg);
// Uses cfg.pair for the orbit comparison when set.
Report cmd_spectra(const RunConfig& cfg);
Report cmd_counterexample(const RunConfig& cfg);
// Exported window text at the configured level.
std::string cmd_window(const RunConfig& cfg);

int exit_code_for(const Report& r);

}  // namespace freeact
