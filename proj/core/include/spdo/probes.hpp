#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spdo {

// One self-check: `measured` is the probe's statistic (usually a max
// deviation), `threshold` the bound it was held against; the note says what
// was measured and records auxiliary values.
struct ProbeResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct ProbeSummary {
  std::uint64_t seed = 0;
  std::vector<ProbeResult> probes;
  int passed = 0;
  bool all_pass = false;
};

// Runs the internal consistency suite: identities the building blocks must
// satisfy (addition formula, quadrature exactness, reproducing property,
// spectral/matrix path agreement, ...) plus negative controls that must
// fail in the expected direction.  Deterministic given the seed; a probe
// that throws is reported as a failure with the message in its note.
ProbeSummary run_probe_suite(std::uint64_t seed);

// One line per probe ("PASS name measured=... bound=... note") plus a
// summary line.
std::string probe_report(const ProbeSummary& summary);

}  // namespace spdo
