// Self-check suite behind `qbloch verify`: each property is evaluated on
// seeded samples and reported with its worst observed error.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qbloch {

struct PropertyResult {
  std::string suite;
  std::string property;
  std::size_t samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::optional<std::string> only;  // suite name
};

/// core, lemma, geometry, duality, channels, pure-modes, sections, witness,
/// capacity.
const std::vector<std::string>& verification_suites();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<PropertyResult> run_verification(const VerifyOptions& options);

std::string format_verification_table(const std::vector<PropertyResult>& results);

}  // namespace qbloch
