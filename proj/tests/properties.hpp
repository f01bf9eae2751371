#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first; // first failing case
};

Outcome thetaAutomorphism(std::uint32_t seed, int cases);
Outcome gradingAdditivity(std::uint32_t seed, int cases);
Outcome creationAxioms(std::uint32_t seed, int cases);
Outcome parityRule(std::uint32_t seed, int cases);
Outcome cmnSymmetry(std::uint32_t seed, int cases);
Outcome truncationStability(std::uint32_t seed, int cases);

std::vector<Outcome> all(std::uint32_t seed = 20261018, int cases = 240);

} // namespace props
