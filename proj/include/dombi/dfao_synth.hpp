#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dombi/dfao.hpp"
#include "dombi/linrep.hpp"

namespace dombi {

inline constexpr std::size_t kDefaultOrbitBound = 100000;

class OrbitBoundError : public std::runtime_error {
public:
  explicit OrbitBoundError(std::size_t bound);
  std::size_t bound() const { return bound_; }

private:
  std::size_t bound_;
};

/// Breadth-first closure of {v * gamma(x)} (digit 0 before digit 1). Each
/// distinct vector is a state; its output is the vector times w, which must
/// be an integer.
Dfao orbit_dfao(const LinRep& rep, std::size_t bound = kDefaultOrbitBound);

/// Sorted distinct outputs over the reachable states.
std::vector<std::int64_t> output_range(const Dfao& d);

}  // namespace dombi
