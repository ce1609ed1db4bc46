#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "dombi/dfao_synth.hpp"
#include "dombi/logic.hpp"
#include "dombi/verify.hpp"

namespace dombi {

/// Session defining the characteristic sequence FF of F and the predicate
/// g(i,j,k,n): n = i+j+k with i, j, k outside F.
inline constexpr const char* kDefaultSession =
    "# characteristic sequence of F (even length, leading digits 11)\n"
    "FF = 0->01 1->23 2->22 3->44 4->33 / 0->0 1->0 2->0 3->1 4->0\n"
    "# n is the sum of the three elements i, j, k of A = N \\ F\n"
    "g = \"FF[i]=@0 & FF[j]=@0 & FF[k]=@0 & n=i+j+k\"\n";

struct CountSpec {
  const char* name;
  const char* formula;
  long coefficient;  // weight in f(n) = d(n) - 4 d(floor(n/4))
};

inline constexpr std::array<CountSpec, 4> kCountSpecs = {{
    {"r3an", "$g(i,j,k,n)", 1},
    {"r3anm1", "$g(i,j,k,n-1)", -1},
    {"r3an4", "$g(i,j,k,n/4)", -4},
    {"r3an4m1", "$g(i,j,k,n/4-1)", 4},
}};

/// Every artifact of the automata pipeline for one session.
struct Pipeline {
  std::string session;
  Dfao sequence;                    // FF
  Dfa set_F;                        // FF = 1, minimal
  NamedDfa g;
  std::array<NamedDfa, 4> count_dfas;
  std::array<LinRep, 4> counts;     // live-state counting representations
  LinRep f;                         // staged minimization of the combination

  static Pipeline build(const std::string& session);

  /// Block combination of the four counting representations (unminimized).
  LinRep combined() const;
  /// One of r3an, r3anm1, r3an4, r3an4m1, f.
  const LinRep& rep(const std::string& name) const;
};

/// Hex SHA-256 of the cache format version and the session text.
std::string session_key(const std::string& session);

/// Reuses artifacts cached under `workspace` for this exact session text,
/// otherwise builds and stores them. An empty workspace disables caching.
Pipeline load_or_build(const std::string& workspace, const std::string& session);

// ---------------------------------------------------------------------------
// Theorem report
// ---------------------------------------------------------------------------

struct VerifyConfig {
  std::uint64_t agreement = 10000;
  unsigned density_depth = 10;
  std::size_t orbit_bound = kDefaultOrbitBound;
  std::uint64_t induction_sample = 100000;
  std::string workspace;
  std::string session = kDefaultSession;
};

struct Milestone {
  std::string name;
  nlohmann::ordered_json expected;
  nlohmann::ordered_json measured;
  bool hard = true;
  bool pass = false;
  std::string note;
};

struct TheoremReport {
  std::vector<Milestone> milestones;

  /// Passes iff every hard milestone passes.
  bool verdict() const;
  const Milestone* find(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
  std::string table() const;
};

/// Published range of f, sorted ascending.
const std::vector<std::int64_t>& expected_f_range();

TheoremReport verify_theorem(const VerifyConfig& config);
TheoremReport verify_theorem(const Pipeline& pipeline, const VerifyConfig& config);

nlohmann::ordered_json density_json(const DensityReport& report);

}  // namespace dombi
