#include "dombi/dfao_synth.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace dombi {

namespace {

struct VectorLess {
  bool operator()(const Vector& a, const Vector& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

}  // namespace

OrbitBoundError::OrbitBoundError(std::size_t bound)
    : std::runtime_error("orbit exceeds the bound of " + std::to_string(bound) + " states"), bound_(bound) {}

Dfao orbit_dfao(const LinRep& rep, std::size_t bound) {
  rep.validate();
  std::map<Vector, StateId, VectorLess> ids;
  std::vector<Vector> states;
  auto intern = [&](Vector x) {
    auto [it, fresh] = ids.try_emplace(x, static_cast<StateId>(states.size()));
    if (fresh) {
      if (states.size() >= bound) throw OrbitBoundError(bound);
      states.push_back(std::move(x));
    }
    return it->second;
  };
  intern(rep.v);
  std::vector<StateId> delta;
  for (std::size_t head = 0; head < states.size(); ++head) {
    for (unsigned d = 0; d < 2; ++d) delta.push_back(intern(states[head] * rep.gamma[d]));
  }
  std::vector<std::int64_t> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    const Rational y = dot(s, rep.w);
    if (y.get_den() != 1 || !y.get_num().fits_slong_p()) throw std::domain_error("orbit state has a non-integer output " + y.get_str());
    out.push_back(y.get_num().get_si());
  }
  return Dfao(1, 0, std::move(out), std::move(delta));
}

std::vector<std::int64_t> output_range(const Dfao& d) {
  std::vector<bool> seen(d.size(), false);
  std::vector<StateId> stack{d.initial()};
  seen[d.initial()] = true;
  std::vector<std::int64_t> out;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    out.push_back(d.output(s));
    for (Letter x = 0; x < d.alphabet_size(); ++x) {
      const StateId t = d.next(s, x);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dombi
