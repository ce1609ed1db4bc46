#include "dombi/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

namespace dombi {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCacheFormat = "dombi-cache-v1\n";

unsigned track_of(const NamedDfa& a, const std::string& var) {
  const auto it = std::find(a.vars.begin(), a.vars.end(), var);
  if (it == a.vars.end()) throw std::invalid_argument("automaton has no track named " + var);
  return static_cast<unsigned>(it - a.vars.begin());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

NamedDfa named_from_text(const std::string& text) {
  NamedDfa out;
  out.dfa = dfa_from_text(text);
  const std::string tag = "# tracks:";
  if (text.compare(0, tag.size(), tag) == 0) {
    std::istringstream names(text.substr(tag.size(), text.find('\n') - tag.size()));
    for (std::string n; names >> n;) out.vars.push_back(n);
  }
  if (out.vars.size() != out.dfa.tracks()) throw std::runtime_error("cached automaton lacks track names");
  return out;
}

// Exclusive advisory lock on <workspace>/.lock for the lifetime of the object.
class WorkspaceLock {
public:
  explicit WorkspaceLock(const fs::path& dir) {
    fd_ = ::open((dir / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open workspace lock in " + dir.string());
    ::flock(fd_, LOCK_EX);
  }
  ~WorkspaceLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
  int fd_ = -1;
};

}  // namespace

Pipeline Pipeline::build(const std::string& session) {
  Pipeline p;
  p.session = session;
  const Registry reg = build_registry(parse_session(session));
  const Dfao* ff = reg.sequence("FF");
  const NamedDfa* g = reg.predicate("g");
  if (!ff || !g) throw std::invalid_argument("session must define the sequence FF and the predicate g");
  p.sequence = *ff;
  p.set_F = dfao_predicate(*ff, 1);
  p.g = *g;
  std::vector<std::pair<long, LinRep>> staged;
  for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
    p.count_dfas[i] = compile(kCountSpecs[i].formula, reg);
    p.counts[i] = count_rep(p.count_dfas[i].dfa, track_of(p.count_dfas[i], "n"));
    staged.emplace_back(kCountSpecs[i].coefficient, minimize_rep(p.counts[i]));
  }
  p.f = minimize_rep(combine(staged));
  return p;
}

LinRep Pipeline::combined() const {
  std::vector<std::pair<long, LinRep>> terms;
  for (std::size_t i = 0; i < kCountSpecs.size(); ++i) terms.emplace_back(kCountSpecs[i].coefficient, counts[i]);
  return combine(terms);
}

const LinRep& Pipeline::rep(const std::string& name) const {
  if (name == "f") return f;
  for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
    if (name == kCountSpecs[i].name) return counts[i];
  }
  throw std::invalid_argument("unknown representation: " + name);
}

std::string session_key(const std::string& session) {
  const std::string data = kCacheFormat + session;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 failed");
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

Pipeline load_or_build(const std::string& workspace, const std::string& session) {
  if (workspace.empty()) return Pipeline::build(session);
  const fs::path root(workspace);
  fs::create_directories(root);
  WorkspaceLock lock(root);
  const fs::path dir = root / session_key(session);
  if (fs::exists(dir / "complete")) {
    Pipeline p;
    p.session = read_file(dir / "session.txt");
    if (p.session == session) {
      p.sequence = dfao_from_text(read_file(dir / "FF.dfao"));
      p.set_F = dfa_from_text(read_file(dir / "F.dfa"));
      p.g = named_from_text(read_file(dir / "g.dfa"));
      for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
        const std::string name = kCountSpecs[i].name;
        p.count_dfas[i] = named_from_text(read_file(dir / (name + ".dfa")));
        p.counts[i] = linrep_from_text(read_file(dir / (name + ".rep")));
      }
      p.f = linrep_from_text(read_file(dir / "f.rep"));
      return p;
    }
  }
  Pipeline p = Pipeline::build(session);
  fs::create_directories(dir);
  fs::remove(dir / "complete");
  write_file(dir / "session.txt", session);
  write_file(dir / "FF.dfao", to_text(p.sequence));
  write_file(dir / "F.dfa", to_text(p.set_F));
  write_file(dir / "g.dfa", to_text(p.g.dfa, p.g.vars));
  for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
    const std::string name = kCountSpecs[i].name;
    write_file(dir / (name + ".dfa"), to_text(p.count_dfas[i].dfa, p.count_dfas[i].vars));
    write_file(dir / (name + ".rep"), to_text(p.counts[i]));
  }
  write_file(dir / "f.rep", to_text(p.f));
  write_file(dir / "complete", "");
  return p;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

const std::vector<std::int64_t>& expected_f_range() {
  static const std::vector<std::int64_t> range = {-18, -15, -14, -12, -11, -10, -9, -8, -7, -6, -5, -4, -3, -2,
                                                  -1,  0,   1,   2,   3,   4,   5,  6,  7,  8,  9,  12, 13, 18};
  return range;
}

bool TheoremReport::verdict() const {
  return std::all_of(milestones.begin(), milestones.end(), [](const Milestone& m) { return !m.hard || m.pass; });
}

const Milestone* TheoremReport::find(const std::string& name) const {
  for (const auto& m : milestones) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

nlohmann::ordered_json TheoremReport::to_json() const {
  nlohmann::ordered_json out;
  out["milestones"] = nlohmann::ordered_json::array();
  for (const auto& m : milestones) {
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["expected"] = m.expected;
    j["measured"] = m.measured;
    j["hard"] = m.hard;
    j["pass"] = m.pass;
    if (!m.note.empty()) j["note"] = m.note;
    out["milestones"].push_back(std::move(j));
  }
  out["verdict"] = verdict() ? "pass" : "fail";
  return out;
}

std::string TheoremReport::table() const {
  std::ostringstream out;
  for (const auto& m : milestones) {
    out << (m.pass ? "[PASS] " : "[FAIL] ") << (m.hard ? "hard " : "soft ") << m.name << '\n'
        << "       expected: " << m.expected.dump() << '\n'
        << "       measured: " << m.measured.dump() << '\n';
    if (!m.note.empty()) out << "       note: " << m.note << '\n';
  }
  out << "verdict: " << (verdict() ? "pass" : "fail") << '\n';
  return out.str();
}

nlohmann::ordered_json density_json(const DensityReport& report) {
  auto rows = [](const std::vector<DensityRow>& rs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) {
      nlohmann::ordered_json j;
      j["k"] = r.k;
      j["n"] = r.n;
      j["count"] = r.count;
      j["density"] = r.density.get_str();
      j["expected"] = r.expected.get_str();
      j["pass"] = r.pass;
      arr.push_back(std::move(j));
    }
    return arr;
  };
  nlohmann::ordered_json out;
  out["lower"] = rows(report.lower);
  out["lower_limit"] = "1/9";
  out["lower_monotone"] = report.lower_monotone;
  out["upper"] = rows(report.upper);
  out["upper_limit"] = "1/3";
  out["upper_monotone"] = report.upper_monotone;
  out["pass"] = report.pass();
  return out;
}

namespace {

std::int64_t as_integer(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw std::domain_error("expected an integer value, got " + q.get_str());
  return q.get_num().get_si();
}

}  // namespace

TheoremReport verify_theorem(const VerifyConfig& config) {
  return verify_theorem(load_or_build(config.workspace, config.session), config);
}

TheoremReport verify_theorem(const Pipeline& p, const VerifyConfig& config) {
  if (config.agreement == 0 || config.density_depth == 0 || config.orbit_bound == 0) {
    throw std::invalid_argument("verification limits must be positive");
  }
  using json = nlohmann::ordered_json;
  TheoremReport rep;
  auto add = [&](std::string name, json expected, json measured, bool hard, bool pass, std::string note = {}) {
    rep.milestones.push_back(Milestone{std::move(name), std::move(expected), std::move(measured), hard, pass, std::move(note)});
  };

  // G: size and arithmetic agreement.
  auto live_count = [](const Dfa& a) {
    const auto dead = dead_states(a);
    return static_cast<std::size_t>(std::count(dead.begin(), dead.end(), false));
  };
  {
    const std::size_t complete = p.g.dfa.size();
    const std::size_t live = live_count(p.g.dfa);
    add("G automaton states", 143, json{{"complete", complete}, {"live", live}}, false, live == 143 || complete == 143,
        complete != live ? "complete count includes " + std::to_string(complete - live) + " dead sink state(s)" : "");
  }
  {
    const unsigned ti = track_of(p.g, "i"), tj = track_of(p.g, "j"), tk = track_of(p.g, "k"), tn = track_of(p.g, "n");
    std::uint64_t mismatches = 0, checked = 0;
    std::uint64_t values[4];
    for (std::uint64_t i = 0; i <= 64; ++i) {
      for (std::uint64_t j = 0; j <= 64; ++j) {
        for (std::uint64_t k = 0; k <= 64; ++k) {
          const bool in_a = !member_F(i) && !member_F(j) && !member_F(k);
          for (std::uint64_t n = 0; n <= 192; ++n) {
            values[ti] = i;
            values[tj] = j;
            values[tk] = k;
            values[tn] = n;
            const bool expect = in_a && n == i + j + k;
            if (accepts_values(p.g.dfa, values) != expect) ++mismatches;
            ++checked;
          }
        }
      }
    }
    add("G agrees with arithmetic for i,j,k <= 64, n <= 192", 0, json{{"mismatches", mismatches}, {"checked", checked}}, true,
        mismatches == 0);
  }

  // Counting representations.
  {
    json expected = json::array({143, 143, 446, 446});
    json measured = json::array();
    json complete = json::array();
    bool match = true;
    for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
      measured.push_back(p.counts[i].rank());
      complete.push_back(p.count_dfas[i].dfa.size());
      match = match && p.counts[i].rank() == expected[i].get<std::size_t>();
    }
    add("counting representation ranks (r3an, r3anm1, r3an4, r3an4m1)", expected, measured, false, match,
        "minimal complete automata have " + complete.dump() + " states including the dead sink");
  }
  const LinRep combined = p.combined();
  add("combined representation rank", 1178, combined.rank(), true, combined.rank() == 1178);
  add("minimized rank of f", 16, p.f.rank(), true, p.f.rank() == 16);

  // Orbit DFAO and range.
  const Dfao m = orbit_dfao(p.f, config.orbit_bound);
  add("orbit cardinality", 268, m.size(), true, m.size() == 268);
  const auto range = output_range(m);
  add("range of f", expected_f_range(), range, true, range == expected_f_range());
  add("minimum of f", -18, range.front(), true, range.front() == -18);

  // Oracle.
  const std::uint64_t limit = std::max<std::uint64_t>({config.agreement, 348, 2000});
  const RepCountTable table = oracle_r3(limit);
  const auto f_oracle = oracle_f(table);
  {
    std::int64_t min_d = table.d[0];
    std::uint64_t violations = 0;
    for (std::size_t n = 0; n < 87; ++n) {
      min_d = std::min(min_d, table.d[n]);
      if (table.d[n] <= 0) ++violations;
    }
    add("d(n) > 0 for 0 <= n < 87", json{{"min_d_at_least", 1}}, json{{"min_d", min_d}, {"violations", violations}}, true,
        violations == 0);
  }
  {
    Rational min_slack;
    std::uint64_t violations = 0;
    for (std::size_t n = 87; n < 348; ++n) {
      const Rational slack = Rational(table.d[n]) - Rational(static_cast<long>(n), 5) - 7;
      if (n == 87 || slack < min_slack) min_slack = slack;
      if (sgn(slack) <= 0) ++violations;
    }
    add("d(n) > n/5 + 7 for 87 <= n < 348", json{{"violations", 0}}, json{{"min_slack", min_slack.get_str()}, {"violations", violations}},
        true, violations == 0);
  }
  {
    const auto rep_values = evaluate_prefix(p.f, config.agreement);
    std::uint64_t rep_bad = 0, dfao_bad = 0;
    for (std::uint64_t n = 0; n < config.agreement; ++n) {
      if (rep_values[n] != f_oracle[n]) ++rep_bad;
      if (m.value(n) != f_oracle[n]) ++dfao_bad;
    }
    add("f agrees with brute force for n < " + std::to_string(config.agreement), json{{"rep_mismatches", 0}, {"dfao_mismatches", 0}},
        json{{"rep_mismatches", rep_bad}, {"dfao_mismatches", dfao_bad}}, true, rep_bad == 0 && dfao_bad == 0);
  }
  {
    const std::uint64_t count = std::min<std::uint64_t>(config.agreement, 2000);
    json bad = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < kCountSpecs.size(); ++i) {
      const auto values = evaluate_prefix(p.counts[i], count);
      std::uint64_t mismatches = 0;
      for (std::uint64_t n = 0; n < count; ++n) {
        const auto sn = static_cast<std::int64_t>(n);
        const std::int64_t expected = i == 0 ? table.r3_at(sn) : i == 1 ? table.r3_at(sn - 1) : i == 2 ? table.r3_at(sn / 4) : table.r3_at(sn / 4 - 1);
        if (as_integer(values[n]) != expected) ++mismatches;
      }
      bad.push_back(mismatches);
      ok = ok && mismatches == 0;
    }
    add("counting representations agree with brute force for n < " + std::to_string(count), json::array({0, 0, 0, 0}), bad, true, ok);
  }
  {
    std::uint64_t below = 0, outside = 0;
    for (std::uint64_t n = 0; n < config.agreement; ++n) {
      if (f_oracle[n] < -18) ++below;
      if (!std::binary_search(range.begin(), range.end(), f_oracle[n])) ++outside;
    }
    add("brute-force f(n) >= -18 and inside the range for n < " + std::to_string(config.agreement),
        json{{"below_minus_18", 0}, {"outside_range", 0}}, json{{"below_minus_18", below}, {"outside_range", outside}}, true,
        below == 0 && outside == 0);
  }
  {
    // 4 (floor(n/4)/5 + 7) - 18 - (n/5 + 7), exactly.
    Rational min_slack;
    std::uint64_t violations = 0;
    for (std::uint64_t n = 348; n < 348 + config.induction_sample; ++n) {
      const Rational lhs = 4 * (Rational(static_cast<long>(n / 4), 5) + 7) - 18;
      const Rational slack = lhs - (Rational(static_cast<long>(n), 5) + 7);
      if (n == 348 || slack < min_slack) min_slack = slack;
      if (sgn(slack) <= 0) ++violations;
    }
    add("induction step 4(floor(n/4)/5 + 7) - 18 > n/5 + 7 for 348 <= n < " + std::to_string(348 + config.induction_sample),
        json{{"violations", 0}}, json{{"min_slack", min_slack.get_str()}, {"violations", violations}}, true, violations == 0);
  }

  // Densities.
  {
    const DensityReport d = density_report(config.density_depth);
    auto rows = [](const std::vector<DensityRow>& rs, bool expected) {
      auto arr = json::array();
      for (const auto& r : rs) arr.push_back((expected ? r.expected : r.density).get_str());
      return arr;
    };
    const bool lower_ok = d.lower_monotone && std::all_of(d.lower.begin(), d.lower.end(), [](const DensityRow& r) { return r.pass; });
    const bool upper_ok = d.upper_monotone && std::all_of(d.upper.begin(), d.upper.end(), [](const DensityRow& r) { return r.pass; });
    add("lower density checkpoints D_F(3*4^k), k <= " + std::to_string(config.density_depth), rows(d.lower, true), rows(d.lower, false),
        true, lower_ok, "increasing toward 1/9");
    add("upper density checkpoints D_F(4^k), k <= " + std::to_string(config.density_depth), rows(d.upper, true), rows(d.upper, false),
        true, upper_ok, "increasing toward 1/3; this limit is the upper density (limsup), not a liminf");
  }
  return rep;
}

}  // namespace dombi
