#include "dombi/dombi.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "dombi/pipeline.hpp"

struct dombi_session {
  dombi::Registry registry;
};
struct dombi_dfa {
  dombi::NamedDfa named;
};
struct dombi_linrep {
  dombi::LinRep rep;
};
struct dombi_dfao {
  dombi::Dfao dfao;
};
struct dombi_pipeline {
  dombi::Pipeline pipeline;
};

namespace {

thread_local std::string last_error;

// Marks errors raised while reading serialized input so they map to PARSE.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

dombi_status fail(dombi_status s, const std::string& message) {
  last_error = message;
  return s;
}

template <class F>
dombi_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const dombi::ParseError& e) {
    return fail(DOMBI_ERR_PARSE, e.what());
  } catch (const InputError& e) {
    return fail(DOMBI_ERR_PARSE, e.what());
  } catch (const dombi::CompileError& e) {
    return fail(DOMBI_ERR_COMPILE, e.what());
  } catch (const dombi::OrbitBoundError& e) {
    return fail(DOMBI_ERR_ORBIT_BOUND, e.what());
  } catch (const std::domain_error& e) {
    return fail(DOMBI_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DOMBI_ERR_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(DOMBI_ERR_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(DOMBI_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DOMBI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DOMBI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DOMBI_ERR_INTERNAL, "unknown error");
  }
}

#define REQUIRE_ARG(cond)                                                     \
  do {                                                                        \
    if (!(cond)) return fail(DOMBI_ERR_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dombi::Natural parse_natural(const char* text) {
  const std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a natural number: '" + s + "'");
  }
  return dombi::Natural(s);
}

template <class F>
auto parse_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

}  // namespace

extern "C" {

const char* dombi_last_error(void) { return last_error.c_str(); }

const char* dombi_status_name(dombi_status status) {
  switch (status) {
    case DOMBI_OK: return "ok";
    case DOMBI_ERR_ARGUMENT: return "argument";
    case DOMBI_ERR_PARSE: return "parse";
    case DOMBI_ERR_COMPILE: return "compile";
    case DOMBI_ERR_ORBIT_BOUND: return "orbit-bound";
    case DOMBI_ERR_DOMAIN: return "domain";
    case DOMBI_ERR_IO: return "io";
    case DOMBI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void dombi_string_free(char* s) { std::free(s); }

const char* dombi_default_session(void) { return dombi::kDefaultSession; }

// ---- sessions and compilation ----

dombi_status dombi_session_parse(const char* text, dombi_session** out) {
  REQUIRE_ARG(text && out);
  return guarded([&] {
    auto s = std::make_unique<dombi_session>();
    s->registry = dombi::build_registry(dombi::parse_session(text));
    *out = s.release();
    return DOMBI_OK;
  });
}

void dombi_session_free(dombi_session* s) { delete s; }

dombi_status dombi_compile(const dombi_session* s, const char* formula, dombi_dfa** out) {
  REQUIRE_ARG(formula && out);
  return guarded([&] {
    static const dombi::Registry empty;
    auto a = std::make_unique<dombi_dfa>();
    a->named = dombi::compile(std::string_view(formula), s ? s->registry : empty);
    *out = a.release();
    return DOMBI_OK;
  });
}

dombi_status dombi_session_predicate(const dombi_session* s, const char* name, dombi_dfa** out) {
  REQUIRE_ARG(s && name && out);
  const dombi::NamedDfa* p = s->registry.predicate(name);
  if (!p) return fail(DOMBI_ERR_ARGUMENT, std::string("unknown predicate: ") + name);
  return guarded([&] {
    *out = new dombi_dfa{*p};
    return DOMBI_OK;
  });
}

void dombi_dfa_free(dombi_dfa* a) { delete a; }

dombi_status dombi_dfa_states(const dombi_dfa* a, size_t* out) {
  REQUIRE_ARG(a && out);
  *out = a->named.dfa.size();
  return DOMBI_OK;
}

dombi_status dombi_dfa_tracks(const dombi_dfa* a, size_t* out) {
  REQUIRE_ARG(a && out);
  *out = a->named.dfa.tracks();
  return DOMBI_OK;
}

dombi_status dombi_dfa_track_name(const dombi_dfa* a, size_t track, char** out) {
  REQUIRE_ARG(a && out);
  REQUIRE_ARG(track < a->named.vars.size());
  return guarded([&] {
    *out = copy_string(a->named.vars[track]);
    return DOMBI_OK;
  });
}

dombi_status dombi_dfa_accepts(const dombi_dfa* a, const uint64_t* values, size_t count, int* out) {
  REQUIRE_ARG(a && out && (values || count == 0));
  if (count != a->named.dfa.tracks()) return fail(DOMBI_ERR_ARGUMENT, "value count does not match the track count");
  return guarded([&] {
    *out = dombi::accepts_values(a->named.dfa, std::span<const uint64_t>(values, count)) ? 1 : 0;
    return DOMBI_OK;
  });
}

dombi_status dombi_dfa_text(const dombi_dfa* a, char** out) {
  REQUIRE_ARG(a && out);
  return guarded([&] {
    *out = copy_string(dombi::to_text(a->named.dfa, a->named.vars));
    return DOMBI_OK;
  });
}

dombi_status dombi_dfa_dot(const dombi_dfa* a, char** out) {
  REQUIRE_ARG(a && out);
  return guarded([&] {
    *out = copy_string(dombi::to_dot(a->named.dfa, a->named.vars));
    return DOMBI_OK;
  });
}

// ---- linear representations ----

dombi_status dombi_linrep_count(const dombi_dfa* a, const char* var, dombi_linrep** out) {
  REQUIRE_ARG(a && var && out);
  const auto& vars = a->named.vars;
  const auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end()) return fail(DOMBI_ERR_ARGUMENT, std::string("automaton has no variable ") + var);
  return guarded([&] {
    *out = new dombi_linrep{dombi::count_rep(a->named.dfa, static_cast<unsigned>(it - vars.begin()))};
    return DOMBI_OK;
  });
}

dombi_status dombi_linrep_from_text(const char* text, dombi_linrep** out) {
  REQUIRE_ARG(text && out);
  return guarded([&] {
    *out = new dombi_linrep{parse_input([&] { return dombi::linrep_from_text(text); })};
    return DOMBI_OK;
  });
}

void dombi_linrep_free(dombi_linrep* r) { delete r; }

dombi_status dombi_linrep_rank(const dombi_linrep* r, size_t* out) {
  REQUIRE_ARG(r && out);
  *out = r->rep.rank();
  return DOMBI_OK;
}

dombi_status dombi_linrep_eval(const dombi_linrep* r, const char* n, char** out) {
  REQUIRE_ARG(r && n && out);
  return guarded([&] {
    *out = copy_string(dombi::evaluate(r->rep, parse_natural(n)).get_str());
    return DOMBI_OK;
  });
}

dombi_status dombi_linrep_combine(const dombi_linrep* const* terms, const long* coefficients, size_t count, dombi_linrep** out) {
  REQUIRE_ARG(terms && coefficients && count > 0 && out);
  for (size_t i = 0; i < count; ++i) REQUIRE_ARG(terms[i]);
  return guarded([&] {
    std::vector<std::pair<long, dombi::LinRep>> parts;
    for (size_t i = 0; i < count; ++i) parts.emplace_back(coefficients[i], terms[i]->rep);
    *out = new dombi_linrep{dombi::combine(parts)};
    return DOMBI_OK;
  });
}

dombi_status dombi_linrep_minimize(const dombi_linrep* r, dombi_linrep** out) {
  REQUIRE_ARG(r && out);
  return guarded([&] {
    *out = new dombi_linrep{dombi::minimize_rep(r->rep)};
    return DOMBI_OK;
  });
}

dombi_status dombi_linrep_text(const dombi_linrep* r, char** out) {
  REQUIRE_ARG(r && out);
  return guarded([&] {
    *out = copy_string(dombi::to_text(r->rep));
    return DOMBI_OK;
  });
}

// ---- automata with output ----

dombi_status dombi_orbit(const dombi_linrep* r, size_t bound, dombi_dfao** out) {
  REQUIRE_ARG(r && out && bound > 0);
  return guarded([&] {
    *out = new dombi_dfao{dombi::orbit_dfao(r->rep, bound)};
    return DOMBI_OK;
  });
}

void dombi_dfao_free(dombi_dfao* d) { delete d; }

dombi_status dombi_dfao_states(const dombi_dfao* d, size_t* out) {
  REQUIRE_ARG(d && out);
  *out = d->dfao.size();
  return DOMBI_OK;
}

dombi_status dombi_dfao_value(const dombi_dfao* d, uint64_t n, int64_t* out) {
  REQUIRE_ARG(d && out);
  return guarded([&] {
    *out = d->dfao.value(n);
    return DOMBI_OK;
  });
}

dombi_status dombi_dfao_range(const dombi_dfao* d, int64_t* values, size_t capacity, size_t* count) {
  REQUIRE_ARG(d && count && (values || capacity == 0));
  return guarded([&] {
    const auto range = dombi::output_range(d->dfao);
    for (size_t i = 0; i < range.size() && i < capacity; ++i) values[i] = range[i];
    *count = range.size();
    return DOMBI_OK;
  });
}

dombi_status dombi_dfao_text(const dombi_dfao* d, char** out) {
  REQUIRE_ARG(d && out);
  return guarded([&] {
    *out = copy_string(dombi::to_text(d->dfao));
    return DOMBI_OK;
  });
}

dombi_status dombi_dfao_dot(const dombi_dfao* d, char** out) {
  REQUIRE_ARG(d && out);
  return guarded([&] {
    *out = copy_string(dombi::to_dot(d->dfao));
    return DOMBI_OK;
  });
}

// ---- pipeline ----

dombi_status dombi_pipeline_open(const char* workspace, const char* session, dombi_pipeline** out) {
  REQUIRE_ARG(out);
  return guarded([&] {
    *out = new dombi_pipeline{dombi::load_or_build(workspace ? workspace : "", session ? session : dombi::kDefaultSession)};
    return DOMBI_OK;
  });
}

void dombi_pipeline_free(dombi_pipeline* p) { delete p; }

dombi_status dombi_pipeline_eval(const dombi_pipeline* p, const char* name, const char* n, char** out) {
  REQUIRE_ARG(p && name && n && out);
  return guarded([&] {
    *out = copy_string(dombi::evaluate(p->pipeline.rep(name), parse_natural(n)).get_str());
    return DOMBI_OK;
  });
}

dombi_status dombi_pipeline_rep(const dombi_pipeline* p, const char* name, dombi_linrep** out) {
  REQUIRE_ARG(p && name && out);
  return guarded([&] {
    *out = new dombi_linrep{p->pipeline.rep(name)};
    return DOMBI_OK;
  });
}

dombi_status dombi_pipeline_export(const dombi_pipeline* p, const char* artifact, const char* format, size_t orbit_bound,
                                   char** out) {
  REQUIRE_ARG(p && artifact && format && out && orbit_bound > 0);
  const std::string what(artifact), fmt(format);
  if (fmt != "text" && fmt != "dot") return fail(DOMBI_ERR_ARGUMENT, "unknown format: " + fmt);
  return guarded([&] {
    const dombi::Pipeline& pl = p->pipeline;
    const bool dot = fmt == "dot";
    std::string result;
    if (what == "F") {
      result = dot ? dombi::to_dot(pl.set_F) : dombi::to_text(pl.set_F);
    } else if (what == "FF") {
      result = dot ? dombi::to_dot(pl.sequence) : dombi::to_text(pl.sequence);
    } else if (what == "G") {
      result = dot ? dombi::to_dot(pl.g.dfa, pl.g.vars) : dombi::to_text(pl.g.dfa, pl.g.vars);
    } else if (what == "M") {
      const dombi::Dfao m = dombi::orbit_dfao(pl.f, orbit_bound);
      result = dot ? dombi::to_dot(m) : dombi::to_text(m);
    } else if (what == "reps") {
      if (dot) throw std::invalid_argument("representations have no dot form");
      for (const auto& spec : dombi::kCountSpecs) {
        result += std::string("# ") + spec.name + " " + spec.formula + "\n" + dombi::to_text(pl.rep(spec.name));
      }
      result += "# f\n" + dombi::to_text(pl.f);
    } else {
      throw std::invalid_argument("unknown artifact: " + what);
    }
    *out = copy_string(result);
    return DOMBI_OK;
  });
}

dombi_status dombi_verify(const dombi_verify_options* options, char** report_json, char** table, int* verdict) {
  REQUIRE_ARG(verdict);
  return guarded([&] {
    dombi::VerifyConfig config;
    if (options) {
      if (options->agreement) config.agreement = options->agreement;
      if (options->density_depth) config.density_depth = options->density_depth;
      if (options->orbit_bound) config.orbit_bound = options->orbit_bound;
      if (options->workspace) config.workspace = options->workspace;
      if (options->session) config.session = options->session;
    }
    const dombi::TheoremReport report = dombi::verify_theorem(config);
    std::string json = report.to_json().dump(2);
    std::string text = report.table();
    if (report_json) *report_json = copy_string(json);
    if (table) {
      try {
        *table = copy_string(text);
      } catch (...) {
        if (report_json) std::free(*report_json);
        throw;
      }
    }
    *verdict = report.verdict() ? 1 : 0;
    return DOMBI_OK;
  });
}

dombi_status dombi_density(unsigned depth, char** json, int* pass) {
  REQUIRE_ARG(json && pass);
  return guarded([&] {
    const dombi::DensityReport d = dombi::density_report(depth);
    *json = copy_string(dombi::density_json(d).dump(2));
    *pass = d.pass() ? 1 : 0;
    return DOMBI_OK;
  });
}

dombi_status dombi_oracle(uint64_t start, uint64_t count, char** json) {
  REQUIRE_ARG(json && count > 0);
  if (start + count < start || start + count > 100000) return fail(DOMBI_ERR_ARGUMENT, "oracle range must end at or below 100000");
  return guarded([&] {
    const dombi::RepCountTable t = dombi::oracle_r3(start + count);
    const auto f = dombi::oracle_f(t);
    auto rows = nlohmann::ordered_json::array();
    for (uint64_t n = start; n < start + count; ++n) {
      rows.push_back({{"n", n}, {"r3", t.r3[n]}, {"d", t.d[n]}, {"f", f[n]}});
    }
    *json = copy_string(rows.dump(2));
    return DOMBI_OK;
  });
}

}  // extern "C"
