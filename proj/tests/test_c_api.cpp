// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "dombi/dombi.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  dombi_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("compile and query an automaton") {
  dombi_dfa* a = nullptr;
  REQUIRE(dombi_compile(nullptr, "z=x+y", &a) == DOMBI_OK);
  size_t tracks = 0, states = 0;
  CHECK(dombi_dfa_tracks(a, &tracks) == DOMBI_OK);
  CHECK(tracks == 3);
  CHECK(dombi_dfa_states(a, &states) == DOMBI_OK);
  CHECK(states > 0);
  char* name = nullptr;
  CHECK(dombi_dfa_track_name(a, 2, &name) == DOMBI_OK);
  CHECK(take(name) == "z");
  const uint64_t yes[] = {2, 3, 5}, no[] = {2, 3, 6};
  int ok = -1;
  CHECK(dombi_dfa_accepts(a, yes, 3, &ok) == DOMBI_OK);
  CHECK(ok == 1);
  CHECK(dombi_dfa_accepts(a, no, 3, &ok) == DOMBI_OK);
  CHECK(ok == 0);
  CHECK(dombi_dfa_accepts(a, yes, 2, &ok) == DOMBI_ERR_ARGUMENT);
  char* text = nullptr;
  CHECK(dombi_dfa_text(a, &text) == DOMBI_OK);
  CHECK(take(text).rfind("# tracks: x y z\n3\n", 0) == 0);
  char* dot = nullptr;
  CHECK(dombi_dfa_dot(a, &dot) == DOMBI_OK);
  CHECK(take(dot).rfind("digraph", 0) == 0);

  dombi_linrep* r = nullptr;
  REQUIRE(dombi_linrep_count(a, "z", &r) == DOMBI_OK);
  char* v = nullptr;
  CHECK(dombi_linrep_eval(r, "10", &v) == DOMBI_OK);
  CHECK(take(v) == "11");
  CHECK(dombi_linrep_eval(r, "-1", &v) == DOMBI_ERR_ARGUMENT);
  CHECK(dombi_linrep_count(a, "w", &r) == DOMBI_ERR_ARGUMENT);
  dombi_linrep_free(r);
  dombi_dfa_free(a);
}

TEST_CASE("errors report a status and a message") {
  dombi_dfa* a = nullptr;
  CHECK(dombi_compile(nullptr, "x = = 1", &a) == DOMBI_ERR_PARSE);
  CHECK(std::string(dombi_last_error()).size() > 0);
  CHECK(dombi_compile(nullptr, "$missing(x)", &a) == DOMBI_ERR_COMPILE);
  CHECK(dombi_compile(nullptr, nullptr, &a) == DOMBI_ERR_ARGUMENT);
  CHECK(a == nullptr);
  dombi_session* s = nullptr;
  CHECK(dombi_session_parse("this is not a session", &s) != DOMBI_OK);
  CHECK(std::string(dombi_status_name(DOMBI_ERR_ORBIT_BOUND)) == "orbit-bound");
  dombi_linrep* r = nullptr;
  CHECK(dombi_linrep_from_text("2\n1 x\n", &r) == DOMBI_ERR_PARSE);
  // Freeing null handles is a no-op.
  dombi_dfa_free(nullptr);
  dombi_linrep_free(nullptr);
  dombi_dfao_free(nullptr);
  dombi_session_free(nullptr);
  dombi_pipeline_free(nullptr);
  dombi_string_free(nullptr);
}

TEST_CASE("sessions and predicates") {
  dombi_session* s = nullptr;
  REQUIRE(dombi_session_parse(dombi_default_session(), &s) == DOMBI_OK);
  dombi_dfa* g = nullptr;
  REQUIRE(dombi_session_predicate(s, "g", &g) == DOMBI_OK);
  size_t tracks = 0;
  dombi_dfa_tracks(g, &tracks);
  CHECK(tracks == 4);
  const uint64_t t[] = {1, 1, 1, 3}, f[] = {3, 0, 0, 3};
  int ok = -1;
  dombi_dfa_accepts(g, t, 4, &ok);
  CHECK(ok == 1);
  dombi_dfa_accepts(g, f, 4, &ok);
  CHECK(ok == 0);
  dombi_dfa* missing = nullptr;
  CHECK(dombi_session_predicate(s, "h", &missing) == DOMBI_ERR_ARGUMENT);
  dombi_dfa* ff1 = nullptr;
  REQUIRE(dombi_compile(s, "FF[n]=@1", &ff1) == DOMBI_OK);
  size_t states = 0;
  dombi_dfa_states(ff1, &states);
  CHECK(states == 5);
  dombi_dfa_free(ff1);
  dombi_dfa_free(g);
  dombi_session_free(s);
}

TEST_CASE("linrep combine, minimize, orbit") {
  dombi_dfa* a = nullptr;
  REQUIRE(dombi_compile(nullptr, "n=i+j & i<2", &a) == DOMBI_OK);
  dombi_linrep* r = nullptr;
  REQUIRE(dombi_linrep_count(a, "n", &r) == DOMBI_OK);
  const dombi_linrep* terms[] = {r, r};
  const long coeff[] = {3, -1};
  dombi_linrep* c = nullptr;
  REQUIRE(dombi_linrep_combine(terms, coeff, 2, &c) == DOMBI_OK);
  dombi_linrep* m = nullptr;
  REQUIRE(dombi_linrep_minimize(c, &m) == DOMBI_OK);
  size_t rank_c = 0, rank_m = 0;
  dombi_linrep_rank(c, &rank_c);
  dombi_linrep_rank(m, &rank_m);
  CHECK(rank_m < rank_c);
  char* text = nullptr;
  REQUIRE(dombi_linrep_text(m, &text) == DOMBI_OK);
  dombi_linrep* back = nullptr;
  CHECK(dombi_linrep_from_text(text, &back) == DOMBI_OK);
  dombi_string_free(text);

  // 2 * min(n + 1, 2): bounded, so the orbit is finite.
  dombi_dfao* d = nullptr;
  REQUIRE(dombi_orbit(back, 1000, &d) == DOMBI_OK);
  int64_t value = 0;
  for (uint64_t n = 0; n < 50; ++n) {
    CHECK(dombi_dfao_value(d, n, &value) == DOMBI_OK);
    CHECK(value == 2 * (n + 1 < 2 ? n + 1 : 2));
  }
  size_t count = 0;
  int64_t range[8];
  CHECK(dombi_dfao_range(d, range, 8, &count) == DOMBI_OK);
  REQUIRE(count == 2);
  CHECK(range[0] == 2);
  CHECK(range[1] == 4);
  CHECK(dombi_dfao_range(d, nullptr, 0, &count) == DOMBI_OK);
  CHECK(count == 2);
  char* dt = nullptr;
  CHECK(dombi_dfao_text(d, &dt) == DOMBI_OK);
  dombi_string_free(dt);
  CHECK(dombi_dfao_dot(d, &dt) == DOMBI_OK);
  dombi_string_free(dt);

  dombi_dfa* unbounded = nullptr;
  REQUIRE(dombi_compile(nullptr, "n=i+j", &unbounded) == DOMBI_OK);
  dombi_linrep* grow = nullptr;
  REQUIRE(dombi_linrep_count(unbounded, "n", &grow) == DOMBI_OK);
  dombi_dfao* none = nullptr;
  CHECK(dombi_orbit(grow, 20, &none) == DOMBI_ERR_ORBIT_BOUND);
  CHECK(std::string(dombi_last_error()).find("20") != std::string::npos);

  for (auto* x : {r, c, m, back, grow}) dombi_linrep_free(x);
  dombi_dfao_free(d);
  dombi_dfa_free(a);
  dombi_dfa_free(unbounded);
}

TEST_CASE("density and oracle") {
  char* json = nullptr;
  int pass = 0;
  REQUIRE(dombi_density(4, &json, &pass) == DOMBI_OK);
  CHECK(pass == 1);
  const std::string d = take(json);
  CHECK(d.find("\"5/16\"") != std::string::npos);
  CHECK(dombi_density(0, &json, &pass) == DOMBI_ERR_ARGUMENT);
  REQUIRE(dombi_oracle(3, 2, &json) == DOMBI_OK);
  const std::string o = take(json);
  CHECK(o.find("\"n\": 3") != std::string::npos);
  CHECK(o.find("\"r3\": 7") != std::string::npos);
  CHECK(dombi_oracle(0, 0, &json) == DOMBI_ERR_ARGUMENT);
}

TEST_CASE("pipeline through the C interface") {
  const char* ws = std::getenv("DOMBI_TEST_WORKSPACE");
  dombi_pipeline* p = nullptr;
  REQUIRE(dombi_pipeline_open(ws, nullptr, &p) == DOMBI_OK);
  char* v = nullptr;
  CHECK(dombi_pipeline_eval(p, "f", "0", &v) == DOMBI_OK);
  CHECK(take(v) == "-3");
  CHECK(dombi_pipeline_eval(p, "r3an", "3", &v) == DOMBI_OK);
  CHECK(take(v) == "7");
  CHECK(dombi_pipeline_eval(p, "r3an4m1", "3", &v) == DOMBI_OK);
  CHECK(take(v) == "0");
  CHECK(dombi_pipeline_eval(p, "nope", "3", &v) == DOMBI_ERR_ARGUMENT);
  char* out = nullptr;
  CHECK(dombi_pipeline_export(p, "F", "dot", 100000, &out) == DOMBI_OK);
  CHECK(take(out).find("3 [shape=doublecircle]") != std::string::npos);
  CHECK(dombi_pipeline_export(p, "G", "text", 100000, &out) == DOMBI_OK);
  CHECK(take(out).rfind("# tracks: i j k n\n4\n", 0) == 0);
  CHECK(dombi_pipeline_export(p, "reps", "dot", 100000, &out) == DOMBI_ERR_ARGUMENT);
  CHECK(dombi_pipeline_export(p, "X", "text", 100000, &out) == DOMBI_ERR_ARGUMENT);
  CHECK(dombi_pipeline_export(p, "F", "svg", 100000, &out) == DOMBI_ERR_ARGUMENT);
  CHECK(dombi_pipeline_export(p, "M", "text", 10, &out) == DOMBI_ERR_ORBIT_BOUND);
  dombi_linrep* f = nullptr;
  REQUIRE(dombi_pipeline_rep(p, "f", &f) == DOMBI_OK);
  size_t rank = 0;
  dombi_linrep_rank(f, &rank);
  CHECK(rank == 16);
  dombi_linrep_free(f);
  dombi_pipeline_free(p);

  dombi_verify_options opts{500, 6, 10, ws, nullptr};
  int verdict = -1;
  char* report = nullptr;
  CHECK(dombi_verify(&opts, &report, nullptr, &verdict) == DOMBI_ERR_ORBIT_BOUND);
  opts.orbit_bound = 0;
  char* table = nullptr;
  REQUIRE(dombi_verify(&opts, &report, &table, &verdict) == DOMBI_OK);
  const std::string j = take(report), t = take(table);
  CHECK(j.find("\"milestones\"") < j.find("\"verdict\""));
  CHECK((verdict == 1) == (j.find("\"verdict\": \"pass\"") != std::string::npos));
  CHECK((verdict == 1) == (t.find("verdict: pass") != std::string::npos));
}
