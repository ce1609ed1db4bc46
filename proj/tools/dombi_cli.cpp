// Command-line front end. Links only the C interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "dombi/dombi.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

constexpr const char* kWorkspaceEnv = "DOMBI_WORKSPACE";

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Owns a string handed out by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { dombi_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(dombi_status s) {
  if (s != DOMBI_OK) throw CliError(std::string(dombi_status_name(s)) + " error: " + dombi_last_error());
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError("cannot write " + path);
  out << content;
  if (!out.flush()) throw CliError("cannot write " + path);
}

struct Options {
  std::uint64_t agreement = 10000;
  unsigned density_depth = 10;
  std::size_t orbit_bound = 100000;
  std::optional<std::string> workspace;
  std::string json_path;
  std::string session_path;
};

// --workspace wins, then the environment, then ~/.cache/dombi.
// "none" or an empty value disables caching.
std::string resolve_workspace(const Options& o) {
  std::string ws;
  if (o.workspace) {
    ws = *o.workspace;
  } else if (const char* env = std::getenv(kWorkspaceEnv)) {
    ws = env;
  } else if (const char* home = std::getenv("HOME")) {
    ws = std::string(home) + "/.cache/dombi";
  }
  return ws == "none" ? std::string() : ws;
}

std::optional<std::string> session_text(const Options& o) {
  if (o.session_path.empty()) return std::nullopt;
  return read_file(o.session_path);
}

int cmd_verify(const Options& o) {
  const std::string ws = resolve_workspace(o);
  const auto session = session_text(o);
  dombi_verify_options vo{o.agreement, o.density_depth, o.orbit_bound, ws.c_str(), session ? session->c_str() : nullptr};
  Owned json, table;
  int verdict = 0;
  check(dombi_verify(&vo, &json.p, &table.p, &verdict));
  if (o.json_path != "-") std::cout << table.str();
  if (!o.json_path.empty()) write_output(o.json_path, json.str() + "\n");
  return verdict ? kExitPass : kExitFail;
}

int cmd_eval(const Options& o, const std::string& name, const std::string& n, const std::string& formula, const std::string& var) {
  Owned value;
  if (!formula.empty()) {
    const auto session = session_text(o);
    Handle<dombi_session, dombi_session_free> s;
    check(dombi_session_parse(session ? session->c_str() : dombi_default_session(), &s.p));
    Handle<dombi_dfa, dombi_dfa_free> a;
    check(dombi_compile(s.p, formula.c_str(), &a.p));
    Handle<dombi_linrep, dombi_linrep_free> r;
    check(dombi_linrep_count(a.p, var.c_str(), &r.p));
    check(dombi_linrep_eval(r.p, n.c_str(), &value.p));
  } else {
    if (name.empty()) throw CliError("eval needs a name or --formula");
    const std::string ws = resolve_workspace(o);
    const auto session = session_text(o);
    Handle<dombi_pipeline, dombi_pipeline_free> p;
    check(dombi_pipeline_open(ws.c_str(), session ? session->c_str() : nullptr, &p.p));
    check(dombi_pipeline_eval(p.p, name.c_str(), n.c_str(), &value.p));
  }
  std::cout << value.str() << '\n';
  return kExitPass;
}

int cmd_export(const Options& o, const std::string& artifact, const std::string& format, const std::string& formula,
               const std::string& out) {
  Owned text;
  const auto session = session_text(o);
  if (!formula.empty()) {
    if (format != "text" && format != "dot") throw CliError("unknown format: " + format);
    Handle<dombi_session, dombi_session_free> s;
    check(dombi_session_parse(session ? session->c_str() : dombi_default_session(), &s.p));
    Handle<dombi_dfa, dombi_dfa_free> a;
    check(dombi_compile(s.p, formula.c_str(), &a.p));
    check(format == "dot" ? dombi_dfa_dot(a.p, &text.p) : dombi_dfa_text(a.p, &text.p));
  } else {
    if (artifact.empty()) throw CliError("export needs an artifact or --formula");
    const std::string ws = resolve_workspace(o);
    Handle<dombi_pipeline, dombi_pipeline_free> p;
    check(dombi_pipeline_open(ws.c_str(), session ? session->c_str() : nullptr, &p.p));
    check(dombi_pipeline_export(p.p, artifact.c_str(), format.c_str(), o.orbit_bound, &text.p));
  }
  write_output(out, text.str());
  return kExitPass;
}

int cmd_density(const Options& o) {
  Owned json;
  int pass = 0;
  check(dombi_density(o.density_depth, &json.p, &pass));
  if (!o.json_path.empty()) write_output(o.json_path, json.str() + "\n");
  if (o.json_path == "-") return pass ? kExitPass : kExitFail;
  // Same fields as the JSON.
  const auto doc = nlohmann::ordered_json::parse(json.str());
  for (const char* side : {"lower", "upper"}) {
    const std::string name = side;
    std::cout << name << " checkpoints, limit " << doc[name + "_limit"].get<std::string>() << ", monotone "
              << (doc[name + "_monotone"].get<bool>() ? "yes" : "no") << '\n';
    for (const auto& row : doc[name]) {
      std::cout << "  " << (row["pass"].get<bool>() ? "[PASS]" : "[FAIL]") << " k=" << row["k"] << " n=" << row["n"]
                << " count=" << row["count"] << " density=" << row["density"].get<std::string>()
                << " expected=" << row["expected"].get<std::string>() << '\n';
    }
  }
  std::cout << "pass: " << (doc["pass"].get<bool>() ? "true" : "false") << '\n';
  return pass ? kExitPass : kExitFail;
}

int cmd_oracle(const Options& o, std::uint64_t start, std::uint64_t count) {
  Owned json;
  check(dombi_oracle(start, count, &json.p));
  write_output(o.json_path.empty() ? "-" : o.json_path, json.str() + "\n");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automata-based verification that r(3, N \\ F, n) is strictly increasing"};
  app.require_subcommand(1);
  Options o;
  auto limits = [&](CLI::App* sub) {
    sub->add_option("--agreement", o.agreement, "Brute-force agreement range n < N")->check(CLI::PositiveNumber);
    sub->add_option("--density-depth", o.density_depth, "Density checkpoints for k <= depth")->check(CLI::Range(1u, 30u));
    sub->add_option("--orbit-bound", o.orbit_bound, "Maximum orbit size before giving up")->check(CLI::PositiveNumber);
  };
  auto storage = [&](CLI::App* sub) {
    sub->add_option("--workspace", o.workspace, std::string("Artifact cache directory (env ") + kWorkspaceEnv + ", 'none' disables)");
    sub->add_option("--session", o.session_path, "Session file defining FF and g");
  };

  auto* verify = app.add_subcommand("verify", "Run every milestone and print the report");
  limits(verify);
  storage(verify);
  verify->add_option("--json", o.json_path, "Write the JSON report to this path ('-' for stdout)");

  std::vector<std::string> eval_args;
  std::string formula, var = "n";
  auto* eval = app.add_subcommand("eval", "Evaluate r3an, r3anm1, r3an4, r3an4m1 or f at n");
  eval->add_option("args", eval_args, "NAME N, or N with --formula")->required()->expected(1, 2);
  eval->add_option("--formula", formula, "Count satisfying tuples of this formula instead");
  eval->add_option("--var", var, "Variable fixed to n with --formula")->capture_default_str();
  storage(eval);

  std::vector<std::string> export_args;
  std::string out;
  auto* exp = app.add_subcommand("export", "Serialize F, FF, G, M or reps as text or dot");
  exp->add_option("args", export_args, "ARTIFACT [FORMAT], or [FORMAT] with --formula")->expected(0, 2);
  exp->add_option("--formula", formula, "Export the automaton of this formula instead");
  exp->add_option("-o,--output", out, "Output file (default stdout)");
  exp->add_option("--orbit-bound", o.orbit_bound, "Maximum orbit size for M")->check(CLI::PositiveNumber);
  storage(exp);

  auto* density = app.add_subcommand("density", "Exact density checkpoints of F");
  density->add_option("--density-depth", o.density_depth, "Checkpoints for k <= depth")->check(CLI::Range(1u, 30u));
  density->add_option("--json", o.json_path, "Write the JSON to this path ('-' for stdout only)");

  std::uint64_t start = 0, count = 20;
  auto* oracle = app.add_subcommand("oracle", "Brute-force r3, d and f rows");
  oracle->add_option("start", start, "First n")->capture_default_str();
  oracle->add_option("count", count, "Number of rows")->capture_default_str()->check(CLI::PositiveNumber);
  oracle->add_option("--json", o.json_path, "Write the rows to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*eval) {
      const bool want_name = formula.empty();
      if (eval_args.size() != (want_name ? 2u : 1u)) throw CliError(want_name ? "usage: eval NAME N" : "usage: eval --formula F N");
      return cmd_eval(o, want_name ? eval_args[0] : "", eval_args.back(), formula, var);
    }
    if (*exp) {
      const bool want_name = formula.empty();
      if (want_name ? export_args.empty() : export_args.size() > 1) {
        throw CliError(want_name ? "usage: export ARTIFACT [FORMAT]" : "usage: export --formula F [FORMAT]");
      }
      const std::string artifact = want_name ? export_args[0] : "";
      const std::size_t fmt_at = want_name ? 1 : 0;
      const std::string format = export_args.size() > fmt_at ? export_args[fmt_at] : "text";
      return cmd_export(o, artifact, format, formula, out);
    }
    if (*density) return cmd_density(o);
    if (*oracle) return cmd_oracle(o, start, count);
  } catch (const std::exception& e) {
    std::cerr << "dombi: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
