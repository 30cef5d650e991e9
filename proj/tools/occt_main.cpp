// occt: type checker and toplevel for the occurrence-typing language.
//
//   occt check FILE...   check programs, print the type of each declaration
//   occt repl            interactive toplevel

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "occt/session.hpp"

namespace {

using namespace occt;

struct Options {
  std::optional<int> iters;
  long fuel = 10000;
  bool json = false;
  bool strict = false;
  bool allow_arrow_tests = false;
  std::string absinf = "plusplus";
  std::string builtins;
  std::vector<std::string> files;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--iters", o.iters, "refinement iterations per type-case")->check(CLI::PositiveNumber);
  app->add_option("--fuel", o.fuel, "evaluation step limit")->check(CLI::PositiveNumber);
  app->add_flag("--allow-arrow-tests", o.allow_arrow_tests, "allow type-cases on precise function types");
  app->add_option("--absinf", o.absinf, "lambda inference rule")->check(CLI::IsMember({"plus", "plusplus"}));
  app->add_option("--builtins", o.builtins, "JSON object of extra builtin names and types")
      ->check(CLI::ExistingFile);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Session make_session(const Options& o) {
  CheckConfig cfg;
  cfg.iters = o.iters;
  if (!cfg.iters) {
    if (const char* env = std::getenv("OCCT_ITERS")) {
      try {
        int n = std::stoi(env);
        if (n > 0) cfg.iters = n;
      } catch (const std::exception&) {
        std::cerr << "warning: ignoring OCCT_ITERS=" << env << "\n";
      }
    }
  }
  cfg.allow_arrow_tests = o.allow_arrow_tests;
  cfg.absinf = o.absinf == "plus" ? AbsInf::Plus : AbsInf::PlusPlus;
  auto builtins = Checker::default_builtins();
  if (!o.builtins.empty())
    for (const auto& [n, t] : parse_builtins_json(read_file(o.builtins))) builtins[n] = t;
  return Session(cfg, builtins);
}

int cmd_check(const Options& o) {
  nlohmann::json report = nlohmann::json::array();
  bool failed = false;
  for (const auto& file : o.files) {
    std::string src;
    try {
      src = read_file(file);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      failed = true;
      continue;
    }
    Session s = make_session(o);
    for (const DeclResult& r : s.check(src)) {
      if (!r.errors.empty() || (o.strict && !r.warnings.empty())) failed = true;
      if (o.json) {
        nlohmann::json j;
        j["file"] = file;
        j["name"] = r.name;
        j["type"] = r.type ? nlohmann::json(pretty_type(*r.type)) : nlohmann::json(nullptr);
        j["warnings"] = nlohmann::json::array();
        j["errors"] = nlohmann::json::array();
        for (const auto& w : r.warnings) j["warnings"].push_back(w.to_string());
        for (const auto& e : r.errors) j["errors"].push_back(e.to_string());
        report.push_back(j);
        continue;
      }
      if (r.type) std::cout << (r.name.empty() ? "-" : r.name) << " : " << pretty_type(*r.type) << "\n";
      for (const auto& w : r.warnings) std::cout << file << ": " << w.to_string() << "\n";
      for (const auto& e : r.errors) std::cerr << file << ": " << e.to_string() << "\n";
    }
  }
  if (o.json) std::cout << report.dump(2) << "\n";
  return failed ? 1 : 0;
}

bool needs_more(const std::string& src, Session& s) {
  ParseContext ctx = s.context();
  try {
    parse_program(src, ctx);
  } catch (const SyntaxError& e) {
    return std::string(e.what()).find("end of input") != std::string::npos;
  }
  return false;
}

void print_eval(Session& s, const ExprPtr& e, Type t, long fuel) {
  EvalResult r = s.evaluate(e, fuel);
  switch (r.status) {
    case EvalResult::Status::Done:
      std::cout << print_expr(r.expr) << " : " << pretty_type(t) << "\n";
      break;
    case EvalResult::Status::OutOfFuel:
      std::cout << "- : " << pretty_type(t) << " (out of fuel after " << r.steps << " steps)\n";
      break;
    case EvalResult::Status::Stuck:
      std::cout << "stuck: " << print_expr(r.expr) << "\n";
      break;
  }
}

int cmd_repl(Options o) {
  Session s = make_session(o);
  std::string line, buf;
  bool tty = isatty(0);
  auto prompt = [&] {
    if (tty) std::cout << (buf.empty() ? "# " : "  ") << std::flush;
  };
  prompt();
  while (std::getline(std::cin, line)) {
    if (buf.empty()) {
      std::istringstream cmd(line);
      std::string word;
      cmd >> word;
      if (word == ":q" || word == ":quit") return 0;
      if (word == ":set") {
        std::string key;
        long n = 0;
        if (cmd >> key >> n && n > 0 && (key == "fuel" || key == "iters")) {
          if (key == "fuel") o.fuel = n;
          else s.checker().config().iters = static_cast<int>(n);
        } else {
          std::cout << "usage: :set fuel N | :set iters N\n";
        }
        prompt();
        continue;
      }
      if (word == ":t" || word == ":type") {
        std::string rest = line.substr(line.find(word) + word.size());
        try {
          auto e = parse_expr(rest, s.context());
          s.checker().clear_diagnostics();
          Type t = s.type_expr(e);
          std::cout << pretty_type(t) << "\n";
          for (const auto& w : s.checker().warnings()) std::cout << w.to_string() << "\n";
        } catch (const SyntaxError& e) {
          std::cout << "error: " << e.what() << "\n";
        } catch (const TypeError& e) {
          std::cout << "error: [" << e.rule << "] " << e.what() << "\n";
        }
        prompt();
        continue;
      }
      if (word.empty()) {
        prompt();
        continue;
      }
    }
    buf += line + "\n";
    if (needs_more(buf, s)) {
      prompt();
      continue;
    }
    for (const DeclResult& r : s.check(buf)) {
      for (const auto& e : r.errors) std::cout << e.to_string() << "\n";
      for (const auto& w : r.warnings) std::cout << w.to_string() << "\n";
      if (!r.type) continue;
      if (!r.name.empty())
        std::cout << r.name << " : " << pretty_type(*r.type) << "\n";
      else
        print_eval(s, r.expr, *r.type, o.fuel);
    }
    buf.clear();
    prompt();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occt: occurrence typing for set-theoretic types"};
  app.require_subcommand(1);
  Options o;
  auto* check = app.add_subcommand("check", "check programs and print inferred types");
  add_common(check, o);
  check->add_flag("--json", o.json, "machine-readable report");
  check->add_flag("--strict", o.strict, "treat warnings as errors");
  check->add_option("files", o.files, "source files")->required()->check(CLI::ExistingFile);
  auto* repl = app.add_subcommand("repl", "interactive toplevel");
  add_common(repl, o);
  CLI11_PARSE(app, argc, argv);
  try {
    if (check->parsed()) return cmd_check(o);
    return cmd_repl(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
