#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "occt/session.hpp"
#include "occt/subtype.hpp"

#ifndef OCCT_CORPUS_DIR
#define OCCT_CORPUS_DIR "tests/corpus"
#endif

namespace occt::testing {

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(OCCT_CORPUS_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::map<std::string, Type> corpus_builtins(const std::string& program) {
  auto b = Checker::default_builtins();
  std::string stem = program.substr(0, program.rfind('.'));
  std::ifstream in(std::string(OCCT_CORPUS_DIR) + "/" + stem + ".builtins.json");
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    for (const auto& [n, t] : parse_builtins_json(ss.str())) b[n] = t;
  }
  return b;
}

/// Results of checking a corpus program, by declared name.
struct Checked {
  std::map<std::string, DeclResult> decls;
  std::vector<DeclResult> all;
};

inline Checked check_corpus(Session& s, const std::string& name) {
  Checked c;
  c.all = s.check(read_corpus(name));
  for (const auto& r : c.all)
    if (!r.name.empty()) c.decls[r.name] = r;
  return c;
}

inline Type ty(const std::string& src, const TypeBindings& names = {}) { return parse_type(src, names); }

}  // namespace occt::testing

#define EXPECT_EQUIV(a, b) EXPECT_TRUE(::occt::equiv((a), (b))) << pretty_type(a) << "  vs  " << pretty_type(b)
#define EXPECT_SUBTYPE(a, b) EXPECT_TRUE(::occt::subtype((a), (b))) << pretty_type(a) << "  <=  " << pretty_type(b)
