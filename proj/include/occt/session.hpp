#pragma once

// Checking whole programs: top-level declarations are typed in order and
// each `let` binds its name for the declarations that follow.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "occt/checker.hpp"
#include "occt/eval.hpp"
#include "occt/parser.hpp"

namespace occt {

struct DeclResult {
  std::string name;  // empty for a bare expression or a type declaration
  Span span;
  ExprPtr expr;  // null for a type declaration or a syntax error
  std::optional<Type> type;
  std::vector<Diagnostic> warnings;
  std::vector<Diagnostic> errors;
};

/// Parse a JSON object mapping builtin names to type strings.
/// Throws std::runtime_error on malformed input.
std::map<std::string, Type> parse_builtins_json(const std::string& text, const TypeBindings& types = {});

class Session {
 public:
  explicit Session(CheckConfig cfg = {}, std::map<std::string, Type> builtins = Checker::default_builtins());

  /// Check every declaration of `src`. A syntax error yields a single
  /// result carrying it; declarations parsed before it are kept.
  std::vector<DeclResult> check(const std::string& src);

  /// Type one expression in the current global environment.
  Type type_expr(const ExprPtr& e);

  Checker& checker() { return checker_; }
  ParseContext& context() { return ctx_; }
  const TypeEnv& globals() const { return globals_; }
  const std::map<std::string, ExprPtr>& definitions() const { return defs_; }

  /// Evaluate `e` with the values of the top-level bindings it mentions
  /// substituted in. Each binding is evaluated once, on first use.
  EvalResult evaluate(const ExprPtr& e, long fuel);
  Evaluator& evaluator() { return evaluator_; }

 private:
  ExprPtr close(const ExprPtr& e, long fuel);
  Type closure_type(const ExprPtr& lam);

  // Lambda values of globals, recognised inside closures so that they are
  // typed by their declared type rather than inferred again.
  struct Folded {
    ExprPtr value;
    std::string var;
    Type type;
  };

  Checker checker_;
  Evaluator evaluator_;
  ParseContext ctx_;
  TypeEnv globals_;
  std::map<std::string, ExprPtr> defs_;
  std::map<std::string, EvalResult> values_;
  std::map<const Expr*, Folded> folded_;
};

}  // namespace occt
