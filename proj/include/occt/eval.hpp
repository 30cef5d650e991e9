#pragma once

// Small-step call-by-value evaluation by substitution.
//
// Values carry a most specific type (mst): the singleton of a constant, the
// annotation of a lambda, products and closed records of the parts. A
// type-case `if v is t` takes the first branch when mst(v) <= t.

#include <functional>
#include <map>
#include <string>

#include "occt/ast.hpp"
#include "occt/types.hpp"

namespace occt {

struct StepResult {
  enum class Kind { Stepped, Done, Stuck };
  Kind kind = Kind::Stuck;
  ExprPtr expr;  // the reduct, the value, or the stuck term
};

struct EvalResult {
  enum class Status { Done, OutOfFuel, Stuck };
  Status status = Status::Stuck;
  ExprPtr expr;  // the value when Done, the last term otherwise
  long steps = 0;
};

class Evaluator {
 public:
  /// `builtins` gives the types of builtin functions. Only `incr` and
  /// `lnot` have an implementation; applying any other builtin is stuck.
  explicit Evaluator(std::map<std::string, Type> builtins);

  /// Type of a lambda whose annotation leaves a codomain open. Without a
  /// hook such an arrow counts as `dom -> Any`.
  std::function<Type(const ExprPtr&)> lambda_type;

  Type mst(const ExprPtr& v) const;
  bool value_in_type(const ExprPtr& v, Type t) const;

  StepResult step(const ExprPtr& e) const;
  EvalResult eval(const ExprPtr& e, long fuel) const;

 private:
  std::map<std::string, Type> builtins_;
};

}  // namespace occt
