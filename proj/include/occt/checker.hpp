#pragma once

// The algorithmic type system with occurrence typing.
//
// Type-cases refine the types of every sub-occurrence of the tested
// expression in each branch. The refinement walks the paths of the tested
// expression top-down (`constr`/`env_at`) and is iterated a bounded number
// of times (`refine`).

#include <functional>
#include <map>
#include <unordered_map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "occt/ast.hpp"
#include "occt/types.hpp"

namespace occt {

enum class AbsInf { Plus, PlusPlus };

struct CheckConfig {
  /// Refinement iterations per type-case. Unset: twice the depth of the
  /// tested expression, at least 2.
  std::optional<int> iters;
  bool allow_arrow_tests = false;
  AbsInf absinf = AbsInf::PlusPlus;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Warning;
  Span span;
  std::string message;

  std::string to_string() const;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string rule, Span span, const std::string& msg);
  std::string rule;
  Span span;
  std::string message;
};

/// Γ: types of variables and of tested non-variable expressions.
class TypeEnv {
 public:
  std::optional<Type> var(const std::string& x) const;
  std::optional<Type> occurrence(const ExprPtr& e) const;

  TypeEnv with_var(const std::string& x, Type t) const;
  TypeEnv with_occurrence(const ExprPtr& e, Type t) const;
  TypeEnv without_occurrence(const ExprPtr& e) const;
  /// Bind `x` to `t` and forget occurrence entries mentioning `x`.
  TypeEnv enter_binder(const std::string& x, Type t) const;

  /// True when some entry is empty.
  bool bottom() const;

  const std::map<std::string, Type>& vars() const { return vars_; }
  const std::vector<std::pair<ExprPtr, Type>>& occurrences() const { return occs_; }

  friend bool operator==(const TypeEnv& a, const TypeEnv& b);

 private:
  std::map<std::string, Type> vars_;
  std::vector<std::pair<ExprPtr, Type>> occs_;
};

/// ψ: candidate argument types for lambda-bound variables.
class PsiMap {
 public:
  /// Record `t` for `x` unless it is empty or already present up to ≃.
  void add(const std::string& x, Type t);
  void merge(const PsiMap& other, const std::string& except = {});
  const std::vector<Type>& at(const std::string& x) const;
  const std::map<std::string, std::vector<Type>>& entries() const { return m_; }

 private:
  std::map<std::string, std::vector<Type>> m_;
};

class Checker {
 public:
  explicit Checker(CheckConfig cfg = {}, std::map<std::string, Type> builtins = default_builtins());

  static std::map<std::string, Type> default_builtins();

  const CheckConfig& config() const { return cfg_; }
  CheckConfig& config() {
    closed_.clear();
    return cfg_;
  }
  const std::map<std::string, Type>& builtins() const { return builtins_; }

  /// Γ ⊢ e : t. Throws TypeError.
  Type type_of(const TypeEnv& env, const ExprPtr& e);

  /// Refinement of Γ for `e` tested against `t`.
  TypeEnv refine(const TypeEnv& env, const ExprPtr& e, Type t);
  TypeEnv refine_step(const TypeEnv& env, const ExprPtr& e, Type t);
  int iterations_for(const ExprPtr& scrutinee) const;

  Type constr(const Path& p, const TypeEnv& env, const ExprPtr& e, Type t);
  Type env_at(const Path& p, const TypeEnv& env, const ExprPtr& e, Type t);

  /// ψ collected while typing `e` under `env`.
  PsiMap collect_psi(const TypeEnv& env, const ExprPtr& e);

  /// Warnings gathered so far, including unreachable branches (a branch is
  /// unreachable when every typing pass met it under an empty environment).
  std::vector<Diagnostic> warnings() const;
  void clear_diagnostics();

  /// Called on each type-case met outside refinement, with the environment
  /// it is checked under.
  std::function<void(const TypeEnv&, const ExprPtr&)> on_type_case;

  // Hooks used by the inference of lambda types.
  PsiMap* psi() const { return psi_; }
  class PsiScope {
   public:
    PsiScope(Checker& c, PsiMap* p);
    ~PsiScope();
    PsiScope(const PsiScope&) = delete;
    PsiScope& operator=(const PsiScope&) = delete;

   private:
    Checker& c_;
    PsiMap* saved_;
    bool saved_suppress_;
  };

 private:
  Type type_uncached(const TypeEnv& env, const ExprPtr& e);
  Type type_case(const TypeEnv& env, const ExprPtr& e);
  Type type_app(const TypeEnv& env, const ExprPtr& e);
  void check_test_type(const ExprPtr& e) const;
  void note_branch(const ExprPtr& branch, bool bottom);
  void internal_warning(Span s, const std::string& msg);

  struct StepState;
  Type env_in(StepState& st, const Path& p);
  Type constr_in(StepState& st, const Path& p);
  Type typeof_in(StepState& st, const ExprPtr& sub);

  CheckConfig cfg_;
  std::map<std::string, Type> builtins_;
  PsiMap* psi_ = nullptr;
  bool suppress_vars_ = false;
  int refining_ = 0;
  std::map<const Expr*, std::pair<int, int>> branches_;  // bottom passes, live passes
  std::vector<Diagnostic> internal_;
  // Types of closed lambdas, which do not depend on the environment.
  std::unordered_multimap<std::size_t, std::pair<ExprPtr, Type>> closed_;
};

}  // namespace occt
