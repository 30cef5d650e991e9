#include "occt/session.hpp"

#include <functional>

#include <json.hpp>

namespace occt {

std::map<std::string, Type> parse_builtins_json(const std::string& text, const TypeBindings& types) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("builtins: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("builtins: expected an object of name -> type");
  std::map<std::string, Type> out;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_string()) throw std::runtime_error("builtins: type of " + name + " must be a string");
    try {
      out[name] = parse_type(v.get<std::string>(), types);
    } catch (const SyntaxError& e) {
      throw std::runtime_error("builtins: " + name + ": " + e.what());
    }
  }
  return out;
}

Session::Session(CheckConfig cfg, std::map<std::string, Type> builtins)
    : checker_(cfg, builtins), evaluator_(builtins) {
  for (const auto& [n, t] : checker_.builtins()) ctx_.builtins.insert(n);
  evaluator_.lambda_type = [this](const ExprPtr& lam) {
    try {
      return closure_type(lam);
    } catch (const TypeError&) {
      std::vector<Type> arrows;
      for (const Arrow& a : lam->arrows) arrows.push_back(mk_arrow(a.dom, a.cod.value_or(any())));
      return mk_inter(arrows);
    }
  };
}

ExprPtr Session::close(const ExprPtr& e, long fuel) {
  ExprPtr out = e;
  for (const std::string& x : free_vars(e)) {
    auto d = defs_.find(x);
    if (d == defs_.end()) continue;
    auto v = values_.find(x);
    if (v == values_.end()) {
      // Guard against cycles while the binding is being evaluated.
      values_[x] = {EvalResult::Status::Stuck, d->second, 0};
      values_[x] = evaluator_.eval(close(d->second, fuel), fuel);
      v = values_.find(x);
      const ExprPtr& val = v->second.expr;
      if (v->second.status == EvalResult::Status::Done && val->kind == Expr::Kind::Lambda)
        folded_[val.get()] = {val, "%" + x + "." + std::to_string(folded_.size()), *globals_.var(x)};
    }
    if (v->second.status == EvalResult::Status::Done) out = substitute(out, x, v->second.expr);
  }
  return out;
}

Type Session::closure_type(const ExprPtr& lam) {
  if (auto it = folded_.find(lam.get()); it != folded_.end()) return it->second.type;
  TypeEnv env = globals_;
  std::function<ExprPtr(const ExprPtr&)> fold = [&](const ExprPtr& e) -> ExprPtr {
    if (auto it = folded_.find(e.get()); it != folded_.end()) {
      env = env.with_var(it->second.var, it->second.type);
      return mk_var(it->second.var, e->span);
    }
    std::vector<ExprPtr> kids;
    bool same = true;
    for (const auto& k : e->kids) {
      kids.push_back(fold(k));
      same = same && kids.back() == k;
    }
    return same ? e : with_kids(e, std::move(kids));
  };
  ExprPtr body = fold(lam);
  return checker_.type_of(env, body);
}

EvalResult Session::evaluate(const ExprPtr& e, long fuel) { return evaluator_.eval(close(e, fuel), fuel); }

Type Session::type_expr(const ExprPtr& e) { return checker_.type_of(globals_, e); }

std::vector<DeclResult> Session::check(const std::string& src) {
  std::vector<DeclResult> out;
  std::vector<Decl> decls;
  try {
    decls = parse_program(src, ctx_);
  } catch (const SyntaxError& e) {
    DeclResult r;
    r.span = {e.line, e.col, e.line, e.col + 1};
    std::string msg = e.what();
    auto p = msg.find(": ");
    r.errors.push_back({Diagnostic::Severity::Error, r.span, p == std::string::npos ? msg : msg.substr(p + 2)});
    out.push_back(std::move(r));
    return out;
  }
  for (const Decl& d : decls) {
    if (d.kind == Decl::Kind::Types) continue;
    DeclResult r;
    r.name = d.name;
    r.span = d.span;
    r.expr = d.expr;
    checker_.clear_diagnostics();
    try {
      Type t = checker_.type_of(globals_, d.expr);
      r.type = t;
      if (d.kind == Decl::Kind::Let) {
        globals_ = globals_.with_var(d.name, t);
        defs_[d.name] = d.expr;
        values_.erase(d.name);
      }
    } catch (const TypeError& e) {
      r.errors.push_back({Diagnostic::Severity::Error, e.span, "[" + e.rule + "] " + e.message});
      // Later declarations may still mention the name.
      if (d.kind == Decl::Kind::Let) globals_ = globals_.with_var(d.name, any());
    }
    r.warnings = checker_.warnings();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace occt
