#include "occt/eval.hpp"

#include "occt/subtype.hpp"

namespace occt {

namespace {

using K = Expr::Kind;

StepResult stepped(ExprPtr e) { return {StepResult::Kind::Stepped, std::move(e)}; }
StepResult stuck(ExprPtr e) { return {StepResult::Kind::Stuck, std::move(e)}; }

bool is_record_value(const ExprPtr& v) {
  return v->kind == K::EmptyRecord || (v->kind == K::FieldUpdate && is_value(v));
}

// Fields of a record value, the last update of a label winning.
std::map<std::string, ExprPtr> record_fields(const ExprPtr& v) {
  std::vector<const Expr*> chain;
  for (const Expr* r = v.get(); r->kind == K::FieldUpdate; r = r->kid(0).get()) chain.push_back(r);
  std::map<std::string, ExprPtr> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) out[(*it)->label] = (*it)->kid(1);
  return out;
}

ExprPtr rebuild(const std::map<std::string, ExprPtr>& fields, Span s) {
  ExprPtr r = mk_empty_record(s);
  for (const auto& [l, v] : fields) r = mk_field_update(r, l, v, s);
  return r;
}

ExprPtr replace_kid(const ExprPtr& e, std::size_t i, ExprPtr k) {
  std::vector<ExprPtr> kids = e->kids;
  kids[i] = std::move(k);
  return with_kids(e, std::move(kids));
}

std::optional<ExprPtr> native(const std::string& name, const ExprPtr& arg) {
  if (arg->kind != K::Const) return std::nullopt;
  const Constant& c = arg->constant;
  if (name == "incr" && c.kind == Constant::Kind::Int) return mk_const(Constant::integer(c.n + 1), arg->span);
  if (name == "lnot" && c.kind == Constant::Kind::Atom && (c.s == "true" || c.s == "false"))
    return mk_const(Constant::atom(c.s == "true" ? "false" : "true"), arg->span);
  return std::nullopt;
}

}  // namespace

Evaluator::Evaluator(std::map<std::string, Type> builtins) : builtins_(std::move(builtins)) {}

Type Evaluator::mst(const ExprPtr& v) const {
  switch (v->kind) {
    case K::Const:
      return v->constant.type();
    case K::BuiltinRef: {
      auto it = builtins_.find(v->name);
      return it == builtins_.end() ? mk_arrow(empty(), any()) : it->second;
    }
    case K::Lambda: {
      bool open = false;
      std::vector<Type> arrows;
      for (const Arrow& a : v->arrows) {
        if (!a.cod) open = true;
        arrows.push_back(mk_arrow(a.dom, a.cod.value_or(any())));
      }
      if (open && lambda_type) return lambda_type(v);
      return mk_inter(arrows);
    }
    case K::Pair:
      return mk_product(mst(v->kid(0)), mst(v->kid(1)));
    case K::EmptyRecord:
    case K::FieldUpdate: {
      std::map<std::string, Type> fs;
      for (const auto& [l, f] : record_fields(v)) fs[l] = mst(f);
      return mk_record(RecordRow::closed(fs));
    }
    default:
      return any();
  }
}

bool Evaluator::value_in_type(const ExprPtr& v, Type t) const { return subtype(mst(v), t); }

StepResult Evaluator::step(const ExprPtr& e) const {
  if (is_value(e)) return {StepResult::Kind::Done, e};
  // Reduce the first kid that is not yet a value.
  auto inner = [&](std::size_t i) -> std::optional<StepResult> {
    if (is_value(e->kid(i))) return std::nullopt;
    StepResult r = step(e->kid(i));
    if (r.kind == StepResult::Kind::Stuck) return stuck(e);
    return stepped(replace_kid(e, i, r.expr));
  };
  switch (e->kind) {
    case K::App: {
      for (std::size_t i : {0u, 1u})
        if (auto r = inner(i)) return *r;
      const ExprPtr& f = e->kid(0);
      const ExprPtr& a = e->kid(1);
      if (f->kind == K::Lambda) return stepped(substitute(f->kid(0), f->name, a));
      if (f->kind == K::BuiltinRef)
        if (auto r = native(f->name, a)) return stepped(*r);
      return stuck(e);
    }
    case K::Proj: {
      if (auto r = inner(0)) return *r;
      if (e->kid(0)->kind != K::Pair) return stuck(e);
      return stepped(e->kid(0)->kid(e->index - 1));
    }
    case K::Pair:
      for (std::size_t i : {0u, 1u})
        if (auto r = inner(i)) return *r;
      return stuck(e);
    case K::TypeCase: {
      if (auto r = inner(0)) return *r;
      return stepped(value_in_type(e->kid(0), e->test) ? e->kid(1) : e->kid(2));
    }
    case K::FieldUpdate: {
      if (auto r = inner(0)) return *r;
      if (!is_record_value(e->kid(0))) return stuck(e);
      if (auto r = inner(1)) return *r;
      return stuck(e);
    }
    case K::FieldDel: {
      if (auto r = inner(0)) return *r;
      if (!is_record_value(e->kid(0))) return stuck(e);
      auto fs = record_fields(e->kid(0));
      fs.erase(e->label);
      return stepped(rebuild(fs, e->span));
    }
    case K::FieldSel: {
      if (auto r = inner(0)) return *r;
      if (!is_record_value(e->kid(0))) return stuck(e);
      auto fs = record_fields(e->kid(0));
      auto it = fs.find(e->label);
      if (it == fs.end()) return stuck(e);
      return stepped(it->second);
    }
    case K::Let: {
      if (auto r = inner(0)) return *r;
      return stepped(substitute(e->kid(1), e->name, e->kid(0)));
    }
    default:
      return stuck(e);
  }
}

EvalResult Evaluator::eval(const ExprPtr& e, long fuel) const {
  ExprPtr cur = e;
  for (long n = 0;; ++n) {
    if (is_value(cur)) return {EvalResult::Status::Done, cur, n};
    if (n >= fuel) return {EvalResult::Status::OutOfFuel, cur, n};
    StepResult r = step(cur);
    if (r.kind == StepResult::Kind::Stuck) return {EvalResult::Status::Stuck, cur, n};
    cur = r.expr;
  }
}

}  // namespace occt
