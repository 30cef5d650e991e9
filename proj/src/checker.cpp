#include "occt/checker.hpp"

#include <algorithm>

#include "occt/infer.hpp"
#include "occt/parser.hpp"
#include "occt/subtype.hpp"
#include "occt/typeops.hpp"

namespace occt {

std::string Diagnostic::to_string() const {
  std::string s = severity == Severity::Error ? "error" : "warning";
  s += ": line " + std::to_string(span.line) + ", columns " + std::to_string(span.col) + "-" +
       std::to_string(span.end_col) + ": " + message;
  return s;
}

TypeError::TypeError(std::string r, Span s, const std::string& msg)
    : std::runtime_error("line " + std::to_string(s.line) + ", column " + std::to_string(s.col) + ": " + msg),
      rule(std::move(r)),
      span(s),
      message(msg) {}

// TypeEnv

std::optional<Type> TypeEnv::var(const std::string& x) const {
  auto it = vars_.find(x);
  if (it == vars_.end()) return std::nullopt;
  return it->second;
}

std::optional<Type> TypeEnv::occurrence(const ExprPtr& e) const {
  for (const auto& [k, t] : occs_)
    if (k->hash == e->hash && expr_equal(k, e)) return t;
  return std::nullopt;
}

TypeEnv TypeEnv::with_var(const std::string& x, Type t) const {
  TypeEnv r = *this;
  r.vars_[x] = t;
  return r;
}

TypeEnv TypeEnv::with_occurrence(const ExprPtr& e, Type t) const {
  TypeEnv r = without_occurrence(e);
  r.occs_.emplace_back(e, t);
  return r;
}

TypeEnv TypeEnv::without_occurrence(const ExprPtr& e) const {
  TypeEnv r = *this;
  std::erase_if(r.occs_, [&](const auto& kv) { return kv.first->hash == e->hash && expr_equal(kv.first, e); });
  return r;
}

TypeEnv TypeEnv::enter_binder(const std::string& x, Type t) const {
  TypeEnv r = *this;
  r.vars_[x] = t;
  std::erase_if(r.occs_, [&](const auto& kv) { return free_vars(kv.first).count(x) > 0; });
  return r;
}

bool TypeEnv::bottom() const {
  for (const auto& [x, t] : vars_)
    if (is_empty(t)) return true;
  for (const auto& [e, t] : occs_)
    if (is_empty(t)) return true;
  return false;
}

bool operator==(const TypeEnv& a, const TypeEnv& b) {
  if (a.vars_ != b.vars_ || a.occs_.size() != b.occs_.size()) return false;
  for (const auto& [e, t] : a.occs_) {
    auto o = b.occurrence(e);
    if (!o || *o != t) return false;
  }
  return true;
}

// PsiMap

void PsiMap::add(const std::string& x, Type t) {
  if (is_empty(t)) return;
  auto& v = m_[x];
  for (Type u : v)
    if (equiv(u, t)) return;
  v.push_back(t);
}

void PsiMap::merge(const PsiMap& other, const std::string& except) {
  for (const auto& [x, ts] : other.m_) {
    if (x == except) continue;
    for (Type t : ts) add(x, t);
  }
}

const std::vector<Type>& PsiMap::at(const std::string& x) const {
  static const std::vector<Type> none;
  auto it = m_.find(x);
  return it == m_.end() ? none : it->second;
}

// Checker

Checker::Checker(CheckConfig cfg, std::map<std::string, Type> builtins)
    : cfg_(cfg), builtins_(std::move(builtins)) {}

std::map<std::string, Type> Checker::default_builtins() {
  return {{"incr", mk_arrow(int_type(), int_type())}, {"lnot", mk_arrow(bool_type(), bool_type())}};
}

Checker::PsiScope::PsiScope(Checker& c, PsiMap* p) : c_(c), saved_(c.psi_), saved_suppress_(c.suppress_vars_) {
  c.psi_ = p;
  c.suppress_vars_ = false;
}

Checker::PsiScope::~PsiScope() {
  c_.psi_ = saved_;
  c_.suppress_vars_ = saved_suppress_;
}

namespace {

std::string show(Type t) { return pretty_type(t); }

}  // namespace

Type Checker::type_of(const TypeEnv& env, const ExprPtr& e) {
  if (env.bottom()) return empty();
  if (e->kind != Expr::Kind::Var) {
    if (auto t = env.occurrence(e)) return mk_inter(*t, type_of(env.without_occurrence(e), e));
  }
  return type_uncached(env, e);
}

Type Checker::type_uncached(const TypeEnv& env, const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const:
      return e->constant.type();
    case K::Var: {
      auto t = env.var(e->name);
      if (!t) throw TypeError("Var", e->span, "unbound variable " + e->name);
      if (psi_ && !suppress_vars_) psi_->add(e->name, *t);
      return *t;
    }
    case K::BuiltinRef: {
      auto it = builtins_.find(e->name);
      if (it == builtins_.end()) throw TypeError("Var", e->span, "unknown builtin " + e->name);
      return it->second;
    }
    case K::Lambda: {
      bool cacheable = free_vars(e).empty();
      for (const auto& [o, t] : env.occurrences())
        if (cacheable && free_vars(o).empty()) cacheable = false;
      if (cacheable)
        for (auto [it, end] = closed_.equal_range(e->hash); it != end; ++it)
          if (expr_equal(it->second.first, e)) return it->second.second;
      bool saved = suppress_vars_;
      suppress_vars_ = false;
      Type t;
      try {
        t = infer_lambda(*this, env, e);
      } catch (...) {
        suppress_vars_ = saved;
        throw;
      }
      suppress_vars_ = saved;
      if (cacheable) closed_.emplace(e->hash, std::pair{e, t});
      return t;
    }
    case K::App:
      return type_app(env, e);
    case K::Proj: {
      Type t = type_of(env, e->kid(0));
      if (!subtype(t, product_top()))
        throw TypeError("Proj", e->span, "expected a pair, found " + show(t));
      return e->index == 1 ? proj1(t) : proj2(t);
    }
    case K::Pair:
      return mk_product(type_of(env, e->kid(0)), type_of(env, e->kid(1)));
    case K::TypeCase:
      return type_case(env, e);
    case K::EmptyRecord:
      return mk_record(RecordRow::closed());
    case K::FieldUpdate: {
      Type r = type_of(env, e->kid(0));
      if (!subtype(r, record_top())) throw TypeError("Update", e->span, "expected a record, found " + show(r));
      Type v = type_of(env, e->kid(1));
      return rec_merge(r, mk_record(RecordRow::closed({{e->label, v}})));
    }
    case K::FieldDel: {
      Type r = type_of(env, e->kid(0));
      if (!subtype(r, record_top())) throw TypeError("Delete", e->span, "expected a record, found " + show(r));
      return rec_del(r, e->label);
    }
    case K::FieldSel: {
      Type r = type_of(env, e->kid(0));
      if (!subtype(r, mk_record(RecordRow::open({{e->label, any()}}))))
        throw TypeError("Select", e->span, "expected a record with field " + e->label + ", found " + show(r));
      return rec_proj(e->label, r);
    }
    case K::Let: {
      Type t1 = type_of(env, e->kid(0));
      auto lam = mk_lambda({{t1, std::nullopt}}, e->name, e->kid(1), e->span);
      Type f = type_of(env, lam);
      try {
        return apply(f, t1);
      } catch (const TypeOpError& err) {
        throw TypeError("Let", e->span, err.what());
      }
    }
  }
  throw TypeError("Var", e->span, "unknown expression");
}

Type Checker::type_app(const TypeEnv& env, const ExprPtr& e) {
  Type f = type_of(env, e->kid(0));
  Type a = type_of(env, e->kid(1));
  if (!subtype(f, arrow_top())) throw TypeError("App", e->span, "expected a function, found " + show(f));
  Type d = dom(f);
  if (!subtype(a, d))
    throw TypeError("App", e->span, "argument of type " + show(a) + " is outside the domain " + show(d));
  if (psi_ && e->kid(1)->kind == Expr::Kind::Var) {
    // The argument is also tried against each domain of the function.
    const std::string& x = e->kid(1)->name;
    if (auto tx = env.var(x)) {
      auto& store = TypeStore::instance();
      for (const Clause& c : arrow_clauses(f))
        for (AtomId p : c.pos) psi_->add(x, mk_inter(*tx, store.arrow(p).dom));
    }
  }
  try {
    return apply(f, a);
  } catch (const TypeOpError& err) {
    throw TypeError("App", e->span, err.what());
  }
}

void Checker::check_test_type(const ExprPtr& e) const {
  if (cfg_.allow_arrow_tests) return;
  Type a = arrow_part(e->test);
  if (is_empty(a) || equiv(a, arrow_top())) return;
  throw TypeError("Case", e->span, "type-case tests on function types are limited to Empty and Empty -> Any");
}

int Checker::iterations_for(const ExprPtr& scrutinee) const {
  if (cfg_.iters) return *cfg_.iters;
  return std::max(2 * depth(scrutinee), 2);
}

Type Checker::type_case(const TypeEnv& env, const ExprPtr& e) {
  check_test_type(e);
  if (on_type_case && refining_ == 0) on_type_case(env, e);
  const ExprPtr& s = e->kid(0);
  {
    bool saved = suppress_vars_;
    suppress_vars_ = true;
    try {
      type_of(env, s);
    } catch (...) {
      suppress_vars_ = saved;
      throw;
    }
    suppress_vars_ = saved;
  }
  TypeEnv g1 = refine(env, s, e->test);
  TypeEnv g2 = refine(env, s, mk_neg(e->test));
  if (psi_) {
    for (const auto& o : sub_occurrences(s)) {
      if (o.expr->kind != Expr::Kind::Var) continue;
      for (const TypeEnv* g : {&g1, &g2})
        if (!g->bottom())
          if (auto t = g->var(o.expr->name)) psi_->add(o.expr->name, *t);
    }
  }
  note_branch(e->kid(1), g1.bottom());
  note_branch(e->kid(2), g2.bottom());
  Type t1 = type_of(g1, e->kid(1));
  Type t2 = type_of(g2, e->kid(2));
  return mk_union(t1, t2);
}

void Checker::note_branch(const ExprPtr& branch, bool bottom) {
  if (refining_ > 0) return;
  auto& [b, live] = branches_[branch.get()];
  (bottom ? b : live)++;
}

void Checker::internal_warning(Span s, const std::string& msg) {
  for (const auto& d : internal_)
    if (d.message == msg && d.span.line == s.line && d.span.col == s.col) return;
  internal_.push_back({Diagnostic::Severity::Warning, s, msg});
}

std::vector<Diagnostic> Checker::warnings() const {
  std::vector<Diagnostic> out = internal_;
  std::vector<std::pair<const Expr*, Span>> dead;
  for (const auto& [e, counts] : branches_)
    if (counts.first > 0 && counts.second == 0) dead.emplace_back(e, e->span);
  std::sort(dead.begin(), dead.end(), [](const auto& a, const auto& b) {
    return std::pair(a.second.line, a.second.col) < std::pair(b.second.line, b.second.col);
  });
  for (const auto& [e, s] : dead) out.push_back({Diagnostic::Severity::Warning, s, "unreachable expression"});
  return out;
}

void Checker::clear_diagnostics() {
  branches_.clear();
  internal_.clear();
}

PsiMap Checker::collect_psi(const TypeEnv& env, const ExprPtr& e) {
  PsiMap m;
  PsiScope scope(*this, &m);
  type_of(env, e);
  return m;
}

// Refinement.

struct Checker::StepState {
  const TypeEnv& env;
  const ExprPtr& e;
  Type t;
  std::map<Path, Type> envs;
  std::map<const Expr*, Type> types;
};

Type Checker::typeof_in(StepState& st, const ExprPtr& sub) {
  auto it = st.types.find(sub.get());
  if (it != st.types.end()) return it->second;
  PsiScope scope(*this, nullptr);
  ++refining_;
  Type t;
  try {
    t = type_of(st.env, sub);
  } catch (...) {
    --refining_;
    throw;
  }
  --refining_;
  st.types[sub.get()] = t;
  return t;
}

Type Checker::constr_in(StepState& st, const Path& p) {
  if (p.empty()) return st.t;
  using L = Step::Letter;
  Path parent(p.begin(), p.end() - 1);
  const Step& last = p.back();
  auto with = [&](L l) {
    Path q = parent;
    q.push_back({l, last.label});
    return q;
  };
  switch (last.letter) {
    case L::Fun:
      return mk_neg(mk_arrow(env_in(st, with(L::Arg)), mk_neg(env_in(st, parent))));
    case L::Arg:
      return worra(typeof_in(st, occ(st.e, with(L::Fun))), env_in(st, parent));
    case L::Left:
      return proj1(env_in(st, parent));
    case L::Right:
      return proj2(env_in(st, parent));
    case L::First:
      return mk_product(env_in(st, parent), any());
    case L::Second:
      return mk_product(any(), env_in(st, parent));
    case L::Sel:
      return mk_record(RecordRow::open({{last.label, env_in(st, parent)}}));
    case L::Del:
    case L::Upd1:
      return rec_merge(rec_del(env_in(st, parent), last.label),
                       mk_record(RecordRow::closed({{last.label, optional(any())}})));
    case L::Upd2:
      return rec_proj(last.label, env_in(st, parent));
  }
  return any();
}

Type Checker::env_in(StepState& st, const Path& p) {
  auto it = st.envs.find(p);
  if (it != st.envs.end()) return it->second;
  Type r = mk_inter(constr_in(st, p), typeof_in(st, occ(st.e, p)));
  st.envs[p] = r;
  return r;
}

Type Checker::constr(const Path& p, const TypeEnv& env, const ExprPtr& e, Type t) {
  StepState st{env, e, t, {}, {}};
  return constr_in(st, p);
}

Type Checker::env_at(const Path& p, const TypeEnv& env, const ExprPtr& e, Type t) {
  StepState st{env, e, t, {}, {}};
  return env_in(st, p);
}

TypeEnv Checker::refine_step(const TypeEnv& env, const ExprPtr& e, Type t) {
  StepState st{env, e, t, {}, {}};
  TypeEnv out = env;
  for (const Occurrence& o : sub_occurrences(e)) {
    Type r = any();
    try {
      for (const Path& p : o.paths) r = mk_inter(r, env_in(st, p));
    } catch (const TypeOpError& err) {
      internal_warning(o.expr->span, std::string("refinement skipped: ") + err.what());
      continue;
    }
    r = simplify(r);
    if (o.expr->kind == Expr::Kind::Var)
      out = out.with_var(o.expr->name, r);
    else
      out = out.with_occurrence(o.expr, r);
  }
  return out;
}

TypeEnv Checker::refine(const TypeEnv& env, const ExprPtr& e, Type t) {
  int n = iterations_for(e);
  TypeEnv cur = env;
  for (int i = 0; i < n; ++i) {
    if (cur.bottom()) break;
    TypeEnv next = refine_step(cur, e, t);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace occt
