#include "occt/ast.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace occt {

Type Constant::type() const {
  switch (kind) {
    case Kind::Int:
      return mk_int(n);
    case Kind::Atom:
      return mk_atom(s);
    case Kind::Char:
      return mk_char(ch);
    case Kind::String:
      return mk_string(s);
  }
  return empty();
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_const(const Constant& c) {
  std::size_t h = std::size_t(c.kind);
  h = mix(h, std::hash<std::int64_t>{}(c.n));
  h = mix(h, std::hash<char32_t>{}(c.ch));
  return mix(h, std::hash<std::string>{}(c.s));
}

ExprPtr finish(Expr e) {
  std::size_t h = std::size_t(e.kind) * 0x100000001b3ULL;
  switch (e.kind) {
    case Expr::Kind::Const:
      h = mix(h, hash_const(e.constant));
      break;
    case Expr::Kind::BuiltinRef:
      h = mix(h, std::hash<std::string>{}(e.name));
      break;
    case Expr::Kind::Proj:
      h = mix(h, e.index);
      break;
    case Expr::Kind::TypeCase:
      h = mix(h, e.test.id);
      break;
    case Expr::Kind::Lambda:
      for (const auto& a : e.arrows) h = mix(mix(h, a.dom.id), a.cod ? a.cod->id + 1 : 0);
      break;
    default:
      break;
  }
  if (!e.label.empty()) h = mix(h, std::hash<std::string>{}(e.label));
  for (const auto& k : e.kids) h = mix(h, k->hash);
  e.hash = h;
  return std::make_shared<const Expr>(std::move(e));
}

Expr node(Expr::Kind k, Span s, std::vector<ExprPtr> kids = {}) {
  Expr e;
  e.kind = k;
  e.span = s;
  e.kids = std::move(kids);
  return e;
}

}  // namespace

ExprPtr mk_const(Constant c, Span s) {
  Expr e = node(Expr::Kind::Const, s);
  e.constant = std::move(c);
  return finish(std::move(e));
}

ExprPtr mk_var(std::string x, Span s) {
  Expr e = node(Expr::Kind::Var, s);
  e.name = std::move(x);
  return finish(std::move(e));
}

ExprPtr mk_builtin(std::string x, Span s) {
  Expr e = node(Expr::Kind::BuiltinRef, s);
  e.name = std::move(x);
  return finish(std::move(e));
}

ExprPtr mk_app(ExprPtr f, ExprPtr a, Span s) { return finish(node(Expr::Kind::App, s, {std::move(f), std::move(a)})); }

ExprPtr mk_lambda(std::vector<Arrow> arrows, std::string x, ExprPtr body, Span s) {
  if (arrows.empty()) throw std::invalid_argument("lambda annotation needs at least one arrow");
  Expr e = node(Expr::Kind::Lambda, s, {std::move(body)});
  e.arrows = std::move(arrows);
  e.name = std::move(x);
  return finish(std::move(e));
}

ExprPtr mk_proj(int i, ExprPtr x, Span s) {
  Expr e = node(Expr::Kind::Proj, s, {std::move(x)});
  e.index = i;
  return finish(std::move(e));
}

ExprPtr mk_pair(ExprPtr l, ExprPtr r, Span s) { return finish(node(Expr::Kind::Pair, s, {std::move(l), std::move(r)})); }

ExprPtr mk_typecase(ExprPtr scrutinee, Type t, ExprPtr then_e, ExprPtr else_e, Span s) {
  Expr e = node(Expr::Kind::TypeCase, s, {std::move(scrutinee), std::move(then_e), std::move(else_e)});
  e.test = t;
  return finish(std::move(e));
}

ExprPtr mk_empty_record(Span s) { return finish(node(Expr::Kind::EmptyRecord, s)); }

ExprPtr mk_field_update(ExprPtr rec, std::string label, ExprPtr value, Span s) {
  Expr e = node(Expr::Kind::FieldUpdate, s, {std::move(rec), std::move(value)});
  e.label = std::move(label);
  return finish(std::move(e));
}

ExprPtr mk_field_del(ExprPtr rec, std::string label, Span s) {
  Expr e = node(Expr::Kind::FieldDel, s, {std::move(rec)});
  e.label = std::move(label);
  return finish(std::move(e));
}

ExprPtr mk_field_sel(ExprPtr rec, std::string label, Span s) {
  Expr e = node(Expr::Kind::FieldSel, s, {std::move(rec)});
  e.label = std::move(label);
  return finish(std::move(e));
}

ExprPtr mk_let(std::string x, ExprPtr bound, ExprPtr body, Span s) {
  Expr e = node(Expr::Kind::Let, s, {std::move(bound), std::move(body)});
  e.name = std::move(x);
  return finish(std::move(e));
}

namespace {

// Bound-variable correspondence for alpha-equivalence: pairs of names bound
// at the same depth, innermost last.
using Binders = std::vector<std::pair<std::string, std::string>>;

bool equal_in(const Expr& a, const Expr& b, Binders& bs) {
  if (&a == &b && bs.empty()) return true;
  if (a.kind != b.kind || a.hash != b.hash || a.kids.size() != b.kids.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Var: {
      for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
        bool l = it->first == a.name, r = it->second == b.name;
        if (l || r) return l && r;
      }
      return a.name == b.name;
    }
    case Expr::Kind::Const:
      return a.constant == b.constant;
    case Expr::Kind::BuiltinRef:
      return a.name == b.name;
    case Expr::Kind::Proj:
      if (a.index != b.index) return false;
      break;
    case Expr::Kind::TypeCase:
      if (a.test != b.test) return false;
      break;
    case Expr::Kind::Lambda: {
      if (a.arrows != b.arrows) return false;
      bs.emplace_back(a.name, b.name);
      bool r = equal_in(*a.kids[0], *b.kids[0], bs);
      bs.pop_back();
      return r;
    }
    case Expr::Kind::Let: {
      if (!equal_in(*a.kids[0], *b.kids[0], bs)) return false;
      bs.emplace_back(a.name, b.name);
      bool r = equal_in(*a.kids[1], *b.kids[1], bs);
      bs.pop_back();
      return r;
    }
    default:
      break;
  }
  if (a.label != b.label) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!equal_in(*a.kids[i], *b.kids[i], bs)) return false;
  return true;
}

void collect_free(const ExprPtr& e, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case Expr::Kind::Lambda: {
      auto it = bound.insert(e->name);
      collect_free(e->kids[0], bound, out);
      bound.erase(it);
      return;
    }
    case Expr::Kind::Let: {
      collect_free(e->kids[0], bound, out);
      auto it = bound.insert(e->name);
      collect_free(e->kids[1], bound, out);
      bound.erase(it);
      return;
    }
    default:
      for (const auto& k : e->kids) collect_free(k, bound, out);
  }
}

ExprPtr rebuild(const Expr& e, std::vector<ExprPtr> kids) {
  Expr copy = e;
  copy.kids = std::move(kids);
  return finish(std::move(copy));
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  Binders bs;
  return equal_in(*a, *b, bs);
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_free(e, bound, out);
  return out;
}

int depth(const ExprPtr& e) {
  int d = 0;
  for (const auto& k : e->kids) d = std::max(d, depth(k));
  return d + 1;
}

bool is_value(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Lambda:
    case Expr::Kind::BuiltinRef:
    case Expr::Kind::EmptyRecord:
      return true;
    case Expr::Kind::Pair:
      return is_value(e->kids[0]) && is_value(e->kids[1]);
    case Expr::Kind::FieldUpdate:
      return (e->kids[0]->kind == Expr::Kind::EmptyRecord || e->kids[0]->kind == Expr::Kind::FieldUpdate) &&
             is_value(e->kids[0]) && is_value(e->kids[1]);
    default:
      return false;
  }
}

ExprPtr with_kids(const ExprPtr& e, std::vector<ExprPtr> kids) { return rebuild(*e, std::move(kids)); }

ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return e->name == x ? v : e;
    case Expr::Kind::Lambda:
      if (e->name == x) return e;
      if (auto body = substitute(e->kids[0], x, v); body != e->kids[0]) return rebuild(*e, {body});
      return e;
    case Expr::Kind::Let: {
      auto bound = substitute(e->kids[0], x, v);
      auto body = e->name == x ? e->kids[1] : substitute(e->kids[1], x, v);
      if (bound == e->kids[0] && body == e->kids[1]) return e;
      return rebuild(*e, {bound, body});
    }
    default: {
      if (e->kids.empty()) return e;
      std::vector<ExprPtr> kids;
      bool same = true;
      for (const auto& k : e->kids) {
        kids.push_back(substitute(k, x, v));
        same = same && kids.back() == k;
      }
      return same ? e : rebuild(*e, std::move(kids));
    }
  }
}

ExprPtr occ(const ExprPtr& e, const Path& path) {
  ExprPtr cur = e;
  for (const auto& st : path) {
    using L = Step::Letter;
    using K = Expr::Kind;
    const Expr& x = *cur;
    bool ok = false;
    switch (st.letter) {
      case L::Fun:
      case L::Arg:
        ok = x.kind == K::App;
        if (ok) cur = x.kids[st.letter == L::Fun ? 0 : 1];
        break;
      case L::Left:
      case L::Right:
        ok = x.kind == K::Pair;
        if (ok) cur = x.kids[st.letter == L::Left ? 0 : 1];
        break;
      case L::First:
      case L::Second:
        ok = x.kind == K::Proj && x.index == (st.letter == L::First ? 1 : 2);
        if (ok) cur = x.kids[0];
        break;
      case L::Sel:
        ok = x.kind == K::FieldSel && x.label == st.label;
        if (ok) cur = x.kids[0];
        break;
      case L::Del:
        ok = x.kind == K::FieldDel && x.label == st.label;
        if (ok) cur = x.kids[0];
        break;
      case L::Upd1:
      case L::Upd2:
        ok = x.kind == K::FieldUpdate && x.label == st.label;
        if (ok) cur = x.kids[st.letter == L::Upd1 ? 0 : 1];
        break;
    }
    if (!ok) throw InvalidPath("invalid path " + path_to_string(path));
  }
  return cur;
}

namespace {

void walk(const ExprPtr& e, Path& path, std::vector<Occurrence>& out) {
  bool found = false;
  for (auto& o : out)
    if (expr_equal(o.expr, e)) {
      o.paths.push_back(path);
      found = true;
      break;
    }
  if (!found) out.push_back({e, {path}});

  auto go = [&](Step::Letter l, const ExprPtr& k, const std::string& label = {}) {
    path.push_back({l, label});
    walk(k, path, out);
    path.pop_back();
  };
  using L = Step::Letter;
  switch (e->kind) {
    case Expr::Kind::App:
      go(L::Fun, e->kids[0]);
      go(L::Arg, e->kids[1]);
      break;
    case Expr::Kind::Pair:
      go(L::Left, e->kids[0]);
      go(L::Right, e->kids[1]);
      break;
    case Expr::Kind::Proj:
      go(e->index == 1 ? L::First : L::Second, e->kids[0]);
      break;
    case Expr::Kind::FieldSel:
      go(L::Sel, e->kids[0], e->label);
      break;
    case Expr::Kind::FieldDel:
      go(L::Del, e->kids[0], e->label);
      break;
    case Expr::Kind::FieldUpdate:
      go(L::Upd1, e->kids[0], e->label);
      go(L::Upd2, e->kids[1], e->label);
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<Occurrence> sub_occurrences(const ExprPtr& e) {
  std::vector<Occurrence> out;
  Path p;
  walk(e, p, out);
  return out;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "e";
  std::string r;
  for (const auto& s : p) {
    if (!r.empty()) r += '.';
    switch (s.letter) {
      case Step::Letter::Fun: r += "0"; break;
      case Step::Letter::Arg: r += "1"; break;
      case Step::Letter::Left: r += "l"; break;
      case Step::Letter::Right: r += "r"; break;
      case Step::Letter::First: r += "f"; break;
      case Step::Letter::Second: r += "s"; break;
      case Step::Letter::Sel: r += "a_" + s.label; break;
      case Step::Letter::Del: r += "r_" + s.label; break;
      case Step::Letter::Upd1: r += "u1_" + s.label; break;
      case Step::Letter::Upd2: r += "u2_" + s.label; break;
    }
  }
  return r;
}

}  // namespace occt
