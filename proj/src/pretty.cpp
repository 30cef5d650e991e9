#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "occt/parser.hpp"
#include "occt/subtype.hpp"

namespace occt {

namespace {

// Printed form with its binding strength: 0 arrow, 1 union, 2 intersection,
// 3 atomic or negation.
struct Doc {
  std::string text;
  int level = 3;
};

std::string wrap(const Doc& d, int level) { return d.level < level ? "(" + d.text + ")" : d.text; }

Doc join(const std::vector<Doc>& parts, const char* sep, int level, const char* if_none) {
  if (parts.empty()) return {if_none, 3};
  if (parts.size() == 1) return parts[0];
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += wrap(parts[i], level + 1);
  }
  return {s, level};
}

std::string quote_char(char32_t c) {
  std::string s = "'";
  switch (c) {
    case '\n': return "'\\n'";
    case '\t': return "'\\t'";
    case '\r': return "'\\r'";
    case 0: return "'\\0'";
    case '\\': return "'\\\\'";
    case '\'': return "'\\''";
    default: break;
  }
  if (c < 0x80) {
    s += static_cast<char>(c);
  } else if (c < 0x800) {
    s += static_cast<char>(0xC0 | (c >> 6));
    s += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    s += static_cast<char>(0xE0 | (c >> 12));
    s += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (c >> 18));
    s += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (c & 0x3F));
  }
  return s + "'";
}

std::string quote_string(const std::string& v) {
  std::string s = "\"";
  for (char c : v) {
    switch (c) {
      case '\n': s += "\\n"; break;
      case '\t': s += "\\t"; break;
      case '\r': s += "\\r"; break;
      case '\\': s += "\\\\"; break;
      case '"': s += "\\\""; break;
      default: s += c;
    }
  }
  return s + "\"";
}

class TypePrinter {
 public:
  explicit TypePrinter(Type root) { find_cycles(root); }

  std::string run(Type root) {
    Doc body = descr_doc(root, true);
    if (named_.empty()) return body.text;
    std::string s = body.text;
    // Definitions are printed in order of first use; printing one may name
    // further nodes, so iterate until stable.
    std::vector<std::string> defs;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      Type t = order_[i];
      Doc d = descr_doc(t, true);
      defs.push_back(named_.at(t) + " = " + d.text);
    }
    s += " where ";
    for (std::size_t i = 0; i < defs.size(); ++i) {
      if (i) s += " and ";
      s += defs[i];
    }
    return s;
  }

 private:
  // Nodes on a cycle of the node graph get names.
  void find_cycles(Type root) {
    std::map<std::uint32_t, int> index, low;
    std::vector<std::uint32_t> stack;
    std::set<std::uint32_t> on_stack;
    int counter = 0;
    std::function<void(Type)> visit = [&](Type t) {
      index[t.id] = low[t.id] = counter++;
      stack.push_back(t.id);
      on_stack.insert(t.id);
      for (Type c : children(t)) {
        if (!index.count(c.id)) {
          visit(c);
          low[t.id] = std::min(low[t.id], low[c.id]);
        } else if (on_stack.count(c.id)) {
          low[t.id] = std::min(low[t.id], index[c.id]);
        }
        if (c == t) cyclic_.insert(t.id);
      }
      if (low[t.id] == index[t.id]) {
        std::vector<std::uint32_t> scc;
        std::uint32_t x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack.erase(x);
          scc.push_back(x);
        } while (x != t.id);
        if (scc.size() > 1) cyclic_.insert(scc.begin(), scc.end());
      }
    };
    visit(root);
  }

  static std::vector<Type> children(Type t) {
    auto& store = TypeStore::instance();
    Descr d = descr(t);
    std::vector<Type> out;
    for (const auto& c : d.arrows.clauses)
      for (const auto* ids : {&c.pos, &c.neg})
        for (AtomId a : *ids) {
          out.push_back(store.arrow(a).dom);
          out.push_back(store.arrow(a).cod);
        }
    for (const auto& c : d.products.clauses)
      for (const auto* ids : {&c.pos, &c.neg})
        for (AtomId a : *ids) {
          out.push_back(store.product(a).left);
          out.push_back(store.product(a).right);
        }
    for (const auto& c : d.records.clauses)
      for (const auto* ids : {&c.pos, &c.neg})
        for (AtomId a : *ids) {
          for (const auto& [l, ft] : store.record(a).fields) out.push_back(ft);
          out.push_back(store.record(a).rest);
        }
    return out;
  }

  Doc type_doc(Type t) {
    if (cyclic_.count(t.id)) {
      auto it = named_.find(t);
      if (it == named_.end()) {
        it = named_.emplace(t, "X" + std::to_string(named_.size() + 1)).first;
        order_.push_back(t);
      }
      return {it->second, 3};
    }
    return descr_doc(t, false);
  }

  // Size estimate used to pick between a type and its complement.
  static std::size_t cost(const Descr& d) {
    auto basic = [](const auto& s) -> std::size_t { return s.is_empty() ? 0 : s.is_full() ? 1 : 1 + s.elems.size(); };
    auto dnf = [](const Dnf& x) -> std::size_t {
      if (x.is_all()) return 1;
      std::size_t n = 0;
      for (const auto& c : x.clauses) n += 1 + c.pos.size() + c.neg.size();
      return n;
    };
    return basic(d.ints) + basic(d.atoms) + basic(d.chars) + basic(d.strings) + (d.undef ? 1 : 0) + dnf(d.arrows) +
           dnf(d.products) + dnf(d.records);
  }

  Doc descr_doc(Type t0, bool top) {
    (void)top;
    Type t = simplify(t0);
    if (t == empty()) return {"Empty", 3};
    if (t == any()) return {"Any", 3};
    const Descr d = descr(t);
    if (!d.undef) {
      Type c = simplify(mk_neg(t));
      if (c != t && cost(descr(c)) < cost(d)) {
        Doc inner = descr_doc(c, false);
        return {"~" + wrap(inner, 3), 3};
      }
    }
    std::vector<Doc> parts;
    basic_part(d.ints, "Int", [](std::int64_t n) { return std::to_string(n); }, parts);
    atoms_part(d.atoms, parts);
    basic_part(d.chars, "Char", quote_char, parts);
    basic_part(d.strings, "String", quote_string, parts);
    if (d.undef) parts.push_back({"Undef", 3});
    dnf_part(d.arrows, "(Empty -> Any)", [&](AtomId a) { return arrow_doc(a); }, parts);
    dnf_part(d.products, "(Any, Any)", [&](AtomId a) { return product_doc(a); }, parts);
    dnf_part(d.records, "{..}", [&](AtomId a) { return record_doc(a); }, parts);
    return join(parts, " | ", 1, "Empty");
  }

  template <class T, class F>
  static void basic_part(const BasicSet<T>& s, const char* all, F show, std::vector<Doc>& parts) {
    if (s.is_empty()) return;
    if (!s.cofinite) {
      for (const auto& e : s.elems) parts.push_back({show(e), 3});
      return;
    }
    if (s.elems.empty()) {
      parts.push_back({all, 3});
      return;
    }
    std::vector<Doc> ex;
    for (const auto& e : s.elems) ex.push_back({show(e), 3});
    parts.push_back({std::string(all) + " \\ " + wrap(join(ex, " | ", 1, "Empty"), 3), 2});
  }

  static void atoms_part(const BasicSet<std::string>& s, std::vector<Doc>& parts) {
    if (s.is_empty()) return;
    if (s.cofinite) {
      basic_part(s, "Atom", [](const std::string& a) { return a; }, parts);
      return;
    }
    bool t = s.contains("true"), f = s.contains("false");
    if (t && f) parts.push_back({"Bool", 3});
    for (const auto& e : s.elems)
      if (!(t && f && (e == "true" || e == "false"))) parts.push_back({e, 3});
  }

  template <class F>
  void dnf_part(const Dnf& dnf, const char* all, F atom, std::vector<Doc>& parts) {
    for (const auto& c : dnf.clauses) {
      std::vector<Doc> lits;
      for (AtomId a : c.pos) lits.push_back(atom(a));
      if (c.pos.empty()) lits.push_back({all, 3});
      for (AtomId a : c.neg) lits.push_back({"~" + wrap(atom(a), 3), 3});
      parts.push_back(join(lits, " & ", 2, all));
    }
  }

  Doc arrow_doc(AtomId a) {
    ArrowAtom x = TypeStore::instance().arrow(a);
    Doc dom = type_doc(x.dom), cod = type_doc(x.cod);
    return {wrap(dom, 1) + " -> " + wrap(cod, 0), 0};
  }

  Doc product_doc(AtomId a) {
    ProductAtom x = TypeStore::instance().product(a);
    return {"(" + type_doc(x.left).text + ", " + type_doc(x.right).text + ")", 3};
  }

  Doc field_doc(const std::string& sep_def, const std::string& sep_opt, Type f) {
    if (is_empty(mk_inter(f, undef()))) return {sep_def + type_doc(f).text, 3};
    return {sep_opt + type_doc(mk_diff(f, undef())).text, 3};
  }

  Doc record_doc(AtomId a) {
    RecordAtom r = TypeStore::instance().record(a);
    std::string s = "{";
    bool first = true;
    for (const auto& [l, f] : r.fields) {
      if (f == r.rest) continue;
      if (!first) s += ", ";
      first = false;
      s += l + field_doc(" = ", " =? ", f).text;
    }
    if (r.rest == any_or_undef()) {
      s += first ? ".." : " ..";
    } else if (r.rest != undef()) {
      s += first ? "" : " ";
      s += ".." + field_doc("= ", "=? ", r.rest).text;
    }
    return {s + "}", 3};
  }

  std::set<std::uint32_t> cyclic_;
  std::map<Type, std::string> named_;
  std::vector<Type> order_;
};

// Expression printing: 0 binders and type-cases, 1 applications, 2 atoms.
int expr_level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lambda:
    case Expr::Kind::TypeCase:
    case Expr::Kind::Let:
      return 0;
    case Expr::Kind::App:
    case Expr::Kind::Proj:
      return 1;
    default:
      return 2;
  }
}

std::string print_at(const ExprPtr& e, int level);

std::string print_node(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      switch (e.constant.kind) {
        case Constant::Kind::Int: return std::to_string(e.constant.n);
        case Constant::Kind::Atom: return e.constant.s;
        case Constant::Kind::Char: return quote_char(e.constant.ch);
        case Constant::Kind::String: return quote_string(e.constant.s);
      }
      return "";
    case Expr::Kind::Var:
    case Expr::Kind::BuiltinRef:
      return e.name;
    case Expr::Kind::App:
      return print_at(e.kids[0], 1) + " " + print_at(e.kids[1], 2);
    case Expr::Kind::Lambda: {
      std::string ann;
      if (e.arrows.size() == 1 && !e.arrows[0].cod) {
        ann = pretty_type(e.arrows[0].dom);
      } else {
        for (const auto& a : e.arrows) {
          if (!a.cod) throw std::invalid_argument("cannot print a partially inferred annotation");
          ann += pretty_type(mk_arrow(a.dom, *a.cod)) + " ; ";
        }
        ann.resize(ann.size() - 1);
      }
      return "fun (" + e.name + " : " + ann + ") -> " + print_at(e.kids[0], 0);
    }
    case Expr::Kind::Proj:
      return std::string(e.index == 1 ? "fst " : "snd ") + print_at(e.kids[0], 2);
    case Expr::Kind::Pair:
      return "(" + print_at(e.kids[0], 0) + ", " + print_at(e.kids[1], 0) + ")";
    case Expr::Kind::TypeCase:
      return "if " + print_at(e.kids[0], 0) + " is " + pretty_type(e.test) + " then " + print_at(e.kids[1], 0) +
             " else " + print_at(e.kids[2], 0);
    case Expr::Kind::EmptyRecord:
      return "{}";
    case Expr::Kind::FieldUpdate: {
      // A chain of updates on {} prints as a record literal.
      std::vector<const Expr*> chain;
      const Expr* r = &e;
      for (; r->kind == Expr::Kind::FieldUpdate; r = r->kids[0].get()) chain.push_back(r);
      if (r->kind == Expr::Kind::EmptyRecord) {
        std::string out = "{";
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
          out += (it == chain.rbegin() ? "" : ", ") + (*it)->label + " = " + print_at((*it)->kids[1], 0);
        return out + "}";
      }
    }
      return "{" + print_at(e.kids[0], 0) + " with " + e.label + " = " + print_at(e.kids[1], 0) + "}";
    case Expr::Kind::FieldDel:
      return "{" + print_at(e.kids[0], 0) + " without " + e.label + "}";
    case Expr::Kind::FieldSel:
      return print_at(e.kids[0], 2) + "." + e.label;
    case Expr::Kind::Let:
      return "let " + e.name + " = " + print_at(e.kids[0], 0) + " in " + print_at(e.kids[1], 0);
  }
  return "";
}

std::string print_at(const ExprPtr& e, int level) {
  std::string s = print_node(*e);
  return expr_level(*e) < level ? "(" + s + ")" : s;
}

}  // namespace

std::string pretty_type(Type t) {
  TypePrinter p(t);
  return p.run(t);
}

std::string print_expr(const ExprPtr& e) { return print_at(e, 0); }

}  // namespace occt
