#include "occt/types.hpp"

#include <algorithm>
#include <iterator>

namespace occt {

namespace {

bool normalize(Clause& c) {
  std::sort(c.pos.begin(), c.pos.end());
  c.pos.erase(std::unique(c.pos.begin(), c.pos.end()), c.pos.end());
  std::sort(c.neg.begin(), c.neg.end());
  c.neg.erase(std::unique(c.neg.begin(), c.neg.end()), c.neg.end());
  std::vector<AtomId> both;
  std::set_intersection(c.pos.begin(), c.pos.end(), c.neg.begin(), c.neg.end(),
                        std::back_inserter(both));
  return both.empty();
}

// d subsumes c when every literal of d appears in c, i.e. c <= d.
bool subsumes(const Clause& d, const Clause& c) {
  return std::includes(c.pos.begin(), c.pos.end(), d.pos.begin(), d.pos.end()) &&
         std::includes(c.neg.begin(), c.neg.end(), d.neg.begin(), d.neg.end());
}

Dnf canonical(std::vector<Clause> cs) {
  std::vector<Clause> kept;
  for (auto& c : cs)
    if (normalize(c)) kept.push_back(std::move(c));
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<Clause> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < kept.size() && !redundant; ++j)
      redundant = i != j && subsumes(kept[j], kept[i]);
    if (!redundant) out.push_back(kept[i]);
  }
  return {std::move(out)};
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_dnf(const Dnf& d) {
  std::size_t h = d.clauses.size();
  for (const auto& c : d.clauses) {
    for (auto a : c.pos) h = mix(h, a);
    h = mix(h, 0xabcdef);
    for (auto a : c.neg) h = mix(h, a);
    h = mix(h, 0xfedcba);
  }
  return h;
}

}  // namespace

bool Dnf::is_all() const {
  return std::any_of(clauses.begin(), clauses.end(),
                     [](const Clause& c) { return c.pos.empty() && c.neg.empty(); });
}

Dnf operator|(const Dnf& a, const Dnf& b) {
  if (a.is_all() || b.is_all()) return Dnf::all();
  std::vector<Clause> cs = a.clauses;
  cs.insert(cs.end(), b.clauses.begin(), b.clauses.end());
  return canonical(std::move(cs));
}

Dnf operator&(const Dnf& a, const Dnf& b) {
  if (a.is_all()) return b;
  if (b.is_all()) return a;
  std::vector<Clause> cs;
  cs.reserve(a.clauses.size() * b.clauses.size());
  for (const auto& x : a.clauses)
    for (const auto& y : b.clauses) {
      Clause c = x;
      c.pos.insert(c.pos.end(), y.pos.begin(), y.pos.end());
      c.neg.insert(c.neg.end(), y.neg.begin(), y.neg.end());
      cs.push_back(std::move(c));
    }
  return canonical(std::move(cs));
}

Dnf Dnf::complement() const {
  Dnf result = Dnf::all();
  for (const auto& c : clauses) {
    std::vector<Clause> alts;
    for (auto p : c.pos) alts.push_back(Clause{{}, {p}});
    for (auto n : c.neg) alts.push_back(Clause{{n}, {}});
    result = result & canonical(std::move(alts));
    if (result.is_none()) break;
  }
  return result;
}

Type RecordAtom::field(const std::string& label) const {
  auto it = std::lower_bound(fields.begin(), fields.end(), label,
                             [](const auto& f, const std::string& l) { return f.first < l; });
  if (it != fields.end() && it->first == label) return it->second;
  return rest;
}

std::size_t Descr::hash() const {
  std::size_t h = ints.hash();
  h = mix(h, atoms.hash());
  h = mix(h, chars.hash());
  h = mix(h, strings.hash());
  h = mix(h, undef ? 1 : 2);
  h = mix(h, hash_dnf(arrows));
  h = mix(h, hash_dnf(products));
  h = mix(h, hash_dnf(records));
  return h;
}

Descr operator|(const Descr& a, const Descr& b) {
  Descr r;
  r.ints = a.ints | b.ints;
  r.atoms = a.atoms | b.atoms;
  r.chars = a.chars | b.chars;
  r.strings = a.strings | b.strings;
  r.undef = a.undef || b.undef;
  r.arrows = a.arrows | b.arrows;
  r.products = a.products | b.products;
  r.records = a.records | b.records;
  return r;
}

Descr operator&(const Descr& a, const Descr& b) {
  Descr r;
  r.ints = a.ints & b.ints;
  r.atoms = a.atoms & b.atoms;
  r.chars = a.chars & b.chars;
  r.strings = a.strings & b.strings;
  r.undef = a.undef && b.undef;
  r.arrows = a.arrows & b.arrows;
  r.products = a.products & b.products;
  r.records = a.records & b.records;
  return r;
}

Descr Descr::complement() const {
  Descr r;
  r.ints = ints.complement();
  r.atoms = atoms.complement();
  r.chars = chars.complement();
  r.strings = strings.complement();
  r.undef = !undef;
  r.arrows = arrows.complement();
  r.products = products.complement();
  r.records = records.complement();
  return r;
}

TypeStore& TypeStore::instance() {
  static TypeStore store;
  return store;
}

TypeStore::TypeStore() { intern(Descr{}); }

Type TypeStore::intern(const Descr& d) {
  auto it = intern_.find(d);
  if (it != intern_.end()) return Type{it->second};
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(d);
  emptiness_.push_back(0);
  intern_.emplace(d, id);
  return Type{id};
}

Type TypeStore::placeholder() {
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  emptiness_.push_back(0);
  return Type{id};
}

void TypeStore::fill(Type t, Descr d) {
  nodes_[t.id] = std::move(d);
  intern_.emplace(nodes_[t.id], t.id);
}

AtomId TypeStore::arrow_atom(Type dom, Type cod) {
  auto key = std::make_pair(dom.id, cod.id);
  auto [it, fresh] = arrow_ids_.emplace(key, static_cast<AtomId>(arrows_.size()));
  if (fresh) arrows_.push_back({dom, cod});
  return it->second;
}

AtomId TypeStore::product_atom(Type left, Type right) {
  auto key = std::make_pair(left.id, right.id);
  auto [it, fresh] = product_ids_.emplace(key, static_cast<AtomId>(products_.size()));
  if (fresh) products_.push_back({left, right});
  return it->second;
}

AtomId TypeStore::record_atom(RecordAtom r) {
  std::sort(r.fields.begin(), r.fields.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::string, std::uint32_t>> key;
  key.reserve(r.fields.size());
  for (const auto& [l, t] : r.fields) key.emplace_back(l, t.id);
  auto [it, fresh] = record_ids_.emplace(std::make_pair(std::move(key), r.rest.id),
                                         static_cast<AtomId>(records_.size()));
  if (fresh) records_.push_back(std::move(r));
  return it->second;
}

namespace {

Descr any_descr() {
  Descr d;
  d.ints = BasicSet<std::int64_t>::all();
  d.atoms = BasicSet<std::string>::all();
  d.chars = BasicSet<char32_t>::all();
  d.strings = BasicSet<std::string>::all();
  d.arrows = Dnf::all();
  d.products = Dnf::all();
  d.records = Dnf::all();
  return d;
}

}  // namespace

Type empty() { return Type{0}; }

Type any() {
  static const Type t = intern(any_descr());
  return t;
}

Type undef() {
  static const Type t = [] {
    Descr d;
    d.undef = true;
    return intern(d);
  }();
  return t;
}

Type any_or_undef() {
  static const Type t = mk_union(any(), undef());
  return t;
}

Type mk_ints(BasicSet<std::int64_t> s) {
  Descr d;
  d.ints = std::move(s);
  return intern(d);
}

Type mk_atoms(BasicSet<std::string> s) {
  Descr d;
  d.atoms = std::move(s);
  return intern(d);
}

Type mk_chars(BasicSet<char32_t> s) {
  Descr d;
  d.chars = std::move(s);
  return intern(d);
}

Type mk_strings(BasicSet<std::string> s) {
  Descr d;
  d.strings = std::move(s);
  return intern(d);
}

Type int_type() { return mk_ints(BasicSet<std::int64_t>::all()); }
Type char_type() { return mk_chars(BasicSet<char32_t>::all()); }
Type string_type() { return mk_strings(BasicSet<std::string>::all()); }
Type bool_type() { return mk_atoms(BasicSet<std::string>::of({"true", "false"})); }
Type true_type() { return mk_atom("true"); }
Type false_type() { return mk_atom("false"); }
Type nil_type() { return mk_atom("nil"); }

Type mk_int(std::int64_t n) { return mk_ints(BasicSet<std::int64_t>::of({n})); }
Type mk_atom(const std::string& name) { return mk_atoms(BasicSet<std::string>::of({name})); }
Type mk_char(char32_t c) { return mk_chars(BasicSet<char32_t>::of({c})); }
Type mk_string(const std::string& s) { return mk_strings(BasicSet<std::string>::of({s})); }

Type mk_arrow(Type dom, Type cod) {
  Descr d;
  d.arrows = Dnf::atom(TypeStore::instance().arrow_atom(dom, cod));
  return intern(d);
}

Type mk_product(Type left, Type right) {
  Descr d;
  d.products = Dnf::atom(TypeStore::instance().product_atom(left, right));
  return intern(d);
}

Type mk_union(Type a, Type b) {
  if (a == b) return a;
  return intern(descr(a) | descr(b));
}

Type mk_inter(Type a, Type b) {
  if (a == b) return a;
  return intern(descr(a) & descr(b));
}

Type mk_diff(Type a, Type b) { return intern(descr(a) & descr(b).complement()); }

Type mk_neg(Type a) { return mk_diff(any(), a); }

Type mk_union(const std::vector<Type>& ts) {
  Descr d;
  for (auto t : ts) d = d | descr(t);
  return intern(d);
}

Type mk_inter(const std::vector<Type>& ts) {
  Descr d = any_descr();
  d.undef = true;
  for (auto t : ts) d = d & descr(t);
  return intern(d);
}

RecordRow RecordRow::closed(std::map<std::string, Type> fields) { return {std::move(fields), undef()}; }
RecordRow RecordRow::open(std::map<std::string, Type> fields) { return {std::move(fields), any_or_undef()}; }

Type mk_record(const RecordRow& row) {
  RecordAtom r;
  for (const auto& [l, t] : row.labeled) r.fields.emplace_back(l, t);
  r.rest = row.rest;
  Descr d;
  d.records = Dnf::atom(TypeStore::instance().record_atom(std::move(r)));
  return intern(d);
}

Type optional(Type t) { return mk_union(t, undef()); }

Type arrow_part(Type t) {
  Descr d;
  d.arrows = descr(t).arrows;
  return intern(d);
}

Type product_part(Type t) {
  Descr d;
  d.products = descr(t).products;
  return intern(d);
}

Type record_part(Type t) {
  Descr d;
  d.records = descr(t).records;
  return intern(d);
}

TypeTermPtr TypeTerm::of(Type t) {
  auto r = std::make_shared<TypeTerm>();
  r->kind = Kind::Const;
  r->constant = t;
  return r;
}

TypeTermPtr TypeTerm::var(std::string n) {
  auto r = std::make_shared<TypeTerm>();
  r->kind = Kind::Var;
  r->name = std::move(n);
  return r;
}

TypeTermPtr TypeTerm::binary(Kind k, TypeTermPtr a, TypeTermPtr b) {
  auto r = std::make_shared<TypeTerm>();
  r->kind = k;
  r->args = {std::move(a), std::move(b)};
  return r;
}

TypeTermPtr TypeTerm::neg(TypeTermPtr a) {
  auto r = std::make_shared<TypeTerm>();
  r->kind = Kind::Neg;
  r->args = {std::move(a)};
  return r;
}

TypeTermPtr TypeTerm::record(std::vector<Field> fs, bool open) {
  auto r = std::make_shared<TypeTerm>();
  r->kind = Kind::Record;
  r->fields = std::move(fs);
  r->open = open;
  return r;
}

namespace {

// Solves a group of equations. Constructor children that mention group
// variables become auxiliary equations, so every body is a boolean
// combination of known types, group variables and constructor atoms over
// node handles. Unguarded variable references are expanded in place; a
// variable reached again while its own expansion is in progress is a
// non-contractive cycle.
class EquationSolver {
 public:
  EquationSolver(const std::vector<std::pair<std::string, TypeTermPtr>>& eqs, const TypeBindings& outer)
      : outer_(outer) {
    for (const auto& [name, body] : eqs) {
      if (!index_.emplace(name, bodies_.size()).second)
        throw std::invalid_argument("type variable defined twice: " + name);
      names_.push_back(name);
      bodies_.push_back(body);
    }
    grow();
  }

  std::vector<Type> solve_all() {
    std::size_t declared = names_.size();
    for (std::size_t i = 0; i < bodies_.size(); ++i) solve(i);
    auto& store = TypeStore::instance();
    for (std::size_t i = 0; i < bodies_.size(); ++i)
      if (holder_[i]) store.fill(*holder_[i], *solved_[i]);
    std::vector<Type> out;
    for (std::size_t i = 0; i < declared; ++i) out.push_back(holder_[i] ? *holder_[i] : intern(*solved_[i]));
    return out;
  }

  Type closed(const TypeTermPtr& t) { return intern(eval(t)); }

 private:
  void grow() {
    state_.resize(bodies_.size(), 0);
    solved_.resize(bodies_.size());
    holder_.resize(bodies_.size());
  }

  bool mentions_group(const TypeTermPtr& t) const {
    switch (t->kind) {
      case TypeTerm::Kind::Const:
        return false;
      case TypeTerm::Kind::Var:
        return index_.count(t->name) > 0;
      case TypeTerm::Kind::Record:
        return (t->rest && mentions_group(t->rest)) ||
               std::any_of(t->fields.begin(), t->fields.end(), [&](const auto& f) { return mentions_group(f.type); });
      default:
        return std::any_of(t->args.begin(), t->args.end(), [&](const auto& a) { return mentions_group(a); });
    }
  }

  Type node_for(std::size_t i) {
    if (!holder_[i]) holder_[i] = TypeStore::instance().placeholder();
    return *holder_[i];
  }

  Type guarded(const TypeTermPtr& t) {
    if (t->kind == TypeTerm::Kind::Var) {
      auto it = index_.find(t->name);
      if (it != index_.end()) return node_for(it->second);
    }
    if (!mentions_group(t)) return intern(eval(t));
    std::size_t i = bodies_.size();
    names_.push_back("");
    bodies_.push_back(t);
    grow();
    return node_for(i);
  }

  const Descr& solve(std::size_t i) {
    if (state_[i] == 2) return *solved_[i];
    if (state_[i] == 1)
      throw ContractivityViolation("recursive type " + (names_[i].empty() ? std::string("<anonymous>") : names_[i]) +
                                   " is not contractive");
    state_[i] = 1;
    Descr d = eval(bodies_[i]);
    state_[i] = 2;
    solved_[i] = std::move(d);
    return *solved_[i];
  }

  Descr eval(const TypeTermPtr& t) {
    using K = TypeTerm::Kind;
    switch (t->kind) {
      case K::Const:
        return descr(t->constant);
      case K::Var: {
        auto it = index_.find(t->name);
        if (it != index_.end()) return solve(it->second);
        auto o = outer_.find(t->name);
        if (o == outer_.end()) throw std::invalid_argument("unbound type name: " + t->name);
        return descr(o->second);
      }
      case K::Arrow: {
        Descr d;
        d.arrows = Dnf::atom(TypeStore::instance().arrow_atom(guarded(t->args[0]), guarded(t->args[1])));
        return d;
      }
      case K::Product: {
        Descr d;
        d.products = Dnf::atom(TypeStore::instance().product_atom(guarded(t->args[0]), guarded(t->args[1])));
        return d;
      }
      case K::Record: {
        RecordAtom r;
        for (const auto& f : t->fields) {
          if (std::any_of(r.fields.begin(), r.fields.end(), [&](const auto& g) { return g.first == f.label; }))
            throw std::invalid_argument("duplicate record label: " + f.label);
          auto ft = f.optional ? TypeTerm::binary(K::Union, f.type, TypeTerm::of(undef())) : f.type;
          r.fields.emplace_back(f.label, guarded(ft));
        }
        if (t->rest)
          r.rest = guarded(t->rest);
        else
          r.rest = t->open ? any_or_undef() : undef();
        Descr d;
        d.records = Dnf::atom(TypeStore::instance().record_atom(std::move(r)));
        return d;
      }
      case K::Union:
        return eval(t->args[0]) | eval(t->args[1]);
      case K::Inter:
        return eval(t->args[0]) & eval(t->args[1]);
      case K::Diff:
        return eval(t->args[0]) & eval(t->args[1]).complement();
      case K::Neg:
        return descr(any()) & eval(t->args[0]).complement();
    }
    return {};
  }

  const TypeBindings& outer_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<TypeTermPtr> bodies_;
  std::vector<int> state_;
  std::vector<std::optional<Descr>> solved_;
  std::vector<std::optional<Type>> holder_;
};

}  // namespace

std::vector<Type> mk_recursive(const std::vector<std::pair<std::string, TypeTermPtr>>& equations,
                               const TypeBindings& outer) {
  EquationSolver solver(equations, outer);
  return solver.solve_all();
}

Type resolve(const TypeTermPtr& term, const TypeBindings& names) {
  EquationSolver solver({}, names);
  return solver.closed(term);
}

}  // namespace occt
