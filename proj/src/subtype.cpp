#include "occt/subtype.hpp"

#include <algorithm>

namespace occt {

namespace {

enum : std::uint8_t { Unknown = 0, InProgress = 1, Tentative = 2, Empty = 3, NonEmpty = 4 };

// Nodes answered "empty" while some ancestor was still open. They are
// committed once the outermost query finishes, or reset if an ancestor they
// may have relied on turns out nonempty.
std::vector<std::uint32_t> tentative;
int depth = 0;

std::uint8_t& memo(Type t) { return TypeStore::instance().emptiness_memo()[t.id]; }

bool basics_empty(const Descr& d) {
  return d.ints.is_empty() && d.atoms.is_empty() && d.chars.is_empty() && d.strings.is_empty();
}

bool phi_arrow(Type t1, Type t2, const std::vector<ArrowAtom>& pos, std::size_t i) {
  if (is_empty(t1) || is_empty(t2)) return true;
  if (i == pos.size()) return false;
  const ArrowAtom& a = pos[i];
  return phi_arrow(mk_diff(t1, a.dom), t2, pos, i + 1) &&
         phi_arrow(t1, mk_inter(t2, a.cod), pos, i + 1);
}

bool arrow_empty(const Clause& c) {
  auto& store = TypeStore::instance();
  std::vector<ArrowAtom> pos;
  Type doms = empty();
  for (AtomId a : c.pos) {
    pos.push_back(store.arrow(a));
    doms = mk_union(doms, pos.back().dom);
  }
  for (AtomId n : c.neg) {
    ArrowAtom a = store.arrow(n);
    if (subtype(a.dom, doms) && phi_arrow(a.dom, mk_neg(a.cod), pos, 0)) return true;
  }
  return false;
}

bool phi_product(Type s1, Type s2, const std::vector<ProductAtom>& neg, std::size_t i) {
  if (is_empty(s1) || is_empty(s2)) return true;
  if (i == neg.size()) return false;
  const ProductAtom& n = neg[i];
  return phi_product(mk_diff(s1, n.left), s2, neg, i + 1) &&
         phi_product(mk_inter(s1, n.left), mk_diff(s2, n.right), neg, i + 1);
}

bool product_empty(const Clause& c) {
  auto& store = TypeStore::instance();
  Type s1 = any(), s2 = any();
  for (AtomId a : c.pos) {
    ProductAtom p = store.product(a);
    s1 = mk_inter(s1, p.left);
    s2 = mk_inter(s2, p.right);
  }
  std::vector<ProductAtom> neg;
  for (AtomId n : c.neg) neg.push_back(store.product(n));
  return phi_product(s1, s2, neg, 0);
}

const std::string kPlaceholderPrefix = "\x01";

struct RecordSplit {
  std::vector<RecordAtom> neg;
  std::vector<RecordRowView> out;
  bool stop_at_first = false;

  bool row_empty(const RecordRowView& r) const {
    if (is_empty(r.rest)) return true;
    for (const auto& [l, t] : r.fields)
      if (is_empty(t)) return true;
    return false;
  }

  // Returns true when the row minus neg[i..] is empty; collects the
  // nonempty leaves into `out`.
  bool run(const RecordRowView& r, std::size_t i) {
    if (row_empty(r)) return true;
    if (i == neg.size()) {
      out.push_back(r);
      return false;
    }
    const RecordAtom& n = neg[i];
    bool all_empty = true;
    for (const auto& [label, t] : r.fields) {
      Type nf = is_placeholder_label(label) ? n.rest : n.field(label);
      RecordRowView next = r;
      next.fields[label] = mk_diff(t, nf);
      if (!run(next, i + 1)) {
        all_empty = false;
        if (stop_at_first) return false;
      }
    }
    return all_empty;
  }
};

RecordSplit split_record(const Clause& c, const std::set<std::string>& extra, bool stop_at_first) {
  auto& store = TypeStore::instance();
  std::vector<RecordAtom> pos;
  RecordSplit split;
  split.stop_at_first = stop_at_first;
  for (AtomId a : c.pos) pos.push_back(store.record(a));
  for (AtomId a : c.neg) split.neg.push_back(store.record(a));

  std::set<std::string> labels = extra;
  for (const auto& r : pos)
    for (const auto& [l, t] : r.fields) labels.insert(l);
  for (const auto& r : split.neg)
    for (const auto& [l, t] : r.fields) labels.insert(l);

  RecordRowView row;
  row.rest = any_or_undef();
  for (const auto& r : pos) row.rest = mk_inter(row.rest, r.rest);
  for (const auto& l : labels) {
    Type f = any_or_undef();
    for (const auto& r : pos) f = mk_inter(f, r.field(l));
    row.fields[l] = f;
  }
  for (std::size_t k = 0; k < split.neg.size(); ++k)
    row.fields[kPlaceholderPrefix + std::to_string(k)] = row.rest;

  split.run(row, 0);
  return split;
}

bool record_empty(const Clause& c) { return split_record(c, {}, true).out.empty(); }

bool compute_empty(Type t) {
  Descr d = descr(t);
  if (!basics_empty(d) || d.undef) return false;
  for (const auto& c : d.arrows.clauses)
    if (!arrow_empty(c)) return false;
  for (const auto& c : d.products.clauses)
    if (!product_empty(c)) return false;
  for (const auto& c : d.records.clauses)
    if (!record_empty(c)) return false;
  return true;
}

std::vector<Clause> nonempty(Kind kind, const Dnf& dnf) {
  std::vector<Clause> r;
  for (const auto& c : dnf.clauses)
    if (!clause_empty(kind, c)) r.push_back(c);
  return r;
}

}  // namespace

bool is_empty(Type t) {
  switch (memo(t)) {
    case NonEmpty:
      return false;
    case InProgress:
    case Tentative:
    case Empty:
      return true;
    default:
      break;
  }
  std::size_t mark = tentative.size();
  memo(t) = InProgress;
  ++depth;
  bool e = compute_empty(t);
  --depth;
  if (e) {
    memo(t) = Tentative;
    tentative.push_back(t.id);
  } else {
    for (std::size_t i = mark; i < tentative.size(); ++i) memo(Type{tentative[i]}) = Unknown;
    tentative.resize(mark);
    memo(t) = NonEmpty;
  }
  if (depth == 0) {
    for (auto id : tentative) memo(Type{id}) = Empty;
    tentative.clear();
  }
  return e;
}

bool subtype(Type s, Type t) { return is_empty(mk_diff(s, t)); }

bool equiv(Type s, Type t) { return subtype(s, t) && subtype(t, s); }

void clear_memo() {
  auto& m = TypeStore::instance().emptiness_memo();
  std::fill(m.begin(), m.end(), Unknown);
  tentative.clear();
  depth = 0;
}

Type clause_type(Kind kind, const Clause& c) {
  Descr d;
  Dnf dnf{{c}};
  switch (kind) {
    case Kind::Arrow:
      d.arrows = dnf;
      break;
    case Kind::Product:
      d.products = dnf;
      break;
    case Kind::Record:
      d.records = dnf;
      break;
    default:
      throw std::invalid_argument("clause_type: not a constructor kind");
  }
  return intern(d);
}

bool clause_empty(Kind kind, const Clause& c) { return is_empty(clause_type(kind, c)); }

std::vector<Summand> dnf(Type t) {
  Descr d = descr(t);
  std::vector<Summand> r;
  if (!basics_empty(d)) {
    Descr b;
    b.ints = d.ints;
    b.atoms = d.atoms;
    b.chars = d.chars;
    b.strings = d.strings;
    r.push_back({Kind::Basic, intern(b), {}, {}});
  }
  if (d.undef) r.push_back({Kind::Undef, undef(), {}, {}});
  for (auto [kind, part] : {std::pair{Kind::Arrow, &d.arrows}, std::pair{Kind::Product, &d.products},
                            std::pair{Kind::Record, &d.records}})
    for (const auto& c : nonempty(kind, *part)) r.push_back({kind, Type{}, c.pos, c.neg});
  return r;
}

std::vector<Clause> arrow_clauses(Type t) { return nonempty(Kind::Arrow, Dnf(descr(t).arrows)); }
std::vector<Clause> product_clauses(Type t) { return nonempty(Kind::Product, Dnf(descr(t).products)); }
std::vector<Clause> record_clauses(Type t) { return nonempty(Kind::Record, Dnf(descr(t).records)); }

namespace {

// Products and records intersect pointwise, so the positive atoms of a
// clause collapse into one.
void merge_positive(Kind kind, std::vector<Clause>& clauses) {
  auto& store = TypeStore::instance();
  for (Clause& c : clauses) {
    if (c.pos.size() < 2) continue;
    AtomId merged;
    if (kind == Kind::Product) {
      std::vector<Type> ls, rs;
      for (AtomId a : c.pos) {
        ls.push_back(store.product(a).left);
        rs.push_back(store.product(a).right);
      }
      merged = store.product_atom(mk_inter(ls), mk_inter(rs));
    } else {
      std::vector<RecordAtom> atoms;
      std::set<std::string> labels;
      for (AtomId a : c.pos) {
        atoms.push_back(store.record(a));
        for (const auto& [l, f] : atoms.back().fields) labels.insert(l);
      }
      RecordAtom r;
      std::vector<Type> rests;
      for (const auto& a : atoms) rests.push_back(a.rest);
      r.rest = mk_inter(rests);
      for (const auto& l : labels) {
        std::vector<Type> fs;
        for (const auto& a : atoms) fs.push_back(a.field(l));
        r.fields.emplace_back(l, mk_inter(fs));
      }
      merged = store.record_atom(std::move(r));
    }
    c.pos = {merged};
  }
}

}  // namespace

Type simplify(Type t) {
  Descr d = descr(t);
  d.arrows.clauses = nonempty(Kind::Arrow, d.arrows);
  d.products.clauses = nonempty(Kind::Product, d.products);
  d.records.clauses = nonempty(Kind::Record, d.records);
  merge_positive(Kind::Product, d.products.clauses);
  merge_positive(Kind::Record, d.records.clauses);
  return intern(d);
}

std::vector<RecordRowView> record_rows(const Clause& c, const std::set<std::string>& labels) {
  auto rows = split_record(c, labels, false).out;
  auto key = [](const RecordRowView& r) {
    std::vector<std::pair<std::string, std::uint32_t>> k;
    for (const auto& [l, t] : r.fields) k.emplace_back(l, t.id);
    k.emplace_back("", r.rest.id);
    return k;
  };
  std::vector<RecordRowView> out;
  std::set<std::vector<std::pair<std::string, std::uint32_t>>> seen;
  for (auto& r : rows)
    if (seen.insert(key(r)).second) out.push_back(std::move(r));
  return out;
}

bool is_placeholder_label(const std::string& label) { return label.rfind(kPlaceholderPrefix, 0) == 0; }

}  // namespace occt
