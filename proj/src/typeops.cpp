#include "occt/typeops.hpp"

#include <set>

#include "occt/subtype.hpp"

namespace occt {

namespace {

struct Arrows {
  std::vector<ArrowAtom> pos;
};

std::vector<Arrows> arrow_summands(Type t) {
  if (!subtype(t, arrow_top())) throw TypeOpError(TypeOpError::Kind::NotAFunction, "not a function type");
  auto& store = TypeStore::instance();
  std::vector<Arrows> r;
  for (const auto& c : arrow_clauses(t)) {
    if (c.pos.size() > kMaxArrowsPerSummand)
      throw TypeOpError(TypeOpError::Kind::TooManyArrows, "too many arrows in one summand");
    Arrows a;
    for (AtomId id : c.pos) a.pos.push_back(store.arrow(id));
    r.push_back(std::move(a));
  }
  return r;
}

// Leaves of the product decomposition of one clause: disjoint pairs whose
// union is the clause.
void product_leaves(Type s1, Type s2, const std::vector<ProductAtom>& neg, std::size_t i,
                    std::vector<std::pair<Type, Type>>& out) {
  if (is_empty(s1) || is_empty(s2)) return;
  if (i == neg.size()) {
    out.emplace_back(s1, s2);
    return;
  }
  const auto& n = neg[i];
  product_leaves(mk_diff(s1, n.left), s2, neg, i + 1, out);
  product_leaves(mk_inter(s1, n.left), mk_diff(s2, n.right), neg, i + 1, out);
}

std::vector<std::pair<Type, Type>> product_pairs(Type t) {
  if (!subtype(t, product_top())) throw TypeOpError(TypeOpError::Kind::NotAProduct, "not a product type");
  auto& store = TypeStore::instance();
  std::vector<std::pair<Type, Type>> out;
  for (const auto& c : product_clauses(t)) {
    Type s1 = any(), s2 = any();
    for (AtomId a : c.pos) {
      ProductAtom p = store.product(a);
      s1 = mk_inter(s1, p.left);
      s2 = mk_inter(s2, p.right);
    }
    std::vector<ProductAtom> neg;
    for (AtomId a : c.neg) neg.push_back(store.product(a));
    product_leaves(s1, s2, neg, 0, out);
  }
  return out;
}

void require_record(Type t) {
  if (!subtype(t, record_top())) throw TypeOpError(TypeOpError::Kind::NotARecord, "not a record type");
}

std::set<std::string> labels_of(Type t) {
  auto& store = TypeStore::instance();
  std::set<std::string> r;
  for (const auto& c : descr(t).records.clauses)
    for (const auto* ids : {&c.pos, &c.neg})
      for (AtomId a : *ids)
        for (const auto& [l, ft] : store.record(a).fields) r.insert(l);
  return r;
}

std::vector<RecordRowView> rows_of(Type t, const std::set<std::string>& labels) {
  std::vector<RecordRowView> r;
  for (const auto& c : record_clauses(t))
    for (auto& row : record_rows(c, labels)) r.push_back(std::move(row));
  return r;
}

// Rows carry placeholder labels for "some unnamed label"; a record atom
// cannot, so they are folded back into the rest.
Type row_type(const RecordRowView& row) {
  RecordRow r;
  r.rest = row.rest;
  for (const auto& [l, ft] : row.fields)
    if (!is_placeholder_label(l)) r.labeled[l] = ft;
  return mk_record(r);
}

Type merge_field(Type f1, Type f2) {
  if (is_empty(mk_inter(f2, undef()))) return f2;
  return mk_union(f1, mk_diff(f2, undef()));
}

}  // namespace

Type arrow_top() {
  static const Type t = mk_arrow(empty(), any());
  return t;
}

Type product_top() {
  static const Type t = mk_product(any(), any());
  return t;
}

Type record_top() {
  static const Type t = mk_record(RecordRow::open());
  return t;
}

Type dom(Type t) {
  Type r = any();
  for (const auto& a : arrow_summands(t)) {
    Type u = empty();
    for (const auto& p : a.pos) u = mk_union(u, p.dom);
    r = mk_inter(r, u);
  }
  return simplify(r);
}

Type apply(Type t, Type s) {
  auto summands = arrow_summands(t);
  Type d = any();
  for (const auto& a : summands) {
    Type u = empty();
    for (const auto& p : a.pos) u = mk_union(u, p.dom);
    d = mk_inter(d, u);
  }
  if (!subtype(s, d)) throw TypeOpError(TypeOpError::Kind::ArgumentOutsideDomain, "argument outside the domain");
  if (is_empty(s)) return empty();
  Type r = empty();
  for (const auto& a : summands) {
    std::size_t n = a.pos.size();
    // Q ranges over proper subsets of the summand's arrows.
    for (std::uint32_t q = 0; q + 1 < (1u << n); ++q) {
      Type covered = empty();
      Type cod = any();
      for (std::size_t k = 0; k < n; ++k) {
        if (q & (1u << k))
          covered = mk_union(covered, a.pos[k].dom);
        else
          cod = mk_inter(cod, a.pos[k].cod);
      }
      if (!subtype(s, covered)) r = mk_union(r, cod);
    }
  }
  return simplify(r);
}

Type worra(Type t, Type s) {
  Type d = dom(t);
  Type r = empty();
  for (const auto& a : arrow_summands(t)) {
    std::size_t n = a.pos.size();
    for (std::uint32_t p = 0; p < (1u << n); ++p) {
      Type neg_cods = empty();
      Type part = d;
      for (std::size_t k = 0; k < n; ++k) {
        if (p & (1u << k)) {
          neg_cods = mk_union(neg_cods, mk_neg(a.pos[k].cod));
          part = mk_inter(part, a.pos[k].dom);
        } else {
          part = mk_diff(part, a.pos[k].dom);
        }
      }
      if (!subtype(s, neg_cods)) r = mk_union(r, part);
    }
  }
  return simplify(r);
}

Type proj1(Type t) {
  Type r = empty();
  for (const auto& [l, rr] : product_pairs(t)) r = mk_union(r, l);
  return simplify(r);
}

Type proj2(Type t) {
  Type r = empty();
  for (const auto& [l, rr] : product_pairs(t)) r = mk_union(r, rr);
  return simplify(r);
}

Type rec_proj(const std::string& label, Type t) {
  require_record(t);
  if (!subtype(t, mk_record(RecordRow::open({{label, any()}}))))
    throw TypeOpError(TypeOpError::Kind::MissingField, "field '" + label + "' may be undefined");
  Type r = empty();
  for (const auto& row : rows_of(t, {label})) r = mk_union(r, row.fields.at(label));
  return simplify(r);
}

Type rec_merge(Type t1, Type t2) {
  require_record(t1);
  require_record(t2);
  auto labels = labels_of(t1);
  labels.merge(labels_of(t2));
  auto rows1 = rows_of(t1, labels);
  auto rows2 = rows_of(t2, labels);
  Type r = empty();
  for (const auto& a : rows1)
    for (const auto& b : rows2) {
      RecordRow row;
      row.rest = merge_field(a.rest, b.rest);
      for (const auto& l : labels) row.labeled[l] = merge_field(a.fields.at(l), b.fields.at(l));
      r = mk_union(r, mk_record(row));
    }
  return simplify(r);
}

Type rec_del(Type t, const std::string& label) {
  require_record(t);
  Type r = empty();
  for (auto row : rows_of(t, {label})) {
    row.fields[label] = undef();
    r = mk_union(r, row_type(row));
  }
  return simplify(r);
}

}  // namespace occt
