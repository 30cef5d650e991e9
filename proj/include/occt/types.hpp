#pragma once

// Set-theoretic types: interned descriptors over basic sets, arrows,
// products and records, with recursion through constructor atoms.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "occt/basic_set.hpp"

namespace occt {

/// Handle to an interned type node. Two handles with the same id denote the
/// same node; semantic equivalence is decided by `equiv` in subtype.hpp.
struct Type {
  std::uint32_t id = 0;
  friend auto operator<=>(Type, Type) = default;
};

using AtomId = std::uint32_t;

/// One conjunction of atoms of a single constructor kind: the positive atoms
/// `pos` and the negated atoms `neg`, both sorted and duplicate-free.
struct Clause {
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;
};

/// Union of clauses. No clauses is the empty set of the kind; a single clause
/// without literals is the whole kind.
struct Dnf {
  std::vector<Clause> clauses;

  static Dnf none() { return {}; }
  static Dnf all() { return {{Clause{}}}; }
  static Dnf atom(AtomId a) { return {{Clause{{a}, {}}}}; }

  bool is_none() const { return clauses.empty(); }
  bool is_all() const;

  friend Dnf operator|(const Dnf& a, const Dnf& b);
  friend Dnf operator&(const Dnf& a, const Dnf& b);
  Dnf complement() const;

  friend bool operator==(const Dnf&, const Dnf&) = default;
};

struct ArrowAtom {
  Type dom;
  Type cod;
  friend bool operator==(const ArrowAtom&, const ArrowAtom&) = default;
};

struct ProductAtom {
  Type left;
  Type right;
  friend bool operator==(const ProductAtom&, const ProductAtom&) = default;
};

/// A quasi-constant function from labels to types: every label in `fields`
/// maps to its type, every other label maps to `rest`.
struct RecordAtom {
  std::vector<std::pair<std::string, Type>> fields;  // sorted by label
  Type rest;
  friend bool operator==(const RecordAtom&, const RecordAtom&) = default;

  Type field(const std::string& label) const;
};

/// The descriptor stored in each type node. `undef` is the field-absence
/// constant, which lies outside `any()`.
struct Descr {
  BasicSet<std::int64_t> ints;
  BasicSet<std::string> atoms;
  BasicSet<char32_t> chars;
  BasicSet<std::string> strings;
  bool undef = false;
  Dnf arrows;
  Dnf products;
  Dnf records;

  friend bool operator==(const Descr&, const Descr&) = default;
  std::size_t hash() const;

  friend Descr operator|(const Descr& a, const Descr& b);
  friend Descr operator&(const Descr& a, const Descr& b);
  /// Complement in the full universe, `undef` included.
  Descr complement() const;
};

class ContractivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The registry of type nodes and constructor atoms.
///
/// Nodes are immutable once filled. The registry is not synchronised: all
/// type construction and checking must happen on one thread.
class TypeStore {
 public:
  static TypeStore& instance();

  Type intern(const Descr& d);
  const Descr& descr(Type t) const { return nodes_[t.id]; }
  std::size_t size() const { return nodes_.size(); }

  AtomId arrow_atom(Type dom, Type cod);
  AtomId product_atom(Type left, Type right);
  AtomId record_atom(RecordAtom r);

  const ArrowAtom& arrow(AtomId a) const { return arrows_[a]; }
  const ProductAtom& product(AtomId a) const { return products_[a]; }
  const RecordAtom& record(AtomId a) const { return records_[a]; }

  /// Reserve a node whose descriptor is supplied later by `fill`.
  Type placeholder();
  void fill(Type t, Descr d);

  /// Per-node scratch slots for the subtyping engine's memo tables.
  std::vector<std::uint8_t>& emptiness_memo() { return emptiness_; }

 private:
  TypeStore();

  struct DescrHash {
    std::size_t operator()(const Descr& d) const { return d.hash(); }
  };
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
      return (std::size_t(p.first) << 32) ^ p.second;
    }
  };

  std::vector<Descr> nodes_;
  std::unordered_map<Descr, std::uint32_t, DescrHash> intern_;
  std::vector<std::uint8_t> emptiness_;

  std::vector<ArrowAtom> arrows_;
  std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, AtomId, PairHash> arrow_ids_;
  std::vector<ProductAtom> products_;
  std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, AtomId, PairHash> product_ids_;
  std::vector<RecordAtom> records_;
  std::map<std::pair<std::vector<std::pair<std::string, std::uint32_t>>, std::uint32_t>, AtomId>
      record_ids_;
};

inline const Descr& descr(Type t) { return TypeStore::instance().descr(t); }
inline Type intern(const Descr& d) { return TypeStore::instance().intern(d); }

// Constructors. Every result is interned.

Type empty();
Type any();
/// `any() | undef()`: the type of a field of an open record.
Type any_or_undef();
Type undef();

Type int_type();
Type bool_type();
Type char_type();
Type string_type();
Type true_type();
Type false_type();
Type nil_type();

Type mk_int(std::int64_t n);
Type mk_atom(const std::string& name);
Type mk_char(char32_t c);
Type mk_string(const std::string& s);
Type mk_ints(BasicSet<std::int64_t> s);
Type mk_atoms(BasicSet<std::string> s);
Type mk_chars(BasicSet<char32_t> s);
Type mk_strings(BasicSet<std::string> s);

Type mk_arrow(Type dom, Type cod);
Type mk_product(Type left, Type right);
Type mk_union(Type a, Type b);
Type mk_inter(Type a, Type b);
/// `a` minus `b`, computed in the full universe so that `undef` survives.
Type mk_diff(Type a, Type b);
/// `any() \ a`.
Type mk_neg(Type a);

Type mk_union(const std::vector<Type>& ts);
Type mk_inter(const std::vector<Type>& ts);

/// A record row: the labeled fields plus the type of every other label.
struct RecordRow {
  std::map<std::string, Type> labeled;
  Type rest;

  static RecordRow closed(std::map<std::string, Type> fields = {});
  static RecordRow open(std::map<std::string, Type> fields = {});
};

Type mk_record(const RecordRow& row);
/// `t | undef()`: an optional field of type `t`.
Type optional(Type t);

/// The arrow/product/record part of `t` as a type of its own.
Type arrow_part(Type t);
Type product_part(Type t);
Type record_part(Type t);

// Type terms: syntax trees over already-built types and named variables,
// used to build recursive types.

struct TypeTerm;
using TypeTermPtr = std::shared_ptr<const TypeTerm>;

struct TypeTerm {
  enum class Kind { Const, Var, Arrow, Product, Record, Union, Inter, Diff, Neg };
  struct Field {
    std::string label;
    TypeTermPtr type;
    bool optional = false;
  };

  Kind kind = Kind::Const;
  Type constant;                  // Const
  std::string name;               // Var
  std::vector<TypeTermPtr> args;  // Arrow, Product, Union, Inter, Diff: 2; Neg: 1
  std::vector<Field> fields;      // Record
  bool open = false;              // Record
  TypeTermPtr rest;               // Record: type of unlisted labels, overrides `open`

  static TypeTermPtr of(Type t);
  static TypeTermPtr var(std::string n);
  static TypeTermPtr binary(Kind k, TypeTermPtr a, TypeTermPtr b);
  static TypeTermPtr neg(TypeTermPtr a);
  static TypeTermPtr record(std::vector<Field> fs, bool open);
};

using TypeBindings = std::map<std::string, Type>;

/// Solve a group of mutually recursive equations `X = body`. Variables not
/// defined by the group are looked up in `outer`.
/// Throws ContractivityViolation when a cycle avoids every constructor, and
/// std::invalid_argument for unbound variables.
std::vector<Type> mk_recursive(const std::vector<std::pair<std::string, TypeTermPtr>>& equations,
                               const TypeBindings& outer = {});

/// Build a term without recursion.
Type resolve(const TypeTermPtr& term, const TypeBindings& names = {});

}  // namespace occt

template <>
struct std::hash<occt::Type> {
  std::size_t operator()(occt::Type t) const noexcept { return std::hash<std::uint32_t>{}(t.id); }
};
