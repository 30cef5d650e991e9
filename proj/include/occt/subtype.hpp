#pragma once

// Emptiness, subtyping and equivalence of set-theoretic types.
//
// A type is empty when every component of its descriptor is: the basic sets,
// the undef flag, and every clause of the arrow, product and record DNFs.
// Clause emptiness follows the usual semantic-subtyping decomposition.
// Recursive types are handled coinductively: a node whose emptiness is being
// decided is assumed empty when it is met again, and answers that relied on
// an assumption later refuted are discarded.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "occt/types.hpp"

namespace occt {

bool is_empty(Type t);
bool subtype(Type s, Type t);
bool equiv(Type s, Type t);

/// Forget every memoized emptiness answer.
void clear_memo();

enum class Kind { Basic, Undef, Arrow, Product, Record };

/// One summand of the disjunctive normal form of a type. For basic summands
/// `basic` holds the basic-set part; for constructor kinds `pos`/`neg` are
/// the atoms of the clause.
struct Summand {
  Kind kind = Kind::Basic;
  Type basic;
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
};

/// The summands of `t`, split per kind, with empty summands dropped.
std::vector<Summand> dnf(Type t);

/// The type denoted by a single clause of the given constructor kind.
Type clause_type(Kind kind, const Clause& c);
bool clause_empty(Kind kind, const Clause& c);

/// The nonempty clauses of the arrow part of `t`.
std::vector<Clause> arrow_clauses(Type t);
std::vector<Clause> product_clauses(Type t);
std::vector<Clause> record_clauses(Type t);

/// `t` with every empty clause removed. Equivalent to `t`.
Type simplify(Type t);

/// A positive record row: the given fields plus `rest` for every other label.
struct RecordRowView {
  std::map<std::string, Type> fields;
  Type rest;
};

/// Split a record clause into nonempty positive rows whose union is the
/// clause. Rows may overlap. Every label in `labels` and every label mentioned by
/// the clause appears explicitly in each row; additional placeholder labels
/// (see `is_placeholder_label`) stand for "some label not named".
std::vector<RecordRowView> record_rows(const Clause& c, const std::set<std::string>& labels = {});

bool is_placeholder_label(const std::string& label);

}  // namespace occt
