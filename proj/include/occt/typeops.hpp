#pragma once

// Type operators used by the typing rules: domain, application result,
// the worra refinement operator, projections and record operators.
//
// All results are interned with empty summands dropped.

#include <stdexcept>
#include <string>

#include "occt/types.hpp"

namespace occt {

class TypeOpError : public std::runtime_error {
 public:
  enum class Kind { NotAFunction, ArgumentOutsideDomain, NotAProduct, NotARecord, MissingField, TooManyArrows };
  TypeOpError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

/// Largest number of positive arrows in one summand before subset
/// enumeration gives up.
inline constexpr std::size_t kMaxArrowsPerSummand = 16;

Type arrow_top();   // 0 -> 1
Type product_top(); // (1, 1)
Type record_top();  // {..}

Type dom(Type t);
/// Result type of applying a function of type `t` to an argument of type
/// `s`. An empty `s` yields the empty type.
Type apply(Type t, Type s);
/// The largest part of `dom t` on which applying `t` may return into `s`.
Type worra(Type t, Type s);

Type proj1(Type t);
Type proj2(Type t);

Type rec_proj(const std::string& label, Type t);
/// Left-biased record concatenation: a field of `t2` overrides the one of
/// `t1` unless it may be undefined.
Type rec_merge(Type t1, Type t2);
Type rec_del(Type t, const std::string& label);

}  // namespace occt
