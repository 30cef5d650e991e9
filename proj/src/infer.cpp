#include "occt/infer.hpp"

#include "occt/parser.hpp"
#include "occt/subtype.hpp"
#include "occt/typeops.hpp"

namespace occt {

namespace {

std::optional<Type> try_body(Checker& c, const TypeEnv& env, const ExprPtr& lam, Type u) {
  Checker::PsiScope scope(c, nullptr);
  try {
    return c.type_of(env.enter_binder(lam->name, u), lam->kid(0));
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

}  // namespace

Type simplify_arrows(const std::vector<std::pair<Type, Type>>& arrows) {
  std::vector<Type> as;
  for (const auto& [u, w] : arrows) as.push_back(mk_arrow(u, w));
  for (std::size_t i = 0; i < as.size() && as.size() > 1;) {
    std::vector<Type> rest;
    for (std::size_t j = 0; j < as.size(); ++j)
      if (j != i) rest.push_back(as[j]);
    if (subtype(mk_inter(rest), as[i]))
      as.erase(as.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  if (as.empty()) return arrow_top();
  return mk_inter(as);
}

Type infer_lambda(Checker& c, const TypeEnv& env, const ExprPtr& lam) {
  const std::string& x = lam->name;
  const ExprPtr& body = lam->kid(0);
  std::vector<std::pair<Type, Type>> pairs;
  PsiMap* outer = c.psi();
  for (const Arrow& a : lam->arrows) {
    PsiMap local;
    Type base;
    {
      Checker::PsiScope scope(c, &local);
      base = c.type_of(env.enter_binder(x, a.dom), body);
    }
    if (a.cod && !subtype(base, *a.cod))
      throw TypeError("Abs", lam->span,
                      "body has type " + pretty_type(base) + ", not a subtype of " + pretty_type(*a.cod));
    if (outer) outer->merge(local, x);

    std::vector<std::pair<Type, Type>> found;
    Type covered = empty();
    for (Type cand : local.at(x)) {
      Type u = mk_inter(cand, a.dom);
      if (is_empty(u)) continue;
      if (auto w = try_body(c, env, lam, u)) {
        found.emplace_back(u, *w);
        covered = mk_union(covered, u);
      }
    }
    if (a.cod) {
      pairs.emplace_back(a.dom, *a.cod);
    } else if (c.config().absinf == AbsInf::Plus) {
      pairs.emplace_back(a.dom, base);
    } else {
      Type residual = mk_diff(a.dom, covered);
      if (!is_empty(residual)) {
        auto w = try_body(c, env, lam, residual);
        pairs.emplace_back(residual, w ? *w : base);
      } else if (found.empty()) {
        pairs.emplace_back(a.dom, base);
      }
    }
    pairs.insert(pairs.end(), found.begin(), found.end());
  }
  return simplify_arrows(pairs);
}

}  // namespace occt
