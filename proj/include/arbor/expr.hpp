#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "arbor/errors.hpp"

namespace arbor {

/// Symbolic element of the automorphism group, built from the level-1
/// alphabet permutations and per-letter child expressions.  Products follow
/// written group order: Compose([u, w]) applies w to a point first, so the
/// expression u * w matches the usual juxtaposition uw.
struct ElementExpr;
using ExprPtr = std::shared_ptr<const ElementExpr>;

struct ElementExpr {
    enum class Kind { Identity, RootPerm, Tuple, Compose, Inverse, Ref };

    Kind kind = Kind::Identity;
    std::vector<std::uint32_t> perm;  // RootPerm: image list over the level-1 alphabet
    std::vector<ExprPtr> args;        // Tuple children, Compose factors, Inverse operand
    std::string name;                 // Ref
};

ExprPtr ex_identity();
ExprPtr ex_root_perm(std::vector<std::uint32_t> perm);
ExprPtr ex_tuple(std::vector<ExprPtr> children);
ExprPtr ex_compose(std::vector<ExprPtr> factors);
ExprPtr ex_inverse(ExprPtr e);
ExprPtr ex_ref(std::string name);
ExprPtr ex_power(const ExprPtr& e, long exponent);  // expands to Compose/Inverse

std::string to_string(const ExprPtr& e);

/// Named bindings, evaluated lazily level by level.  Definitions may refer to
/// themselves or to later bindings inside Tuple children (the recursion then
/// descends one level per step and terminates); references on a composition
/// spine must resolve to earlier bindings, which is checked at define time.
class RecursionEnv {
  public:
    /// Runs the level-contraction check before accepting the binding.
    void define(const std::string& name, ExprPtr expr);

    bool has(const std::string& name) const { return bindings_.count(name) != 0; }
    const ExprPtr& lookup(const std::string& name) const;
    const std::vector<std::string>& names() const { return order_; }

    /// Confirms every Ref anywhere in the environment resolves; returns the
    /// first dangling name, or the empty string when all are bound.
    std::string first_unbound() const;

  private:
    std::map<std::string, ExprPtr> bindings_;
    std::vector<std::string> order_;
};

/// Wreath normal form at one level: expr == rho . (children), acting as
/// i.x -> rho(i).children[i](x).
struct NormalForm {
    std::vector<std::uint32_t> rho;
    std::vector<ExprPtr> children;
};

/// Rewrites the expression so the whole level-1 permutation sits on the left.
/// arity is the level-1 alphabet size at the expression's position in the
/// tree.  Throws recursion_error if a definition feeds back into itself at
/// the same level.
NormalForm normalize(const RecursionEnv& env, const ExprPtr& e, std::uint32_t arity);

/// Child expression of the normal form at one letter.
ExprPtr section(const RecursionEnv& env, const ExprPtr& e, std::uint32_t letter,
                std::uint32_t arity);

}  // namespace arbor
