#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "arbor/automorphism.hpp"
#include "arbor/expr.hpp"
#include "arbor/shape.hpp"

namespace arbor {

/// Evaluates expressions over one shape, one level at a time.  Tables for
/// named bindings are memoized per (name, subtree offset, level) so recursive
/// definitions cost each level once.  Reuse one evaluator per environment.
class Evaluator {
  public:
    Evaluator(const RecursionEnv& env, TreeShape shape)
        : env_(&env), shape_(std::move(shape)) {}

    const TreeShape& shape() const { return shape_; }

    /// Permutation induced on level offset+n by an expression rooted at a
    /// depth-offset vertex.
    std::shared_ptr<const LevelMap> table(const ExprPtr& e, int offset, int n);

    /// Truncation of the expression at the root, depth N.
    TruncatedAutomorphism truncate(const ExprPtr& e, int depth);

  private:
    VertexIndex span(int offset, int n) const;

    const RecursionEnv* env_;
    TreeShape shape_;
    std::map<std::tuple<std::string, int, int>, std::shared_ptr<const LevelMap>> memo_;
    std::set<std::tuple<std::string, int, int>> in_progress_;
};

/// Adds the successor element (a, 1, ..., 1) . (0 1 ... d-1) under the given
/// name; the recursion carries 1 past each maximal letter.  Requires constant
/// branching so the self-reference is well typed.
ExprPtr define_odometer(RecursionEnv& env, const std::string& name, const TreeShape& shape);

/// Successor truncation built directly from the carry rule, for any shape:
/// the first letter is least significant and letters increment
/// lexicographically with carry.
TruncatedAutomorphism odometer_truncation(const TreeShape& shape, int depth);

/// How cycle lengths move from one level to the next in a constructed
/// element: Double splices each cycle into one of twice the length, Hold
/// copies it onto both child letters.
enum class ProfileStep { Double, Hold };
using GrowthProfile = std::vector<ProfileStep>;

/// Binary-tree element realizing the profile; rules[n-1] governs the lift
/// from level n-1 to level n.  Deterministic construction.
TruncatedAutomorphism profile_element(const GrowthProfile& rules, int depth);

}  // namespace arbor
