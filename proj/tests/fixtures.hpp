#pragma once

// Shared element definitions for the test suite.

#include "arbor/engine.hpp"
#include "arbor/expr.hpp"
#include "arbor/shape.hpp"

namespace fixtures {

/// a = (a, id) * eta, b = (a, b), c = (b, c) over the binary alphabet.
inline arbor::RecursionEnv binary_env() {
    arbor::RecursionEnv env;
    env.define("a", arbor::ex_compose({arbor::ex_tuple({arbor::ex_ref("a"), arbor::ex_identity()}),
                                       arbor::ex_root_perm({1, 0})}));
    env.define("b", arbor::ex_tuple({arbor::ex_ref("a"), arbor::ex_ref("b")}));
    env.define("c", arbor::ex_tuple({arbor::ex_ref("b"), arbor::ex_ref("c")}));
    return env;
}

inline arbor::TruncatedAutomorphism binary_element(const char* name, int depth) {
    arbor::RecursionEnv env = binary_env();
    arbor::Evaluator ev(env, arbor::TreeShape::uniform(2, depth));
    return ev.truncate(arbor::ex_ref(name), depth);
}

inline arbor::GrowthProfile double_hold(int depth) {
    arbor::GrowthProfile rules;
    for (int i = 0; i < depth; ++i)
        rules.push_back(i % 2 == 0 ? arbor::ProfileStep::Double : arbor::ProfileStep::Hold);
    return rules;
}

}  // namespace fixtures
