#include "arbor/engine.hpp"

#include <numeric>

#include "arbor/cycles.hpp"

namespace arbor {

VertexIndex Evaluator::span(int offset, int n) const {
    VertexIndex size = 1;
    for (int i = 1; i <= n; ++i) size *= shape_.factor(offset + i);
    return size;
}

std::shared_ptr<const LevelMap> Evaluator::table(const ExprPtr& e, int offset, int n) {
    if (n < 1 || offset < 0 || offset + n > shape_.depth())
        throw depth_error("level outside the shape depth");
    switch (e->kind) {
        case ElementExpr::Kind::Identity: {
            auto map = std::make_shared<LevelMap>(span(offset, n));
            std::iota(map->begin(), map->end(), VertexIndex{0});
            return map;
        }
        case ElementExpr::Kind::RootPerm: {
            std::uint32_t d = shape_.factor(offset + 1);
            if (e->perm.size() != d)
                throw shape_error("level-1 permutation has the wrong alphabet size");
            VertexIndex suffix = span(offset + 1, n - 1);
            auto map = std::make_shared<LevelMap>(span(offset, n));
            for (std::uint32_t i = 0; i < d; ++i) {
                VertexIndex from = VertexIndex{i} * suffix;
                VertexIndex to = VertexIndex{e->perm[i]} * suffix;
                for (VertexIndex x = 0; x < suffix; ++x) (*map)[from + x] = to + x;
            }
            return map;
        }
        case ElementExpr::Kind::Tuple: {
            std::uint32_t d = shape_.factor(offset + 1);
            if (e->args.size() != d)
                throw shape_error("tuple arity does not match the alphabet size");
            auto map = std::make_shared<LevelMap>(span(offset, n));
            if (n == 1) {
                std::iota(map->begin(), map->end(), VertexIndex{0});
                return map;
            }
            VertexIndex suffix = span(offset + 1, n - 1);
            for (std::uint32_t i = 0; i < d; ++i) {
                std::shared_ptr<const LevelMap> child = table(e->args[i], offset + 1, n - 1);
                VertexIndex base = VertexIndex{i} * suffix;
                for (VertexIndex x = 0; x < suffix; ++x) (*map)[base + x] = base + (*child)[x];
            }
            return map;
        }
        case ElementExpr::Kind::Compose: {
            if (e->args.empty()) return table(ex_identity(), offset, n);
            std::shared_ptr<const LevelMap> acc = table(e->args.back(), offset, n);
            for (std::size_t i = e->args.size() - 1; i-- > 0;) {
                std::shared_ptr<const LevelMap> left = table(e->args[i], offset, n);
                auto next = std::make_shared<LevelMap>(acc->size());
                for (VertexIndex x = 0; x < acc->size(); ++x) (*next)[x] = (*left)[(*acc)[x]];
                acc = std::move(next);
            }
            return acc;
        }
        case ElementExpr::Kind::Inverse: {
            std::shared_ptr<const LevelMap> inner = table(e->args.front(), offset, n);
            auto map = std::make_shared<LevelMap>(inner->size());
            for (VertexIndex x = 0; x < inner->size(); ++x) (*map)[(*inner)[x]] = x;
            return map;
        }
        case ElementExpr::Kind::Ref: {
            auto key = std::make_tuple(e->name, offset, n);
            auto hit = memo_.find(key);
            if (hit != memo_.end()) return hit->second;
            if (!in_progress_.insert(key).second)
                throw recursion_error("definition of '" + e->name +
                                      "' is not level-contracting");
            std::shared_ptr<const LevelMap> map;
            try {
                map = table(env_->lookup(e->name), offset, n);
            } catch (...) {
                in_progress_.erase(key);
                throw;
            }
            in_progress_.erase(key);
            memo_[key] = map;
            return map;
        }
    }
    throw error("unreachable expression kind");
}

TruncatedAutomorphism Evaluator::truncate(const ExprPtr& e, int depth) {
    if (depth < 1 || depth > shape_.depth()) throw depth_error("bad truncation depth");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) levels.push_back(*table(e, 0, n));
    return TruncatedAutomorphism(shape_.truncated(depth), std::move(levels));
}

ExprPtr define_odometer(RecursionEnv& env, const std::string& name, const TreeShape& shape) {
    if (!shape.constant_arity())
        throw shape_error("the recursive successor needs constant branching");
    std::uint32_t d = shape.factor(1);
    std::vector<std::uint32_t> step(d);
    for (std::uint32_t i = 0; i < d; ++i) step[i] = (i + 1) % d;
    std::vector<ExprPtr> children(d, ex_identity());
    children[0] = ex_ref(name);
    env.define(name, ex_compose({ex_tuple(std::move(children)), ex_root_perm(std::move(step))}));
    return ex_ref(name);
}

TruncatedAutomorphism odometer_truncation(const TreeShape& shape, int depth) {
    if (depth < 1 || depth > shape.depth()) throw depth_error("bad truncation depth");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) {
        LevelMap map(shape.level_size(n));
        for (VertexIndex v = 0; v < map.size(); ++v) {
            std::vector<std::uint32_t> word = shape.word_of(v, n);
            int i = 0;
            while (i < n && word[static_cast<std::size_t>(i)] + 1 ==
                                shape.factor(i + 1))
                ++i;
            if (i == n) {
                std::fill(word.begin(), word.end(), 0u);
            } else {
                word[static_cast<std::size_t>(i)] += 1;
                std::fill(word.begin(), word.begin() + i, 0u);
            }
            map[v] = shape.index_of(word);
        }
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape.truncated(depth), std::move(levels));
}

TruncatedAutomorphism profile_element(const GrowthProfile& rules, int depth) {
    if (depth < 1) throw depth_error("bad profile depth");
    if (static_cast<int>(rules.size()) < depth)
        throw domain_error("profile shorter than the requested depth");
    TreeShape shape = TreeShape::uniform(2, depth);
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    std::vector<std::vector<VertexIndex>> cycles{{0}};
    for (int n = 1; n <= depth; ++n) {
        LevelMap map = rules[static_cast<std::size_t>(n) - 1] == ProfileStep::Double
                           ? splice_lift(cycles, 2)
                           : copy_lift(cycles, 2);
        cycles = ordered_cycles(map);
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape, std::move(levels));
}

}  // namespace arbor
