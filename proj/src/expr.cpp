#include "arbor/expr.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace arbor {

namespace {

ExprPtr make(ElementExpr e) { return std::make_shared<const ElementExpr>(std::move(e)); }

bool is_identity(const ExprPtr& e) { return e->kind == ElementExpr::Kind::Identity; }

}  // namespace

ExprPtr ex_identity() {
    static const ExprPtr id = make({});
    return id;
}

ExprPtr ex_root_perm(std::vector<std::uint32_t> perm) {
    ElementExpr e;
    e.kind = ElementExpr::Kind::RootPerm;
    e.perm = std::move(perm);
    return make(std::move(e));
}

ExprPtr ex_tuple(std::vector<ExprPtr> children) {
    ElementExpr e;
    e.kind = ElementExpr::Kind::Tuple;
    e.args = std::move(children);
    return make(std::move(e));
}

ExprPtr ex_compose(std::vector<ExprPtr> factors) {
    std::vector<ExprPtr> flat;
    for (ExprPtr& f : factors) {
        if (is_identity(f)) continue;
        if (f->kind == ElementExpr::Kind::Compose)
            flat.insert(flat.end(), f->args.begin(), f->args.end());
        else
            flat.push_back(std::move(f));
    }
    if (flat.empty()) return ex_identity();
    if (flat.size() == 1) return flat.front();
    ElementExpr e;
    e.kind = ElementExpr::Kind::Compose;
    e.args = std::move(flat);
    return make(std::move(e));
}

ExprPtr ex_inverse(ExprPtr inner) {
    if (is_identity(inner)) return inner;
    if (inner->kind == ElementExpr::Kind::Inverse) return inner->args.front();
    ElementExpr e;
    e.kind = ElementExpr::Kind::Inverse;
    e.args.push_back(std::move(inner));
    return make(std::move(e));
}

ExprPtr ex_ref(std::string name) {
    ElementExpr e;
    e.kind = ElementExpr::Kind::Ref;
    e.name = std::move(name);
    return make(std::move(e));
}

ExprPtr ex_power(const ExprPtr& e, long exponent) {
    bool flip = exponent < 0;
    unsigned long mag = flip ? static_cast<unsigned long>(-(exponent + 1)) + 1ul
                             : static_cast<unsigned long>(exponent);
    if (mag > 4096) throw domain_error("power exponent too large to expand");
    ExprPtr base = flip ? ex_inverse(e) : e;
    std::vector<ExprPtr> factors(static_cast<std::size_t>(mag), base);
    return ex_compose(std::move(factors));
}

std::string to_string(const ExprPtr& e) {
    std::ostringstream out;
    switch (e->kind) {
        case ElementExpr::Kind::Identity:
            out << "id";
            break;
        case ElementExpr::Kind::RootPerm: {
            // Cycle notation, so the rendered text reparses to the same map.
            out << "perm(";
            std::vector<bool> seen(e->perm.size(), false);
            bool any = false;
            for (std::size_t i = 0; i < e->perm.size(); ++i) {
                if (seen[i] || e->perm[i] == i) continue;
                any = true;
                out << "(";
                std::size_t j = i;
                bool first = true;
                while (!seen[j]) {
                    seen[j] = true;
                    out << (first ? "" : " ") << j;
                    first = false;
                    j = e->perm[j];
                }
                out << ")";
            }
            if (!any) out << "(0)";
            out << ")";
            break;
        }
        case ElementExpr::Kind::Tuple: {
            out << "(";
            for (std::size_t i = 0; i < e->args.size(); ++i)
                out << (i ? ", " : "") << to_string(e->args[i]);
            out << ")";
            break;
        }
        case ElementExpr::Kind::Compose: {
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out << " * ";
                bool wrap = e->args[i]->kind == ElementExpr::Kind::Compose;
                out << (wrap ? "(" : "") << to_string(e->args[i]) << (wrap ? ")" : "");
            }
            break;
        }
        case ElementExpr::Kind::Inverse: {
            bool wrap = e->args.front()->kind == ElementExpr::Kind::Compose;
            out << (wrap ? "(" : "") << to_string(e->args.front()) << (wrap ? ")" : "") << "^-1";
            break;
        }
        case ElementExpr::Kind::Ref:
            out << e->name;
            break;
    }
    return out.str();
}

namespace {

// Same-level references form a graph along Compose/Inverse spines; evaluation
// terminates exactly when that graph is acyclic from every binding.
void check_spine(const RecursionEnv& env, const ExprPtr& e, std::set<std::string>& visiting) {
    switch (e->kind) {
        case ElementExpr::Kind::Identity:
        case ElementExpr::Kind::RootPerm:
        case ElementExpr::Kind::Tuple:
            return;  // tuples consume one level; their children are off the spine
        case ElementExpr::Kind::Compose:
        case ElementExpr::Kind::Inverse:
            for (const ExprPtr& a : e->args) check_spine(env, a, visiting);
            return;
        case ElementExpr::Kind::Ref: {
            if (visiting.count(e->name))
                throw recursion_error("definition of '" + e->name +
                                      "' is not level-contracting: it reaches itself at the "
                                      "same level (recursion must pass through a tuple child)");
            if (!env.has(e->name))
                throw recursion_error("'" + e->name +
                                      "' is referenced on a composition spine before being "
                                      "defined; define names before composing them");
            visiting.insert(e->name);
            check_spine(env, env.lookup(e->name), visiting);
            visiting.erase(e->name);
            return;
        }
    }
}

void collect_refs(const ExprPtr& e, std::set<std::string>& out) {
    if (e->kind == ElementExpr::Kind::Ref) out.insert(e->name);
    for (const ExprPtr& a : e->args) collect_refs(a, out);
}

}  // namespace

void RecursionEnv::define(const std::string& name, ExprPtr expr) {
    if (bindings_.count(name)) throw domain_error("'" + name + "' is already defined");
    bindings_[name] = std::move(expr);
    order_.push_back(name);
    std::set<std::string> visiting{name};
    try {
        check_spine(*this, bindings_[name], visiting);
    } catch (...) {
        bindings_.erase(name);
        order_.pop_back();
        throw;
    }
}

const ExprPtr& RecursionEnv::lookup(const std::string& name) const {
    auto it = bindings_.find(name);
    if (it == bindings_.end()) throw domain_error("'" + name + "' is not defined");
    return it->second;
}

std::string RecursionEnv::first_unbound() const {
    std::set<std::string> refs;
    for (const auto& [name, expr] : bindings_) collect_refs(expr, refs);
    for (const std::string& r : refs)
        if (!bindings_.count(r)) return r;
    return "";
}

namespace {

std::vector<std::uint32_t> identity_perm(std::uint32_t arity) {
    std::vector<std::uint32_t> p(arity);
    std::iota(p.begin(), p.end(), 0u);
    return p;
}

struct Normalizer {
    const RecursionEnv& env;
    std::uint32_t arity;
    std::set<std::string> visiting;

    NormalForm run(const ExprPtr& e) {
        switch (e->kind) {
            case ElementExpr::Kind::Identity:
                return {identity_perm(arity), std::vector<ExprPtr>(arity, ex_identity())};
            case ElementExpr::Kind::RootPerm: {
                if (e->perm.size() != arity)
                    throw shape_error("level-1 permutation has the wrong alphabet size");
                return {e->perm, std::vector<ExprPtr>(arity, ex_identity())};
            }
            case ElementExpr::Kind::Tuple: {
                if (e->args.size() != arity)
                    throw shape_error("tuple arity does not match the alphabet size");
                return {identity_perm(arity), e->args};
            }
            case ElementExpr::Kind::Inverse: {
                NormalForm nf = run(e->args.front());
                NormalForm out;
                out.rho.resize(arity);
                out.children.resize(arity);
                for (std::uint32_t i = 0; i < arity; ++i) out.rho[nf.rho[i]] = i;
                for (std::uint32_t i = 0; i < arity; ++i)
                    out.children[i] = ex_inverse(nf.children[out.rho[i]]);
                return out;
            }
            case ElementExpr::Kind::Compose: {
                NormalForm acc{identity_perm(arity), std::vector<ExprPtr>(arity, ex_identity())};
                for (const ExprPtr& f : e->args) {
                    NormalForm nfb = run(f);
                    NormalForm next;
                    next.rho.resize(arity);
                    next.children.resize(arity);
                    for (std::uint32_t i = 0; i < arity; ++i) {
                        next.rho[i] = acc.rho[nfb.rho[i]];
                        next.children[i] =
                            ex_compose({acc.children[nfb.rho[i]], nfb.children[i]});
                    }
                    acc = std::move(next);
                }
                return acc;
            }
            case ElementExpr::Kind::Ref: {
                if (visiting.count(e->name))
                    throw recursion_error("definition of '" + e->name +
                                          "' is not level-contracting");
                visiting.insert(e->name);
                NormalForm nf = run(env.lookup(e->name));
                visiting.erase(e->name);
                return nf;
            }
        }
        throw error("unreachable expression kind");
    }
};

}  // namespace

NormalForm normalize(const RecursionEnv& env, const ExprPtr& e, std::uint32_t arity) {
    Normalizer n{env, arity, {}};
    return n.run(e);
}

ExprPtr section(const RecursionEnv& env, const ExprPtr& e, std::uint32_t letter,
                std::uint32_t arity) {
    if (letter >= arity) throw shape_error("letter outside the alphabet");
    return normalize(env, e, arity).children[letter];
}

}  // namespace arbor
