#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "arbor/affine.hpp"
#include "arbor/cycles.hpp"
#include "arbor/engine.hpp"
#include "arbor/errors.hpp"
#include "arbor/monodromy.hpp"
#include "arbor/parser.hpp"
#include "arbor/random.hpp"
#include "arbor/serialize.hpp"

namespace {

using namespace arbor;

struct CommonOpts {
    std::uint32_t d = 2;
    int depth = 0;  // 0 picks the default for the arity
    std::string format = "table";
    std::uint64_t seed = 0;
    std::string defs_path;
};

struct ElementOpts {
    std::string expr;
    std::string profile;
    std::string input_path;
};

int resolved_depth(const CommonOpts& o) { return o.depth ? o.depth : (o.d == 2 ? 12 : 8); }

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-d,--arity", o.d, "branching factor")->check(CLI::Range(2u, 4096u));
    cmd->add_option("-N,--depth", o.depth, "truncation depth and budget")
        ->check(CLI::Range(1, 40));
    cmd->add_option("-f,--format", o.format, "table, csv, or text")
        ->check(CLI::IsMember({"table", "csv", "text"}));
    cmd->add_option("--seed", o.seed, "seed for randomized subcommands");
    cmd->add_option("--defs", o.defs_path, "definitions file");
}

void add_element(CLI::App* cmd, ElementOpts& e) {
    auto* a = cmd->add_option("--expr", e.expr, "element expression over the definitions");
    auto* b = cmd->add_option("--profile", e.profile,
                              "binary cycle-growth pattern of d/h letters, repeated to depth");
    auto* c = cmd->add_option("--in", e.input_path, "serialized automorphism document");
    a->excludes(b)->excludes(c);
    b->excludes(c);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RecursionEnv build_env(const CommonOpts& o) {
    RecursionEnv env = parse_definitions(o.defs_path.empty() ? "" : slurp(o.defs_path), o.d);
    if (!env.has("odometer"))
        define_odometer(env, "odometer", TreeShape::uniform(o.d, resolved_depth(o)));
    std::string missing = env.first_unbound();
    if (!missing.empty())
        throw domain_error("name '" + missing + "' is referenced but never defined");
    return env;
}

TruncatedAutomorphism eval_expr(const CommonOpts& o, const std::string& text) {
    RecursionEnv env = build_env(o);
    Evaluator eval(env, TreeShape::uniform(o.d, resolved_depth(o)));
    return eval.truncate(parse_expression(text, o.d), resolved_depth(o));
}

TruncatedAutomorphism load_element(const CommonOpts& o, const ElementOpts& e) {
    int depth = resolved_depth(o);
    if (!e.input_path.empty()) {
        std::ifstream in(e.input_path);
        if (!in) throw domain_error("cannot open '" + e.input_path + "'");
        return read_automorphism(in);
    }
    if (!e.profile.empty()) {
        if (o.d != 2) throw domain_error("profiles are binary only");
        GrowthProfile rules;
        for (int n = 0; n < depth; ++n) {
            char c = e.profile[static_cast<std::size_t>(n) % e.profile.size()];
            if (c == 'd')
                rules.push_back(ProfileStep::Double);
            else if (c == 'h')
                rules.push_back(ProfileStep::Hold);
            else
                throw domain_error("profile letters must be 'd' or 'h'");
        }
        return profile_element(rules, depth);
    }
    if (e.expr.empty()) throw domain_error("need one of --expr, --profile, --in");
    return eval_expr(o, e.expr);
}

void emit(const CommonOpts& o, const TableDoc& doc) {
    if (o.format == "csv") {
        write_csv(std::cout, doc);
    } else if (o.format == "text") {
        for (const auto& row : doc.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) std::cout << ' ';
                std::cout << (i < doc.header.size() ? doc.header[i] : "field") << '=' << row[i];
            }
            std::cout << '\n';
        }
    } else {
        write_table(std::cout, doc);
    }
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

int workers() {
    const char* raw = std::getenv("ARBOR_WORKERS");
    if (!raw) return 1;
    int n = std::atoi(raw);
    if (n < 1) throw domain_error("ARBOR_WORKERS must be a positive integer");
    return n;
}

mpz_class big(const std::string& text) {
    try {
        return mpz_class(text);
    } catch (const std::invalid_argument&) {
        throw domain_error("expected an integer, got '" + text + "'");
    }
}

std::vector<std::uint32_t> parse_letters(const std::string& text, std::uint32_t arity) {
    std::vector<std::uint32_t> out;
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::istringstream in(cleaned);
    std::uint64_t x = 0;
    while (in >> x) {
        if (x >= arity) throw domain_error("letter out of range in '" + text + "'");
        out.push_back(static_cast<std::uint32_t>(x));
    }
    if (!in.eof()) throw domain_error("expected letters in '" + text + "'");
    return out;
}

std::string case_name(NormalizerCase c) {
    switch (c) {
        case NormalizerCase::Dihedral: return "dihedral";
        case NormalizerCase::Interior: return "interior";
        case NormalizerCase::FirstColumn: return "first-column";
        case NormalizerCase::Corner: return "corner";
    }
    return "?";
}

/// Definitions text for the two-generator family, in the same grammar the
/// parser reads back.
std::string img_definitions(const ImgPresentation& pres, int words) {
    NormalizerCase c = normalizer_case(pres);
    std::ostringstream os;
    os << "u1 = eta\n";
    for (int i = 2; i <= pres.r; ++i) {
        if (i == pres.s + 1)
            os << "u" << i << " = (u" << pres.s << ", u" << pres.r << ")\n";
        else
            os << "u" << i << " = (u" << i - 1 << ", id)\n";
    }
    os << "a0 =";
    for (int i = 1; i <= pres.r; ++i) os << (i > 1 ? " * u" : " u") << i;
    os << "\n";
    if (c == NormalizerCase::Dihedral || words < 1) return os.str();
    if (c == NormalizerCase::Corner) os << "w0 = u3 * (w0, w0)\n";
    for (int i = 1; i <= words; ++i) {
        if (i > 1)
            os << "w" << i << " = (w" << i - 1 << ", w" << i - 1 << ")\n";
        else if (c == NormalizerCase::Interior)
            os << "w1 = (u" << pres.s << ", u" << pres.s << ")\n";
        else
            os << "w1 = (id, (u" << pres.s << " * u" << pres.r << ")^2)\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::string echo;
    for (int i = 0; i < argc; ++i) {
        if (i) echo += ' ';
        echo += argv[i];
    }

    CLI::App app{"workbench for automorphisms of rooted trees at finite depth"};
    app.require_subcommand(1);

    CommonOpts common;
    ElementOpts element;

    auto* eval_cmd = app.add_subcommand("eval", "truncate an element and write its document");
    add_common(eval_cmd, common);
    add_element(eval_cmd, element);

    auto* cycles_cmd = app.add_subcommand("cycles", "cycle decomposition of one level");
    add_common(cycles_cmd, common);
    add_element(cycles_cmd, element);
    int cycles_level = 0;
    bool cycles_stable = false;
    cycles_cmd->add_option("-n,--level", cycles_level, "level to decompose (default: depth)");
    cycles_cmd->add_flag("--stable", cycles_stable, "add stability through the depth budget");

    auto* settled_cmd = app.add_subcommand("settled", "per-level stable-vertex statistics");
    add_common(settled_cmd, common);
    add_element(settled_cmd, element);
    int settled_max = 0;
    settled_cmd->add_option("-n,--max-level", settled_max,
                            "largest level to report (default: depth - 1)");

    auto* stabilize_cmd =
        app.add_subcommand("stabilize", "splice all cycles below the agreement level");
    add_common(stabilize_cmd, common);
    add_element(stabilize_cmd, element);
    int stabilize_level = 0;
    stabilize_cmd->add_option("-n,--level", stabilize_level, "levels kept exactly (default 0)");

    auto* minimal_cmd = app.add_subcommand("minimal", "per-level transitivity");
    add_common(minimal_cmd, common);
    add_element(minimal_cmd, element);

    auto* conj_cmd = app.add_subcommand("conjugator", "element g with g u g^-1 = w");
    add_common(conj_cmd, common);
    std::string conj_left, conj_right;
    conj_cmd->add_option("--left", conj_left, "expression for u")->required();
    conj_cmd->add_option("--right", conj_right, "expression for w")->required();

    auto* affine_cmd = app.add_subcommand("affine", "the model j -> m + k j mod d^n");
    add_common(affine_cmd, common);
    std::string affine_m = "0", affine_k = "1", affine_apply_j, affine_vertex;
    unsigned long affine_power_p = 0;
    int affine_level = 0;
    bool affine_realize = false;
    affine_cmd->add_option("-m,--translation", affine_m, "translation residue")->required();
    affine_cmd->add_option("-k,--multiplier", affine_k, "multiplier residue")->required();
    affine_cmd->add_option("-n,--level", affine_level, "working level (default: depth)");
    auto* opt_apply = affine_cmd->add_option("--apply", affine_apply_j, "image of a residue");
    auto* opt_power =
        affine_cmd->add_option("--power", affine_power_p, "compose the element with itself");
    auto* opt_predict = affine_cmd->add_option("--predict", affine_vertex,
                                               "forecast the cycle through a residue");
    auto* opt_realize = affine_cmd->add_flag("--realize", affine_realize,
                                             "write the tree realization over the odometer");
    opt_apply->excludes(opt_power)->excludes(opt_predict)->excludes(opt_realize);
    opt_power->excludes(opt_predict)->excludes(opt_realize);
    opt_predict->excludes(opt_realize);

    auto* val_cmd = app.add_subcommand("valuation", "d-adic valuation of 1 + k + ... + k^(n-1)");
    add_common(val_cmd, common);
    std::string val_k;
    unsigned long val_from = 1, val_to = 0, val_samples = 0, val_max = 10000;
    val_cmd->add_option("-k,--multiplier", val_k, "multiplier")->required();
    val_cmd->add_option("--from", val_from, "first exponent");
    val_cmd->add_option("--to", val_to, "last exponent (default: from + 99)");
    val_cmd->add_option("--samples", val_samples, "draw exponents at random instead");
    val_cmd->add_option("--max", val_max, "largest sampled exponent");

    auto* theta_cmd = app.add_subcommand("theta", "parity invariants of odd multipliers");
    add_common(theta_cmd, common);
    std::vector<std::string> theta_ks;
    theta_cmd->add_option("-k,--multiplier", theta_ks, "multipliers")->required();

    auto* img_cmd = app.add_subcommand("img", "two-generator families on the binary tree");
    add_common(img_cmd, common);
    int img_r = 2, img_s = 1, img_words = -1;
    bool img_orders = false;
    img_cmd->add_option("-r", img_r, "orbit length")->required();
    img_cmd->add_option("-s", img_s, "loop index")->required();
    img_cmd->add_option("--words", img_words, "normalizer words to define");
    img_cmd->add_flag("--orders", img_orders, "print level group orders instead");

    auto* weyl_cmd = app.add_subcommand("weyl", "membership of affine elements in the closure");
    add_common(weyl_cmd, common);
    int weyl_r = 4, weyl_s = 2;
    std::vector<std::uint64_t> weyl_ms, weyl_ks;
    weyl_cmd->add_option("-r", weyl_r, "orbit length");
    weyl_cmd->add_option("-s", weyl_s, "loop index");
    weyl_cmd->add_option("-m,--translation", weyl_ms, "translations (default 1..16)");
    weyl_cmd->add_option("-k,--multiplier", weyl_ks, "multipliers")->required();

    auto* dihedral_cmd = app.add_subcommand("dihedral-audit", "exhaustive r=2, s=1 checks");
    add_common(dihedral_cmd, common);
    int dihedral_max = 10;
    dihedral_cmd->add_option("-n,--max-level", dihedral_max, "deepest audited level")
        ->check(CLI::Range(1, 14));

    auto* sample_cmd = app.add_subcommand("sample", "seeded random elements");
    add_common(sample_cmd, common);
    unsigned long sample_count = 1;
    std::vector<std::string> sample_gens;
    sample_cmd->add_option("--count", sample_count, "number of documents");
    sample_cmd->add_option("--gen", sample_gens,
                           "local generator image list, e.g. 1,0; draws from its closure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto start = std::chrono::steady_clock::now();
    std::string schema = "none/1";

    try {
        if (app.got_subcommand(eval_cmd)) {
            schema = "automorphism/1";
            write_automorphism(std::cout, load_element(common, element));
        } else if (app.got_subcommand(cycles_cmd)) {
            schema = "cycles/1";
            TruncatedAutomorphism u = load_element(common, element);
            int n = cycles_level ? cycles_level : u.depth();
            CycleReport report = cycle_decomposition(u, n);
            TableDoc doc;
            doc.header = {"level", "length", "representative"};
            if (cycles_stable) doc.header.push_back("stable_to");
            for (const auto& c : report.cycles) {
                std::vector<std::string> row = {std::to_string(n), std::to_string(c.length),
                                                format_vertex(u.shape(), c.representative, n)};
                if (cycles_stable) {
                    StabilityStatus st = stable_up_to(u, n, c.representative, u.depth());
                    row.push_back(st.stable ? std::to_string(st.budget)
                                            : "broken@" + std::to_string(st.broken_at));
                }
                doc.rows.push_back(std::move(row));
            }
            emit(common, doc);
        } else if (app.got_subcommand(settled_cmd)) {
            schema = "settled/1";
            TruncatedAutomorphism u = load_element(common, element);
            int max_level = settled_max ? settled_max : u.depth() - 1;
            SettledStats stats = settled_stats(u, max_level, u.depth());
            TableDoc doc;
            doc.header = {"level", "stable", "size", "fraction"};
            for (const auto& row : stats.rows)
                doc.rows.push_back({std::to_string(row.level), std::to_string(row.stable_vertices),
                                    std::to_string(row.level_size), row.fraction.to_string()});
            emit(common, doc);
        } else if (app.got_subcommand(stabilize_cmd)) {
            schema = "automorphism/1";
            TruncatedAutomorphism u = load_element(common, element);
            TruncatedAutomorphism s = strongly_settle(u, stabilize_level);
            write_automorphism(std::cout, s);
            std::cerr << "# distance: " << distance(u, s).to_string() << "\n";
        } else if (app.got_subcommand(minimal_cmd)) {
            schema = "minimal/1";
            TruncatedAutomorphism u = load_element(common, element);
            TableDoc doc;
            doc.header = {"level", "transitive"};
            for (int n = 1; n <= u.depth(); ++n)
                doc.rows.push_back(
                    {std::to_string(n), fmt_bool(cycle_decomposition(u, n).cycles.size() == 1)});
            emit(common, doc);
        } else if (app.got_subcommand(conj_cmd)) {
            schema = "automorphism/1";
            RecursionEnv env = build_env(common);
            Evaluator eval(env, TreeShape::uniform(common.d, resolved_depth(common)));
            TruncatedAutomorphism u =
                eval.truncate(parse_expression(conj_left, common.d), resolved_depth(common));
            TruncatedAutomorphism w =
                eval.truncate(parse_expression(conj_right, common.d), resolved_depth(common));
            write_automorphism(std::cout, level_conjugator(u, w));
        } else if (app.got_subcommand(affine_cmd)) {
            schema = "affine/1";
            int depth = resolved_depth(common);
            AffineElement a(common.d, depth, big(affine_m), big(affine_k));
            int n = affine_level ? affine_level : depth;
            if (*opt_apply) {
                TableDoc doc;
                doc.header = {"level", "residue", "image"};
                doc.rows.push_back({std::to_string(n), affine_apply_j,
                                    affine_apply(a, big(affine_apply_j), n).get_str()});
                emit(common, doc);
            } else if (*opt_power) {
                write_affine(std::cout, affine_power(a, affine_power_p));
            } else if (*opt_predict) {
                PredictedCycle p = predicted_cycle_length(a, big(affine_vertex), n);
                TableDoc doc;
                doc.header = {"level", "residue", "length", "fixed"};
                doc.rows.push_back({std::to_string(n), affine_vertex, std::to_string(p.length),
                                    fmt_bool(p.fixed_point)});
                emit(common, doc);
            } else if (affine_realize) {
                schema = "automorphism/1";
                RecursionEnv env = build_env(common);
                Evaluator eval(env, TreeShape::uniform(common.d, depth));
                BaseOdometerFrame frame(eval.truncate(ex_ref("odometer"), depth));
                write_automorphism(std::cout, realize_affine(frame, a, depth));
            } else {
                write_affine(std::cout, a);
            }
        } else if (app.got_subcommand(val_cmd)) {
            schema = "valuation/1";
            mpz_class k = big(val_k);
            std::vector<unsigned long> ns;
            if (val_samples) {
                if (val_max < 1) throw domain_error("--max must be positive");
                std::vector<bool> taken(val_max + 1, false);
                CounterRng rng(common.seed, 0, 0);
                for (unsigned long i = 0; i < val_samples; ++i)
                    taken[rng.below(val_max) + 1] = true;
                for (unsigned long n = 1; n <= val_max; ++n)
                    if (taken[n]) ns.push_back(n);
            } else {
                unsigned long last = val_to ? val_to : val_from + 99;
                if (last < val_from) throw domain_error("--to must be at least --from");
                for (unsigned long n = val_from; n <= last; ++n) ns.push_back(n);
            }
            std::vector<ValuationRow> rows(ns.size());
            int pool = workers();
            auto work = [&](std::size_t i0) {
                for (std::size_t i = i0; i < ns.size(); i += static_cast<std::size_t>(pool))
                    rows[i] = geometric_valuation(common.d, k, ns[i]);
            };
            if (pool == 1) {
                work(0);
            } else {
                std::vector<std::thread> threads;
                for (int t = 0; t < pool; ++t) threads.emplace_back(work, t);
                for (auto& t : threads) t.join();
            }
            TableDoc doc;
            doc.header = {"d", "k", "n", "v_n", "v_sum", "equal"};
            for (const auto& row : rows)
                doc.rows.push_back({std::to_string(common.d), val_k, std::to_string(row.n),
                                    std::to_string(row.v_n), std::to_string(row.v_sum),
                                    fmt_bool(row.v_n == row.v_sum)});
            emit(common, doc);
        } else if (app.got_subcommand(theta_cmd)) {
            schema = "theta/1";
            TableDoc doc;
            doc.header = {"k", "theta1", "theta2"};
            for (const auto& text : theta_ks) {
                ThetaSignature t = theta_signature(big(text));
                doc.rows.push_back({text, std::to_string(t.theta1), std::to_string(t.theta2)});
            }
            emit(common, doc);
        } else if (app.got_subcommand(img_cmd)) {
            ImgPresentation pres{img_r, img_s};
            if (img_orders) {
                schema = "img-orders/1";
                int depth = resolved_depth(common);
                RecursionEnv env;
                std::vector<ExprPtr> refs = img_generators(env, pres);
                Evaluator eval(env, TreeShape::uniform(2, depth));
                std::vector<TruncatedAutomorphism> gens;
                for (const auto& r : refs) gens.push_back(eval.truncate(r, depth));
                TableDoc doc;
                doc.header = {"level", "order"};
                for (int n = 1; n <= depth; ++n)
                    doc.rows.push_back(
                        {std::to_string(n), level_group(gens, n).order().get_str()});
                emit(common, doc);
            } else {
                schema = "definitions/1";
                int words = img_words >= 0
                                ? img_words
                                : (normalizer_case(pres) == NormalizerCase::Dihedral
                                       ? 0
                                       : normalizer_support(pres, resolved_depth(common)));
                std::cout << img_definitions(pres, words);
            }
        } else if (app.got_subcommand(weyl_cmd)) {
            schema = "weyl/1";
            ImgPresentation pres{weyl_r, weyl_s};
            if (weyl_ms.empty())
                for (std::uint64_t m = 1; m <= 16; ++m) weyl_ms.push_back(m);
            int depth = resolved_depth(common);
            std::vector<WeylRow> rows = weyl_index_experiment(pres, weyl_ms, weyl_ks, depth);
            TableDoc doc;
            doc.header = {"case", "r",      "s",      "m",      "k",
                          "n",    "theta1", "theta2", "member", "firstNonMemberLevel"};
            for (const auto& row : rows)
                doc.rows.push_back({case_name(normalizer_case(pres)), std::to_string(row.r),
                                    std::to_string(row.s), std::to_string(row.m),
                                    std::to_string(row.k), std::to_string(depth),
                                    std::to_string(row.theta.theta1),
                                    std::to_string(row.theta.theta2),
                                    fmt_bool(row.member_all_levels),
                                    std::to_string(row.first_non_member_level)});
            emit(common, doc);
        } else if (app.got_subcommand(dihedral_cmd)) {
            schema = "dihedral/1";
            TableDoc doc;
            doc.header = {"level", "order", "orderOk", "outside", "involutionsOk",
                          "multipliersOk"};
            for (const auto& row : dihedral_audit(dihedral_max))
                doc.rows.push_back({std::to_string(row.level), row.order.get_str(),
                                    fmt_bool(row.order_expected), std::to_string(row.outside),
                                    fmt_bool(row.outside_involutions),
                                    fmt_bool(row.multipliers_ok)});
            emit(common, doc);
        } else if (app.got_subcommand(sample_cmd)) {
            schema = "automorphism/1";
            int depth = resolved_depth(common);
            TreeShape shape = TreeShape::uniform(common.d, depth);
            std::vector<std::vector<std::uint32_t>> gens;
            for (const auto& text : sample_gens) gens.push_back(parse_letters(text, common.d));
            for (unsigned long i = 0; i < sample_count; ++i) {
                std::uint64_t seed = common.seed + i;
                write_automorphism(std::cout, gens.empty()
                                                  ? haar_sample(shape, depth, seed)
                                                  : wreath_sample(shape, depth, gens, seed));
            }
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const depth_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    std::cerr << "# command: " << echo << "\n# schema: " << schema
              << "\n# seed: " << common.seed << "\n# wall-ms: " << wall << "\n";
    return 0;
}
