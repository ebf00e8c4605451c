#include "glowf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "glowf/gi.hpp"
#include "glowf/hardcore.hpp"
#include "glowf/hsp.hpp"
#include "glowf/io.hpp"
#include "glowf/kernels.hpp"
#include "glowf/owf.hpp"
#include "glowf/perm_stats.hpp"

namespace glowf::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<std::uint64_t> seed;
    unsigned q = 2;
    std::size_t n = 4;
    std::optional<std::size_t> delta;
    std::size_t trials = 100;
    std::uint64_t budget = kDefaultNodeBudget;
    std::string out;
    std::string format = "json";

    // per-command
    std::vector<std::string> files;
    std::vector<std::size_t> deltas;
    std::string method = "backtracking";
    std::optional<double> epsilon;
    std::size_t k = 6;
    std::optional<double> z;
    std::size_t m = 16;
};

struct Context {
    Options opt;
    std::ostream& out;
    std::ostream& err;

    std::uint64_t seed() const {
        if (!opt.seed) throw UsageError("--seed is required for randomized commands");
        return *opt.seed;
    }
    void emit(const std::string& text) const {
        if (opt.out.empty()) {
            out << text;
        } else {
            io::write_file(opt.out, text);
        }
    }
};

double rounded(double x) { return std::round(x * 1e6) / 1e6; }

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return io::format_double(v.get<double>());
    return v.dump();
}

// Rows share the column list `header`; JSON output is an array of objects.
void emit_table(const Context& ctx, const std::vector<std::string>& header, const std::vector<json>& rows) {
    std::ostringstream s;
    if (ctx.opt.format == "csv") {
        std::vector<std::vector<std::string>> cells;
        for (const json& r : rows) {
            std::vector<std::string> line;
            for (const auto& h : header) line.push_back(cell(r.at(h)));
            cells.push_back(std::move(line));
        }
        io::write_csv(s, header, cells);
    } else {
        s << json(rows).dump(2) << '\n';
    }
    ctx.emit(s.str());
}

io::Instance load_instance(const std::string& path) { return io::parse_instance(io::read_file(path)); }

int cmd_keygen(const Context& ctx) {
    RandomSource rng(ctx.seed());
    ctx.emit(io::serialize_instance({keygen(ctx.opt.q, ctx.opt.n, ctx.opt.delta, rng), std::nullopt}));
    return kSuccess;
}

int cmd_eval(const Context& ctx) {
    io::Instance inst = load_instance(ctx.opt.files.at(0));
    const Matrix m = io::parse_matrix(io::read_file(ctx.opt.files.at(1)), inst.key.q());
    try {
        inst.image = evaluate(inst.key, m);
    } catch (const SingularMatrix& e) {
        throw UsageError(e.what());
    }
    ctx.emit(io::serialize_instance(inst));
    return kSuccess;
}

int cmd_invert(const Context& ctx) {
    const io::Instance inst = load_instance(ctx.opt.files.at(0));
    if (!inst.image) throw UsageError("instance has no W to invert");
    InvertResult r;
    if (ctx.opt.method == "exhaustive") {
        r = invert_exhaustive(inst.key, *inst.image);
    } else if (ctx.opt.method == "backtracking") {
        r = invert_backtracking(inst.key, *inst.image, ctx.opt.budget);
    } else {
        throw UsageError("--method must be backtracking or exhaustive");
    }
    switch (r.status) {
        case InvertStatus::Found: ctx.emit(io::format_matrix(r.preimage)); return kSuccess;
        case InvertStatus::NotInImage: ctx.err << "not in image\n"; return kNegative;
        case InvertStatus::BudgetExceeded: ctx.err << "budget exceeded\n"; return kBudget;
    }
    return kBudget;
}

int cmd_injectivity(const Context& ctx) {
    std::vector<std::size_t> deltas = ctx.opt.deltas;
    if (deltas.empty()) deltas = {0, 1, 2, 4, 8, 3 * ctx.opt.n};
    const auto rows = injectivity_experiment(ctx.opt.q, ctx.opt.n, deltas, ctx.opt.trials, RandomSource(ctx.seed()));
    std::vector<json> table;
    for (const auto& r : rows) {
        table.push_back({{"q", ctx.opt.q}, {"n", ctx.opt.n}, {"delta", r.delta}, {"m", r.m}, {"trials", r.trials},
                         {"injective", r.injective}, {"undecided", r.undecided},
                         {"probability", rounded(r.probability)}, {"std_error", rounded(r.std_error)}});
    }
    emit_table(ctx, {"q", "n", "delta", "m", "trials", "injective", "undecided", "probability", "std_error"}, table);
    return kSuccess;
}

int cmd_gi_encode(const Context& ctx) {
    const SimpleGraph g = io::parse_graph(io::read_file(ctx.opt.files.at(0)));
    OwfKey key{Field(ctx.opt.q), g.vertex_count(), encode_graph(g, ctx.opt.q), std::nullopt};
    ctx.emit(io::serialize_instance({std::move(key), std::nullopt}));
    return kSuccess;
}

int cmd_gi_solve(const Context& ctx) {
    const SimpleGraph g1 = io::parse_graph(io::read_file(ctx.opt.files.at(0)));
    const SimpleGraph g2 = io::parse_graph(io::read_file(ctx.opt.files.at(1)));
    const IsoDecision d = decide_isomorphic(g1, g2, ctx.opt.q, ctx.opt.budget);
    switch (d.status) {
        case IsoStatus::Isomorphic: {
            std::string line;
            for (std::size_t i = 0; i < d.pi.size(); ++i) line += (i ? " " : "") + std::to_string(d.pi[i]);
            ctx.emit(line + "\n");
            return kSuccess;
        }
        case IsoStatus::NonIsomorphic: ctx.err << "non-isomorphic\n"; return kNegative;
        case IsoStatus::BudgetExceeded: ctx.err << "budget exceeded\n"; return kBudget;
    }
    return kBudget;
}

int cmd_hsp_check(const Context& ctx) {
    const io::Instance inst = load_instance(ctx.opt.files.at(0));
    const Matrix m = io::parse_matrix(io::read_file(ctx.opt.files.at(1)), inst.key.q());
    const HspInstance h = make_hsp_oracle(inst.key, m, ctx.opt.budget);
    if (h.promise_exact == false) ctx.err << "warning: key is not injective; the promise is one-sided\n";
    const bool holds = verify_hsp_promise(h);
    const std::uint64_t gl = general_linear_order(inst.key.q(), inst.key.n);
    json doc{{"injective_key", h.promise_exact ? json(*h.promise_exact) : json(nullptr)},
             {"promise_holds", holds},
             {"group_order", 2 * gl * gl}};
    ctx.emit(doc.dump(2) + "\n");
    return holds ? kSuccess : kNegative;
}

json summary_row(const Context& ctx, std::size_t n, std::size_t m, double epsilon, const ReductionSummary& s) {
    return {{"q", ctx.opt.q},
            {"n", n},
            {"m", m},
            {"epsilon", rounded(epsilon)},
            {"trials", s.trials},
            {"recovered", s.recovered},
            {"exact", s.exact},
            {"rate", rounded(s.trials ? double(s.recovered) / double(s.trials) : 0.0)},
            {"predictor_queries", s.predictor_queries}};
}

const std::vector<std::string> kSummaryHeader = {"q",         "n",     "m",    "epsilon",          "trials",
                                                 "recovered", "exact", "rate", "predictor_queries"};

int cmd_hardcore_trace(const Context& ctx) {
    const double eps = ctx.opt.epsilon.value_or(1.0 - 1.0 / ctx.opt.q);
    const std::size_t n = ctx.opt.n;
    const ReductionSummary s = trace_experiment(ctx.opt.q, n, ctx.opt.delta, eps, ctx.opt.trials,
                                                RandomSource(ctx.seed()));
    const std::size_t m = n + ctx.opt.delta.value_or(default_delta(ctx.opt.q, n));
    emit_table(ctx, kSummaryHeader, {summary_row(ctx, n, m, eps, s)});
    return kSuccess;
}

int cmd_hardcore_bilinear(const Context& ctx) {
    const double eps = ctx.opt.epsilon.value_or(1.0 - 1.0 / ctx.opt.q);
    const std::size_t n = ctx.opt.n;
    const std::size_t delta = ctx.opt.delta.value_or(3 * n);
    const ReductionSummary s = bilinear_experiment(ctx.opt.q, n, delta, eps, ctx.opt.trials,
                                                   RandomSource(ctx.seed()));
    emit_table(ctx, kSummaryHeader, {summary_row(ctx, n, n + delta, eps, s)});
    return kSuccess;
}

int cmd_perm_stats(const Context& ctx) {
    const std::size_t k = ctx.opt.k;
    if (k > 20) throw UsageError("--k must be at most 20");
    const RationalPoly product = qk_product(k);
    std::optional<RationalPoly> brute;
    if (k <= 9) brute = qk_bruteforce(k);
    std::vector<json> rows;
    for (std::size_t d = 0; d <= product.degree(); ++d) {
        json row{{"k", k}, {"degree", d}, {"product", product.coefficient(d).convert_to<std::int64_t>()}};
        row["bruteforce"] = brute ? json(brute->coefficient(d).convert_to<std::int64_t>()) : json("");
        rows.push_back(std::move(row));
    }
    if (ctx.opt.format == "csv") {
        emit_table(ctx, {"k", "degree", "product", "bruteforce"}, rows);
        return kSuccess;
    }
    json doc{{"k", k}, {"polynomial", product.to_string()}, {"coefficients", rows}};
    if (brute) doc["matches_enumeration"] = *brute == product;
    if (ctx.opt.z) {
        const BoundCheck b = qk_bound_check(k, *ctx.opt.z);
        doc["bound"] = {{"z", *ctx.opt.z}, {"lhs", rounded(b.lhs)}, {"rhs", rounded(b.rhs)}, {"ok", b.ok}};
    }
    ctx.emit(doc.dump(2) + "\n");
    return kSuccess;
}

int cmd_ig_stats(const Context& ctx) {
    const IgSummary s = ig_experiment(ctx.opt.n, ctx.opt.m, ctx.opt.q, ctx.opt.trials, RandomSource(ctx.seed()));
    emit_table(ctx, {"q", "n", "m", "trials", "mean", "max", "mean_over_sqrt_m"},
               {{{"q", ctx.opt.q},
                 {"n", s.n},
                 {"m", s.m},
                 {"trials", s.trials},
                 {"mean", rounded(s.mean)},
                 {"max", s.max},
                 {"mean_over_sqrt_m", rounded(s.mean_over_sqrt_m)}}});
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{{}, out, err};
    Options& o = ctx.opt;

    CLI::App app{"Experiments with the matrix-action one-way function f_V(M) = sort(M V)", "glowf"};
    app.fallthrough();
    app.require_subcommand(1, 1);
    app.add_option("--seed", o.seed, "Root seed (required for randomized commands)");
    app.add_option("--q", o.q, "Field size, a prime below 256")->check(CLI::Range(2u, 255u));
    app.add_option("--n", o.n, "Dimension")->check(CLI::PositiveNumber);
    app.add_option("--delta", o.delta, "m - n; defaults to ceil(5 ln^2 n / ln^2 q)");
    app.add_option("--trials", o.trials, "Trials per experiment point");
    app.add_option("--budget", o.budget, "Search node budget");
    app.add_option("--out", o.out, "Write output to this file instead of stdout");
    app.add_option("--format", o.format, "Table format")->check(CLI::IsMember({"json", "csv"}));

    using Handler = std::function<int(const Context&)>;
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto command = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        commands.emplace_back(sub, std::move(h));
        return sub;
    };

    command("keygen", "Draw a random key", cmd_keygen);
    command("eval", "Evaluate f_V on a matrix: eval INSTANCE MATRIX", cmd_eval)
        ->add_option("files", o.files)->required()->expected(2);
    auto* invert = command("invert", "Find M with f_V(M) = W: invert INSTANCE", cmd_invert);
    invert->add_option("files", o.files)->required()->expected(1);
    invert->add_option("--method", o.method, "backtracking or exhaustive");
    command("injectivity", "Empirical injectivity probability per delta", cmd_injectivity)
        ->add_option("--deltas", o.deltas, "Delta values")->delimiter(',');
    command("gi-encode", "Encode a graph as a key: gi-encode GRAPH", cmd_gi_encode)
        ->add_option("files", o.files)->required()->expected(1);
    command("gi-solve", "Decide isomorphism through inversion: gi-solve G1 G2", cmd_gi_solve)
        ->add_option("files", o.files)->required()->expected(2);
    command("hsp-check", "Verify the hidden subgroup promise: hsp-check INSTANCE MATRIX", cmd_hsp_check)
        ->add_option("files", o.files)->required()->expected(2);
    command("hardcore-trace", "Trace-predicate inversion trials", cmd_hardcore_trace)
        ->add_option("--epsilon", o.epsilon, "Predictor advantage (default 1 - 1/q)");
    command("hardcore-bilinear", "Bilinear-predicate inversion trials", cmd_hardcore_bilinear)
        ->add_option("--epsilon", o.epsilon, "Predictor advantage (default 1 - 1/q)");
    auto* perm = command("perm-stats", "Coefficients of q_k(z)", cmd_perm_stats);
    perm->add_option("--k", o.k, "Number of points");
    perm->add_option("--z", o.z, "Also check the analytic bound at this z");
    command("ig-stats", "Mean |I_G| over random instances", cmd_ig_stats)->add_option("--m", o.m, "Vector count");

    std::vector<const char*> argv{"glowf"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        for (const auto& [sub, handler] : commands) {
            if (sub->parsed()) return handler(ctx);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace glowf::cli
