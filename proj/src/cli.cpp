#include "bppnet/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "bppnet/applications.hpp"
#include "bppnet/coverage.hpp"
#include "bppnet/montecarlo.hpp"
#include "bppnet/validation.hpp"

namespace bppnet {
namespace {

const std::string kCsvHeader =
    "variable,value,policy,k,nt,na,alpha,beta_db,receiver,nu0,weighting,result,err_estimate";

struct QueryFlags {
    std::string policy = "uniform";
    int k = 1;
    int nt = 5;
    int na = 5;
    double alpha = 4.0;
    double beta_db = 0.0;
    std::string receiver = "central";
    double nu0 = 0.0;
    std::string weighting = "paper";
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
    double disk_radius = 1.0;
};

struct CacheFlags {
    int library = 2;
    int cache_size = 1;
    double gamma = 1.2;
};

void add_query_flags(CLI::App* app, QueryFlags& f)
{
    app->add_option("--policy", f.policy, "uniform or kclosest")
        ->check(CLI::IsMember({"uniform", "kclosest"}))
        ->capture_default_str();
    app->add_option("--k", f.k, "serving order for kclosest")->capture_default_str();
    app->add_option("--nt", f.nt, "number of transmitters")->capture_default_str();
    app->add_option("--na", f.na, "number of active transmitters")->capture_default_str();
    app->add_option("--alpha", f.alpha, "path-loss exponent")->capture_default_str();
    app->add_option("--beta-db", f.beta_db, "SIR threshold in dB")->capture_default_str();
    app->add_option("--receiver", f.receiver, "central, random or at")
        ->check(CLI::IsMember({"central", "random", "at"}))
        ->capture_default_str();
    app->add_option("--nu0", f.nu0, "receiver radius for --receiver at")->capture_default_str();
    app->add_option("--weighting", f.weighting, "paper or hypergeometric")
        ->check(CLI::IsMember({"paper", "hypergeometric"}))
        ->capture_default_str();
    app->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance")->capture_default_str();
    app->add_option("--max-subdivisions", f.max_subdivisions, "quadrature panel budget per integral")
        ->capture_default_str();
    app->add_option("--disk-radius", f.disk_radius, "disk radius")->capture_default_str();
}

void add_cache_flags(CLI::App* app, CacheFlags& f)
{
    app->add_option("--library", f.library, "library size J")->capture_default_str();
    app->add_option("--cache-size", f.cache_size, "per-node cache size")->capture_default_str();
    app->add_option("--gamma", f.gamma, "Zipf exponent")->capture_default_str();
}

TxSelectionPolicy to_policy(const QueryFlags& f)
{
    if (f.policy == "uniform")
        return UniformSelection{};
    return KClosestSelection{f.k};
}

ReceiverLocation to_receiver(const QueryFlags& f)
{
    if (f.receiver == "central")
        return CentralReceiver{};
    if (f.receiver == "random")
        return RandomReceiver{};
    return ReceiverAtRadius{f.nu0};
}

InterfererWeighting to_weighting(const QueryFlags& f)
{
    return f.weighting == "paper" ? InterfererWeighting::PaperBinomialTruncated
                                  : InterfererWeighting::Hypergeometric;
}

SirQuery to_query(const QueryFlags& f)
{
    SirQuery q;
    q.threshold_linear = db_to_linear(f.beta_db);
    q.model = {f.disk_radius, f.nt, f.na, f.alpha};
    q.policy = to_policy(f);
    q.receiver = to_receiver(f);
    q.weighting = to_weighting(f);
    validate(q);
    return q;
}

QuadratureSettings to_settings(const QueryFlags& f)
{
    QuadratureSettings q;
    q.rel_tol = f.rel_tol;
    q.max_subdivisions = f.max_subdivisions;
    validate(q);
    return q;
}

CacheProblem to_problem(const QueryFlags& f, const CacheFlags& c)
{
    CacheProblem p;
    p.library_size = c.library;
    p.cache_size = c.cache_size;
    p.zipf_gamma = c.gamma;
    p.model = {f.disk_radius, f.nt, f.na, f.alpha};
    p.beta = db_to_linear(f.beta_db);
    p.weighting = to_weighting(f);
    validate(p);
    return p;
}

// Placement for a b1 sweep: the rest of the budget spread evenly.
CachePlacement b1_placement(double b1, const CacheProblem& p)
{
    CachePlacement out;
    out.probabilities.assign(p.library_size, 0.0);
    out.probabilities[0] = b1;
    if (p.library_size > 1) {
        const double share = std::max(0.0, p.cache_size - b1) / (p.library_size - 1);
        for (int j = 1; j < p.library_size; ++j)
            out.probabilities[j] = std::min(1.0, share);
    }
    return out;
}

struct SweepFlags {
    std::string variable = "beta_db";
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    std::string metric = "coverage";
    std::string out;
    int lanes = default_lanes();
};

std::string csv_row(const std::string& variable, double value, const QueryFlags& f,
                    double result, double err)
{
    const bool uniform = f.policy == "uniform";
    std::ostringstream row;
    row << variable << ',' << format_number(value) << ',' << f.policy << ','
        << (uniform ? 0 : f.k) << ',' << f.nt << ',' << f.na << ',' << format_number(f.alpha)
        << ',' << format_number(f.beta_db) << ',' << f.receiver << ','
        << format_number(f.receiver == "at" ? f.nu0 : 0.0) << ',' << f.weighting << ','
        << format_number(result) << ',' << format_number(err) << '\n';
    return row.str();
}

int cmd_coverage(const QueryFlags& f, std::ostream& out)
{
    const auto q = to_query(f);
    const auto r = coverage(q, to_settings(f));
    out << format_fixed(r.probability, 6) << ' ' << format_number(r.quadrature_error_estimate)
        << '\n';
    return ExitOk;
}

int cmd_sweep(QueryFlags base, const CacheFlags& cache, const SweepFlags& s, std::ostream& out)
{
    if (!(s.start <= s.stop) || s.steps < 2)
        throw ValidationError(Violation::Sweep, "sweep needs start <= stop and at least 2 steps");
    const bool integral = s.variable == "n_active" || s.variable == "k";
    if (s.variable == "nu0")
        base.receiver = "at";
    if (s.variable == "k")
        base.policy = "kclosest";
    if (s.metric == "nse")
        base.receiver = "random";
    const bool hit = s.variable == "b1" || s.metric == "hit";

    // Build every row's flags first so bad input fails before any output.
    std::vector<QueryFlags> rows(s.steps, base);
    std::vector<double> values(s.steps);
    for (int i = 0; i < s.steps; ++i) {
        double v = s.start + (s.stop - s.start) * i / (s.steps - 1);
        if (integral)
            v = std::round(v);
        values[i] = v;
        auto& f = rows[i];
        if (s.variable == "beta_db")
            f.beta_db = v;
        else if (s.variable == "nu0")
            f.nu0 = v;
        else if (s.variable == "n_active")
            f.na = int(v);
        else if (s.variable == "k")
            f.k = int(v);
        if (hit)
            to_problem(f, cache);
        else
            to_query(f);
    }
    const auto settings = to_settings(base);

    std::vector<double> result(s.steps), err(s.steps);
    if (s.variable == "b1") {
        const auto problem = to_problem(base, cache);
        const auto cov = coverage_by_k(problem, settings, s.lanes);
        for (int i = 0; i < s.steps; ++i) {
            const auto placement = b1_placement(values[i], problem);
            result[i] = hit_probability(placement, problem, cov);
        }
    } else if (hit) {
        for (int i = 0; i < s.steps; ++i)
            result[i] = optimize_caching(to_problem(rows[i], cache), settings).hit;
    } else {
        parallel_for(s.steps, s.lanes, [&](std::size_t i) {
            const auto q = to_query(rows[i]);
            if (s.metric == "nse") {
                const auto r = coverage_random(q.policy, q.threshold_linear, q.model, q.weighting,
                                               settings);
                const double scale = q.model.n_active * std::log2(1.0 + q.threshold_linear);
                result[i] = scale * r.probability;
                err[i] = scale * r.quadrature_error_estimate;
            } else {
                const auto r = coverage(q, settings);
                result[i] = r.probability;
                err[i] = r.quadrature_error_estimate;
            }
        });
    }

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    for (int i = 0; i < s.steps; ++i)
        csv << csv_row(s.variable, values[i], rows[i], result[i], err[i]);
    if (s.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(s.out, std::ios::binary);
        if (!file)
            throw ValidationError(Violation::Sweep, "cannot open output file " + s.out);
        file << csv.str();
    }
    return ExitOk;
}

int cmd_cache_opt(const QueryFlags& f, const CacheFlags& c, std::ostream& out)
{
    const auto problem = to_problem(f, c);
    const auto sol = optimize_caching(problem, to_settings(f));
    out << "quantity,index,value\n";
    for (std::size_t j = 0; j < sol.placement.probabilities.size(); ++j)
        out << "b," << j + 1 << ',' << format_number(sol.placement.probabilities[j]) << '\n';
    out << "hit,," << format_number(sol.hit) << '\n';
    out << "throughput,," << format_number(throughput(problem.model.n_active, sol.hit)) << '\n';
    return ExitOk;
}

struct SimulateFlags {
    long trials = 100000;
    std::uint64_t seed = 1;
    std::string sampling = "iid";
    int lanes = 1;
};

int cmd_simulate(const QueryFlags& f, const SimulateFlags& s, std::ostream& out)
{
    const auto q = to_query(f);
    SimulationPlan plan;
    plan.trials = s.trials;
    plan.seed = s.seed;
    plan.sampling = s.sampling == "iid" ? InterfererSampling::IidResample
                                        : InterfererSampling::WithoutReplacementSubset;
    plan.lanes = s.lanes;
    validate(plan);
    const auto e = simulate_coverage(q, plan);
    out << format_fixed(e.mean, 6) << ' ' << format_fixed(e.half_width_95, 6) << ' ' << e.trials
        << ' ' << s.seed << '\n';
    return ExitOk;
}

struct ValidateFlags {
    bool quick = false;
    std::uint64_t seed = ValidationOptions{}.seed;
    int lanes = default_lanes();
    std::vector<int> only;
};

int cmd_validate(const ValidateFlags& v, std::ostream& out)
{
    ValidationOptions opt;
    opt.quick = v.quick;
    opt.seed = v.seed;
    opt.lanes = std::max(1, v.lanes);
    for (int id : v.only)
        if (id < 1 || id > kCheckCount)
            throw ValidationError(Violation::Sweep, "check ids run from 1 to 9");
    const auto results = run_validation(opt, v.only, &out);
    const bool ok = std::all_of(results.begin(), results.end(),
                                [](const CheckResult& r) { return r.pass; });
    out << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? ExitOk : ExitCheckFailed;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag)
{
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Appends the entries of a --config file as flags, skipping any flag the
// command line already sets.
std::vector<std::string> with_config(const std::vector<std::string>& args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty())
        return args;
    std::ifstream file(path);
    if (!file)
        throw CLI::FileError::Missing(path);
    std::vector<std::string> out = args;
    for (const auto& item : CLI::ConfigINI().from_config(file)) {
        if (item.name == "++" || item.name == "--" || !item.parents.empty())
            throw CLI::ConversionError("config sections are not supported; use plain key = value lines");
        const std::string flag = "--" + item.name;
        if (has_flag(args, flag))
            continue;
        if (item.inputs.size() == 1 && item.inputs[0] == "true") {
            out.push_back(flag);
            continue;
        }
        if (item.inputs.size() == 1 && item.inputs[0] == "false")
            continue;
        out.push_back(flag);
        for (const auto& v : item.inputs)
            out.push_back(v);
    }
    return out;
}

} // namespace

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    std::string s(buf, r.ptr);
    // general format keeps trailing zeros in the mantissa; drop them.
    const auto e = s.find('e');
    std::string mant = s.substr(0, e), expo = e == std::string::npos ? "" : s.substr(e);
    if (mant.find('.') != std::string::npos) {
        while (mant.back() == '0')
            mant.pop_back();
        if (mant.back() == '.')
            mant.pop_back();
    }
    return mant + expo;
}

std::string format_fixed(double v, int decimals)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, r.ptr);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Coverage, rate and caching analysis for finite wireless networks", "bppnet"};
    app.require_subcommand(1);

    QueryFlags query;
    CacheFlags cache;
    SweepFlags sweep;
    SimulateFlags simulate;
    ValidateFlags check;

    auto* cov = app.add_subcommand("coverage", "coverage probability of one configuration");
    add_query_flags(cov, query);

    auto* swp = app.add_subcommand("sweep", "CSV sweep over one variable");
    add_query_flags(swp, query);
    add_cache_flags(swp, cache);
    swp->add_option("--variable", sweep.variable, "beta_db, nu0, n_active, k or b1")
        ->check(CLI::IsMember({"beta_db", "nu0", "n_active", "k", "b1"}))
        ->capture_default_str();
    swp->add_option("--start", sweep.start)->required();
    swp->add_option("--stop", sweep.stop)->required();
    swp->add_option("--steps", sweep.steps)->required();
    swp->add_option("--metric", sweep.metric, "coverage, nse or hit")
        ->check(CLI::IsMember({"coverage", "nse", "hit"}))
        ->capture_default_str();
    swp->add_option("--out", sweep.out, "write the CSV here instead of stdout");
    swp->add_option("--lanes", sweep.lanes, "worker threads")->capture_default_str();

    auto* opt = app.add_subcommand("cache-opt", "optimal caching probabilities");
    add_query_flags(opt, query);
    add_cache_flags(opt, cache);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage estimate");
    add_query_flags(sim, query);
    sim->add_option("--trials", simulate.trials)->capture_default_str();
    sim->add_option("--seed", simulate.seed)->capture_default_str();
    sim->add_option("--sampling", simulate.sampling, "iid or subset")
        ->check(CLI::IsMember({"iid", "subset"}))
        ->capture_default_str();
    sim->add_option("--lanes", simulate.lanes)->capture_default_str();

    auto* val = app.add_subcommand("validate", "run the analytic-versus-simulation checks");
    val->add_flag("--quick", check.quick, "1e5 trials instead of 1e6");
    val->add_option("--seed", check.seed)->capture_default_str();
    val->add_option("--lanes", check.lanes)->capture_default_str();
    val->add_option("--only", check.only, "run only these check ids");

    std::string config;
    for (auto* sub : {cov, swp, opt, sim, val})
        sub->add_option("--config", config, "key = value file; flags override it");

    try {
        const auto expanded = with_config(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ExitBadInput;
    }

    try {
        if (*cov)
            return cmd_coverage(query, out);
        if (*swp)
            return cmd_sweep(query, cache, sweep, out);
        if (*opt)
            return cmd_cache_opt(query, cache, out);
        if (*sim)
            return cmd_simulate(query, simulate, out);
        return cmd_validate(check, out);
    } catch (const ValidationError& e) {
        err << "error: invalid " << to_string(e.violation()) << ": " << e.what() << '\n';
        return ExitBadInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return ExitBadInput;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << " (best estimate " << format_number(e.best_estimate())
            << ")\n";
        return ExitNumerical;
    }
}

} // namespace bppnet
