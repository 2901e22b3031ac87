#include "bppnet/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "bppnet/applications.hpp"
#include "bppnet/cli.hpp"
#include "bppnet/coverage.hpp"
#include "bppnet/montecarlo.hpp"
#include "bppnet/specfun.hpp"

namespace bppnet {
namespace {

constexpr double kMcSlack = 0.002;

// Tight settings for identities that must hold to 1e-7 or better.
const QuadratureSettings kTight{1e-11, 1e-15, 1000};

bool agrees(double analytic, const EstimateWithCI& mc)
{
    return std::abs(mc.mean - analytic) <= 3.0 * mc.sigma() + kMcSlack;
}

// |mc - analytic| in units of sigma, for reporting.
double z_score(double analytic, const EstimateWithCI& mc)
{
    const double d = std::abs(mc.mean - analytic);
    return mc.sigma() > 0.0 ? d / mc.sigma() : (d == 0.0 ? 0.0 : INFINITY);
}

std::string num(double v) { return format_number(v); }

struct Failures {
    int count = 0;
    std::string first;

    void add(const std::string& what)
    {
        if (count++ == 0)
            first = what;
    }
    bool none() const { return count == 0; }
    std::string summary() const
    {
        return none() ? std::string() : std::to_string(count) + " failed, first: " + first;
    }
};

std::string policy_name(const TxSelectionPolicy& p)
{
    return is_uniform(p) ? std::string("uniform") : "k=" + std::to_string(serving_order(p));
}

std::string receiver_name(const ReceiverLocation& r)
{
    if (const auto* at = std::get_if<ReceiverAtRadius>(&r))
        return "at " + num(at->nu0);
    return to_string(r);
}

// 1. Analytic coverage against the Monte Carlo oracle on the full grid.
CheckResult check_coverage_grid(const ValidationOptions& opt)
{
    CheckResult res{1, "analytic vs Monte Carlo coverage grid", false, "", 0.0};
    struct Case {
        SirQuery query;
        InterfererSampling sampling;
        long trials;
    };
    std::vector<Case> cases;
    const std::vector<TxSelectionPolicy> policies = {UniformSelection{}, KClosestSelection{1},
                                                     KClosestSelection{2}, KClosestSelection{5}};
    const std::vector<ReceiverLocation> receivers = {CentralReceiver{}, ReceiverAtRadius{0.3},
                                                     ReceiverAtRadius{0.6}, RandomReceiver{}};
    const std::pair<int, int> sizes[] = {{5, 5}, {20, 5}, {20, 20}};
    for (const auto& pol : policies)
        for (const auto& rx : receivers)
            for (double beta_db : {-6.0, 0.0, 6.0})
                for (auto [nt, na] : sizes) {
                    SirQuery q;
                    q.threshold_linear = db_to_linear(beta_db);
                    q.model = {1.0, nt, na, 4.0};
                    q.policy = pol;
                    q.receiver = rx;
                    cases.push_back({q, InterfererSampling::IidResample, opt.trials()});
                }
    const std::size_t main_cases = cases.size();
    // The other weighting convention with its own sampler.
    for (int k : {1, 2, 5})
        for (const auto& rx : {ReceiverLocation{CentralReceiver{}},
                               ReceiverLocation{ReceiverAtRadius{0.6}},
                               ReceiverLocation{RandomReceiver{}}})
            for (auto [nt, na] : {std::pair{20, 5}, std::pair{20, 20}}) {
                SirQuery q;
                q.model = {1.0, nt, na, 4.0};
                q.policy = KClosestSelection{k};
                q.receiver = rx;
                q.weighting = InterfererWeighting::Hypergeometric;
                cases.push_back({q, InterfererSampling::WithoutReplacementSubset,
                                 std::max(1L, opt.trials() / 4)});
            }

    std::vector<double> analytic(cases.size());
    std::vector<EstimateWithCI> mc(cases.size());
    parallel_for(cases.size(), opt.lanes, [&](std::size_t i) {
        const auto& c = cases[i];
        analytic[i] = coverage(c.query).probability;
        mc[i] = simulate_coverage(c.query, {c.trials, opt.seed + i, c.sampling, 1});
    });

    Failures fail;
    double worst = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (mc[i].sigma() > 0.0)
            worst = std::max(worst, z_score(analytic[i], mc[i]));
        if (!agrees(analytic[i], mc[i])) {
            const auto& q = cases[i].query;
            std::ostringstream w;
            w << policy_name(q.policy) << ' ' << receiver_name(q.receiver) << " nt="
              << q.model.n_tx << " na=" << q.model.n_active << ' ' << to_string(q.weighting)
              << ": analytic " << num(analytic[i]) << " mc " << num(mc[i].mean);
            fail.add(w.str());
        }
    }
    res.pass = fail.none();
    std::ostringstream d;
    d << main_cases << " grid points + " << cases.size() - main_cases
      << " hypergeometric/subset points, " << opt.trials() << " trials, worst " << num(worst)
      << " sigma";
    if (!fail.none())
        d << "; " << fail.summary();
    res.detail = d.str();
    return res;
}

// 2. Distance laws: normalisation, continuity at w-, KS against sampling.
CheckResult check_distance_laws(const ValidationOptions& opt)
{
    CheckResult res{2, "distance laws", false, "", 0.0};
    Failures fail;
    const double rd = 1.0;
    const QuadratureSettings q{1e-10, 1e-13, 400};

    auto normalised = [&](const std::string& what, const std::function<double(double)>& f,
                          double lo, double hi, std::vector<double> cuts) {
        const double v = integrate(f, lo, hi, cuts, q).value;
        if (std::abs(v - 1.0) > 1e-6)
            fail.add(what + " integrates to " + num(v));
    };

    normalised("central pdf", [&](double w) { return central_pdf(w, rd); }, 0.0, rd, {});
    normalised("receiver radius pdf", [&](double v) { return pdf_v0(v, rd); }, 0.0, rd, {});
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i)
        grid.push_back(0.05 * i);
    for (double nu0 : grid) {
        const PiecewiseDistanceLaw law(nu0, rd);
        const std::vector<double> cuts = {law.inner_break()};
        normalised("link pdf at nu0=" + num(nu0), [&](double w) { return law.pdf(w); }, 0.0,
                   law.outer_break(), cuts);
        for (auto [k, nt] : {std::pair{1, 5}, {2, 5}, {5, 5}, {1, 20}, {5, 20}, {20, 20}}) {
            const OrderStatConfig cfg{k, nt, law};
            normalised("serving pdf k=" + std::to_string(k) + " nt=" + std::to_string(nt) +
                           " nu0=" + num(nu0),
                       [&](double r) { return serving_pdf_kclosest(r, cfg); }, 0.0,
                       law.outer_break(), cuts);
        }
        if (nu0 >= 0.05 && nu0 <= 0.95 + 1e-12) {
            const double w = law.inner_break();
            const double dp = std::abs(law.inner_pdf(w) - law.outer_pdf(w));
            const double dc = std::abs(law.inner_cdf(w) - law.outer_cdf(w));
            if (dp > 1e-9 || dc > 1e-9)
                fail.add("branch jump at w- for nu0=" + num(nu0) + ": pdf " + num(dp) + " cdf " +
                         num(dc));
        }
    }
    for (auto [nu0, r] : {std::pair{0.3, 0.8}, {0.2, 0.5}, {0.6, 1.2}, {0.6, 0.3}}) {
        const PiecewiseDistanceLaw law(nu0, rd);
        const std::vector<double> cuts = {law.inner_break(), r};
        normalised("inner law nu0=" + num(nu0) + " r=" + num(r),
                   [&](double u) { return pdf_u_in(u, nu0, r, rd); }, 0.0, r, cuts);
        normalised("outer law nu0=" + num(nu0) + " r=" + num(r),
                   [&](double u) { return pdf_u_out(u, nu0, r, rd); }, r, law.outer_break(), cuts);
    }

    // KS tests at 1e5 samples.
    const long n = 100000;
    double worst_ratio = 0.0;
    auto ks = [&](const std::string& what, std::vector<double> samples,
                  const std::function<double(double)>& cdf) {
        std::sort(samples.begin(), samples.end());
        const double d = ks_statistic(samples, cdf);
        const double crit = ks_critical_1pct(samples.size());
        worst_ratio = std::max(worst_ratio, d / crit);
        if (d >= crit)
            fail.add("KS " + what + " D=" + num(d) + " > " + num(crit));
    };
    std::uint64_t seed = opt.seed;
    ks("central law", sample_link_distances(0.0, rd, n, seed++),
       [&](double w) { return central_cdf(std::min(w, rd), rd); });
    for (double nu0 : {0.1, 0.3, 0.6, 0.9}) {
        const PiecewiseDistanceLaw law(nu0, rd);
        ks("link law nu0=" + num(nu0), sample_link_distances(nu0, rd, n, seed++),
           [&](double w) { return law.cdf(std::min(w, law.outer_break())); });
    }
    for (auto [k, nt, nu0] : {std::tuple{1, 5, 0.3}, {2, 5, 0.3}, {5, 20, 0.6}}) {
        const PiecewiseDistanceLaw law(nu0, rd);
        const OrderStatConfig cfg{k, nt, law};
        ks("serving law k=" + std::to_string(k) + " nt=" + std::to_string(nt),
           sample_serving_distances(k, nt, nu0, rd, n, seed++),
           [&](double r) { return serving_cdf_kclosest(std::min(r, law.outer_break()), cfg); });
    }
    ks("receiver radius law", sample_receiver_radii(rd, n, seed++),
       [&](double v) { return v * v / (rd * rd); });
    {
        const double nu0 = 0.3, r = 0.5;
        const PiecewiseDistanceLaw law(nu0, rd);
        const auto nb = sample_conditioned_neighbours(2, 5, nu0, rd, r, kSliceHalfWidth, n, seed++);
        ks("closer-node law", nb.inner, [&](double u) { return law.cdf(std::min(u, r)) / law.cdf(r); });
        ks("farther-node law", nb.outer, [&](double u) {
            const double c = law.cdf(std::clamp(u, r, law.outer_break()));
            return (c - law.cdf(r)) / law.ccdf(r);
        });
    }

    res.pass = fail.none();
    res.detail = "worst KS/critical " + num(worst_ratio);
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

// 3. Special functions against their defining integrals.
CheckResult check_special_functions(const ValidationOptions& opt)
{
    CheckResult res{3, "special functions", false, "", 0.0};
    Failures fail;
    double worst_c = 0.0, worst_d = 0.0, worst_atan = 0.0, worst_d1 = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (int i = 0; i < 50; ++i) {
        CounterRng rng(opt.seed, i, 0xC0FFEE);
        const double alpha = 2.5 + 3.5 * rng.uniform();
        const double s = std::pow(10.0, -3.0 + 5.0 * rng.uniform());
        const double x = 0.05 + 1.95 * rng.uniform();
        const int n = 1 + int(rng.uniform() * 8);
        const double c = c_kernel(alpha, s, x), cq = c_kernel_by_quadrature(alpha, s, x);
        const double d = d_kernel(alpha, s, x, n), dq = d_kernel_by_quadrature(alpha, s, x, n);
        const double d1 = d_kernel(alpha, s, x, 1);
        worst_c = std::max(worst_c, rel(c, cq));
        worst_d = std::max(worst_d, rel(d, dq));
        worst_d1 = std::max(worst_d1, rel(d1, c));
        std::ostringstream at;
        at << "alpha=" << num(alpha) << " s=" << num(s) << " x=" << num(x) << " n=" << n;
        if (rel(c, cq) > 1e-8)
            fail.add("c_kernel " + at.str());
        if (rel(d, dq) > 1e-8)
            fail.add("d_kernel " + at.str());
        if (rel(d1, c) > 1e-10)
            fail.add("d_kernel(n=1) vs c_kernel " + at.str());
    }
    for (int na : {2, 5, 20})
        for (double s : {1e-4, 1e-2, 0.3, 1.0, 7.0, 100.0}) {
            const NetworkModel model{1.0, 20, na, 4.0};
            const double a = laplace_uniform_central(s, model);
            const double g = laplace_uniform_central_generic(s, model);
            const double diff = std::abs(a - g);
            worst_atan = std::max(worst_atan, diff);
            if (diff > 1e-10)
                fail.add("arctan form na=" + std::to_string(na) + " s=" + num(s));
        }
    res.pass = fail.none();
    res.detail = "worst rel c " + num(worst_c) + ", d " + num(worst_d) + ", d(n=1)-c " +
                 num(worst_d1) + "; arctan abs " + num(worst_atan);
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

// 4. Reduction identities.
CheckResult check_reductions(const ValidationOptions& opt)
{
    CheckResult res{4, "reduction identities", false, "", 0.0};
    Failures fail;
    double worst_center = 0.0, worst_joint = 0.0;

    struct Case {
        int k;
        int nt, na;
        double beta;
    };
    std::vector<Case> cases;
    for (int k : {0, 1, 2, 5})
        for (auto [nt, na] : {std::pair{5, 5}, {20, 5}, {20, 20}})
            for (double beta : {0.25, 1.0, 4.0})
                cases.push_back({k, nt, na, beta});
    std::vector<double> diffs(cases.size());
    parallel_for(cases.size(), opt.lanes, [&](std::size_t i) {
        const auto& c = cases[i];
        const NetworkModel model{1.0, c.nt, c.na, 4.0};
        const auto w = InterfererWeighting::PaperBinomialTruncated;
        double general, central;
        if (c.k == 0) {
            general = coverage_ref_uniform(0.0, c.beta, model, kTight).probability;
            central = coverage_central(UniformSelection{}, c.beta, model, w, kTight).probability;
        } else {
            general = coverage_ref_kclosest(0.0, c.beta, c.k, model, w, kTight).probability;
            central = coverage_central(KClosestSelection{c.k}, c.beta, model, w, kTight).probability;
        }
        diffs[i] = std::abs(general - central);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
        worst_center = std::max(worst_center, diffs[i]);
        if (diffs[i] > 1e-8)
            fail.add("nu0=0 vs central k=" + std::to_string(cases[i].k) + " nt=" +
                     std::to_string(cases[i].nt) + " na=" + std::to_string(cases[i].na) +
                     " beta=" + num(cases[i].beta) + " diff " + num(diffs[i]));
    }

    for (int k : {0, 1, 2})
        for (double nu0 : {0.0, 0.3, 0.7}) {
            DiversityQuery dq;
            dq.base.model = {1.0, 5, 5, 4.0};
            dq.base.threshold_linear = 1.0;
            dq.base.policy = k == 0 ? TxSelectionPolicy{UniformSelection{}}
                                    : TxSelectionPolicy{KClosestSelection{k}};
            dq.antennas = 1;
            const double joint =
                k == 0 ? joint_success(dq, nu0) : joint_success_kclosest(dq, nu0);
            const double single =
                k == 0 ? coverage_ref_uniform(nu0, 1.0, dq.base.model).probability
                       : coverage_ref_kclosest(nu0, 1.0, k, dq.base.model, dq.base.weighting)
                             .probability;
            worst_joint = std::max(worst_joint, std::abs(joint - single));
            if (std::abs(joint - single) > 1e-9)
                fail.add("n=1 joint vs coverage k=" + std::to_string(k) + " nu0=" + num(nu0));
        }

    int single_link = 0;
    for (const auto& pol : {TxSelectionPolicy{UniformSelection{}}, TxSelectionPolicy{KClosestSelection{1}},
                            TxSelectionPolicy{KClosestSelection{3}}})
        for (const auto& rx : {ReceiverLocation{CentralReceiver{}},
                               ReceiverLocation{ReceiverAtRadius{0.5}},
                               ReceiverLocation{RandomReceiver{}}})
            for (double beta : {0.1, 1.0, 10.0}) {
                SirQuery q;
                q.threshold_linear = beta;
                q.model = {1.0, 5, 1, 4.0};
                q.policy = pol;
                q.receiver = rx;
                ++single_link;
                if (coverage(q).probability != 1.0)
                    fail.add("na=1 analytic coverage not exactly 1");
                if (simulate_coverage(q, {1000, opt.seed, InterfererSampling::IidResample, 1}).mean != 1.0)
                    fail.add("na=1 simulated coverage not exactly 1");
                DiversityQuery dq{q, 4, true};
                if (sc_coverage(dq, 0.5) != 1.0)
                    fail.add("na=1 selection-combining coverage not exactly 1");
            }

    res.pass = fail.none();
    res.detail = "worst nu0=0 gap " + num(worst_center) + ", n=1 gap " + num(worst_joint) + ", " +
                 std::to_string(single_link) + " single-link cases";
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

// 5. Selection combining against the max-SIR simulation.
CheckResult check_diversity(const ValidationOptions& opt)
{
    CheckResult res{5, "selection-combining diversity", false, "", 0.0};
    Failures fail;
    struct Case {
        bool uniform;
        double nu0;
    };
    std::vector<Case> cases;
    for (bool uniform : {true, false})
        for (double nu0 : {0.0, 0.4, 0.8})
            cases.push_back({uniform, nu0});
    const int antennas[] = {2, 4, 8};
    struct Row {
        double sc[3], ind[3];
        DiversityEstimate mc;
    };
    std::vector<Row> rows(cases.size());
    parallel_for(cases.size(), opt.lanes, [&](std::size_t i) {
        const auto& c = cases[i];
        DiversityQuery dq;
        dq.base.model = {1.0, 5, 5, 4.0};
        dq.base.threshold_linear = c.uniform ? db_to_linear(-5.0) : 1.0;
        dq.base.policy = c.uniform ? TxSelectionPolicy{UniformSelection{}}
                                   : TxSelectionPolicy{KClosestSelection{1}};
        dq.base.receiver = ReceiverAtRadius{c.nu0};
        for (int j = 0; j < 3; ++j) {
            DiversityQuery x = dq;
            x.antennas = antennas[j];
            rows[i].sc[j] = sc_coverage(x, c.nu0);
            x.correlated = false;
            rows[i].ind[j] = sc_coverage(x, c.nu0);
        }
        dq.antennas = 8;
        rows[i].mc = simulate_joint_success(
            dq, {opt.trials(), opt.seed + 500 + i, InterfererSampling::IidResample, 1});
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i)
        for (int j = 0; j < 3; ++j) {
            const auto& est = rows[i].mc.any[antennas[j] - 1];
            const double sc = rows[i].sc[j];
            worst = std::max(worst, z_score(sc, est));
            std::ostringstream at;
            at << (cases[i].uniform ? "uniform" : "k=1") << " nu0=" << num(cases[i].nu0)
               << " n=" << antennas[j];
            if (!agrees(sc, est))
                fail.add(at.str() + ": analytic " + num(sc) + " mc " + num(est.mean));
            if (sc > rows[i].ind[j])
                fail.add(at.str() + ": correlated " + num(sc) + " above independent " +
                         num(rows[i].ind[j]));
        }
    res.pass = fail.none();
    res.detail = "18 points, worst " + num(worst) + " sigma";
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

// 6. Network spectral efficiency trends.
CheckResult check_nse(const ValidationOptions& opt)
{
    CheckResult res{6, "spectral efficiency trends", false, "", 0.0};
    Failures fail;
    const int nt = 20;
    const double beta = 1.0, alpha = 4.0;
    const auto w = InterfererWeighting::PaperBinomialTruncated;
    // Differences smaller than this are quadrature noise, not a trend.
    const double noise = 1e-6;
    std::ostringstream d;

    const std::pair<TxSelectionPolicy, std::string> policies[] = {
        {UniformSelection{}, "uniform"}, {KClosestSelection{1}, "k=1"}, {KClosestSelection{5}, "k=5"}};
    int idx = 0;
    for (const auto& [pol, name] : policies) {
        const auto best = optimal_active_count(pol, nt, beta, alpha, w, {}, 1.0, opt.lanes);
        const auto& c = best.curve;
        d << name << " argmax " << best.n_active << "; ";
        for (int na = 1; na < nt; ++na) {
            const double step = c[na] - c[na - 1];
            if (idx == 0 && !(step < -noise))
                fail.add("uniform nse not strictly decreasing at na=" + std::to_string(na) + "->" +
                         std::to_string(na + 1) + " (" + num(c[na - 1]) + " -> " + num(c[na]) + ")");
            if (idx == 1 && !(step > noise))
                fail.add("k=1 nse not strictly increasing at na=" + std::to_string(na) + "->" +
                         std::to_string(na + 1) + " (" + num(c[na - 1]) + " -> " + num(c[na]) + ")");
        }
        if (idx == 2 && !(best.n_active > 1 && best.n_active < nt))
            fail.add("k=5 maximizer " + std::to_string(best.n_active) + " is not interior");

        // Simulated coverage around the maximizer.
        for (int na = std::max(1, best.n_active - 1); na <= std::min(nt, best.n_active + 1); ++na) {
            SirQuery q;
            q.threshold_linear = beta;
            q.model = {1.0, nt, na, alpha};
            q.policy = pol;
            q.receiver = RandomReceiver{};
            const double analytic = c[na - 1] / (na * std::log2(1.0 + beta));
            const auto mc = simulate_coverage(
                q, {opt.trials(), opt.seed + 900 + 100 * idx + na, InterfererSampling::IidResample,
                    opt.lanes});
            if (!agrees(analytic, mc))
                fail.add(name + " na=" + std::to_string(na) + " analytic coverage " +
                         num(analytic) + " mc " + num(mc.mean));
        }
        ++idx;
    }
    res.pass = fail.none();
    res.detail = d.str();
    if (!fail.none())
        res.detail += fail.summary();
    return res;
}

// 7. Caching optimizer against the exhaustive grid, and its trends.
CheckResult check_caching(const ValidationOptions& opt)
{
    CheckResult res{7, "caching optimizer", false, "", 0.0};
    Failures fail;
    const int sweep[] = {1, 5, 10, 20};
    std::vector<double> b1, hit, thr;
    double worst_gap = 0.0;
    for (int na : sweep) {
        CacheProblem p;
        p.library_size = 2;
        p.cache_size = 1;
        p.zipf_gamma = 1.2;
        p.model = {1.0, 20, na, 4.0};
        p.beta = 1.0;
        const auto cov = coverage_by_k(p, {}, opt.lanes);
        const auto sol = optimize_caching(p, cov);
        const double p1 = zipf_pmf(1, 2, 1.2), p2 = zipf_pmf(2, 2, 1.2);
        double grid_best = 0.0;
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; i + j <= 100; ++j)
                grid_best = std::max(grid_best, p1 * content_gain(0.01 * i, cov) +
                                                    p2 * content_gain(0.01 * j, cov));
        const double gap = std::abs(sol.hit - grid_best);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-3)
            fail.add("na=" + std::to_string(na) + " optimizer " + num(sol.hit) + " vs grid " +
                     num(grid_best));
        if (sol.hit < grid_best - 1e-6)
            fail.add("na=" + std::to_string(na) + " optimizer below the grid");
        const auto& b = sol.placement.probabilities;
        if (b[0] + b[1] > 1.0 + 1e-9 || b[0] < 0 || b[1] < 0 || b[0] > 1 || b[1] > 1)
            fail.add("na=" + std::to_string(na) + " infeasible placement");
        b1.push_back(b[0]);
        hit.push_back(sol.hit);
        thr.push_back(throughput(na, sol.hit));
    }
    std::ostringstream d;
    for (std::size_t i = 0; i < b1.size(); ++i) {
        d << "na=" << sweep[i] << " b1=" << format_fixed(b1[i], 4) << " hit=" << format_fixed(hit[i], 4)
          << " T=" << format_fixed(thr[i], 4) << "; ";
        if (i == 0)
            continue;
        // The inner search resolves b to about 1e-6; smaller moves are not a trend.
        if (b1[i] < b1[i - 1] - 1e-6)
            fail.add("b1 decreases at na=" + std::to_string(sweep[i]));
        if (hit[i] > hit[i - 1] + 1e-9)
            fail.add("hit increases at na=" + std::to_string(sweep[i]));
        if (thr[i] < thr[i - 1] - 1e-9)
            fail.add("throughput decreases at na=" + std::to_string(sweep[i]));
    }
    d << "worst grid gap " << num(worst_gap);
    res.pass = fail.none();
    res.detail = d.str();
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

// 8. Byte-for-byte determinism of the CLI.
CheckResult check_determinism(const ValidationOptions& opt)
{
    CheckResult res{8, "determinism", false, "", 0.0};
    Failures fail;
    auto run = [&](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        if (code != 0)
            fail.add("exit " + std::to_string(code) + ": " + err.str());
        return out.str();
    };
    const std::string seed = std::to_string(opt.seed);
    for (const char* sampling : {"iid", "subset"}) {
        std::vector<std::string> sim = {"simulate", "--policy", "kclosest", "--k", "2",
                                        "--nt", "20", "--na", "5", "--beta-db", "0",
                                        "--receiver", "random", "--trials", "200000",
                                        "--seed", seed, "--sampling", sampling, "--lanes"};
        auto one = sim, eight = sim;
        one.push_back("1");
        eight.push_back("8");
        const auto a = run(one), b = run(eight);
        if (a != b || a.empty())
            fail.add(std::string("simulate ") + sampling + " differs between 1 and 8 lanes");
    }
    const std::vector<std::string> sweep = {"sweep", "--variable", "beta_db", "--start", "-10",
                                            "--stop", "10", "--steps", "5", "--policy", "kclosest",
                                            "--k", "1", "--nt", "5", "--na", "5", "--receiver",
                                            "at", "--nu0", "0.3", "--lanes"};
    auto s1 = sweep, s4 = sweep;
    s1.push_back("1");
    s4.push_back("4");
    const auto first = run(s1), second = run(s1), third = run(s4);
    if (first != second || first != third || first.empty())
        fail.add("sweep CSV differs between runs");
    res.pass = fail.none();
    res.detail = res.pass ? "simulate identical at 1 and 8 lanes; sweep CSV stable" : fail.summary();
    return res;
}

// 9. Scale invariance in the disk radius.
CheckResult check_scale_invariance(const ValidationOptions& opt)
{
    CheckResult res{9, "scale invariance", false, "", 0.0};
    Failures fail;
    double worst = 0.0;
    struct Case {
        int k;
        int nt, na;
        double beta;
    };
    std::vector<Case> cases;
    for (int k : {0, 1, 3})
        for (auto [nt, na] : {std::pair{5, 3}, {5, 5}})
            for (double beta : {0.5, 2.0})
                cases.push_back({k, nt, na, beta});
    std::vector<double> gaps(cases.size());
    parallel_for(cases.size(), opt.lanes, [&](std::size_t i) {
        const auto& c = cases[i];
        auto at = [&](double rd, double nu0) {
            const NetworkModel m{rd, c.nt, c.na, 4.0};
            if (c.k == 0)
                return coverage_ref_uniform(nu0, c.beta, m, kTight).probability;
            return coverage_ref_kclosest(nu0, c.beta, c.k, m,
                                         InterfererWeighting::PaperBinomialTruncated, kTight)
                .probability;
        };
        const double unit = at(1.0, 0.5);
        // r_d = 3 is not a power of two, so the identity is not exact in floating point.
        gaps[i] = std::max(std::abs(at(2.0, 1.0) - unit), std::abs(at(3.0, 1.5) - unit));
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
        worst = std::max(worst, gaps[i]);
        if (gaps[i] > 1e-7)
            fail.add("k=" + std::to_string(cases[i].k) + " nt=" + std::to_string(cases[i].nt) +
                     " na=" + std::to_string(cases[i].na) + " gap " + num(gaps[i]));
    }
    res.pass = fail.none();
    res.detail = "worst gap " + num(worst);
    if (!fail.none())
        res.detail += "; " + fail.summary();
    return res;
}

} // namespace

CheckResult run_check(int id, const ValidationOptions& options)
{
    using Check = CheckResult (*)(const ValidationOptions&);
    static const Check checks[kCheckCount] = {
        check_coverage_grid, check_distance_laws, check_special_functions,
        check_reductions,    check_diversity,     check_nse,
        check_caching,       check_determinism,   check_scale_invariance,
    };
    if (id < 1 || id > kCheckCount)
        throw ValidationError(Violation::Sweep, "check ids run from 1 to 9");
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = checks[id - 1](options);
    } catch (const std::exception& e) {
        r.id = id;
        r.title = "check " + std::to_string(id);
        r.pass = false;
        r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // The coverage grid carries its own runtime budget.
    if (id == 1 && r.seconds > 600.0) {
        r.pass = false;
        r.detail += "; over the 600 s budget";
    }
    return r;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::vector<int>& ids, std::ostream* progress)
{
    std::vector<int> todo = ids;
    if (todo.empty())
        for (int i = 1; i <= kCheckCount; ++i)
            todo.push_back(i);
    std::vector<CheckResult> out;
    for (int id : todo) {
        out.push_back(run_check(id, options));
        if (progress)
            *progress << format_check(out.back()) << '\n' << std::flush;
    }
    return out;
}

std::string format_check(const CheckResult& r)
{
    return std::string(r.pass ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + "  " + r.title +
           "  [" + r.detail + "]  (" + format_fixed(r.seconds, 1) + " s)";
}

} // namespace bppnet
