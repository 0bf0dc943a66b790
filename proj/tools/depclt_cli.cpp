// depclt: experiment harness over the library.
//
//   depclt simulate --model window --m 1 --sizes 256,512,1024 --reps 10000
//   depclt bounds   --kind mdep --m 1 --d 1 --p 2 --M 1 --sigma 30 --sum-p2 900
//   depclt rate     --u 12 --d 1 --p 2 --integer-p
//   depclt tail     --p 2 --K 1 --n 4096 --t 1,1.5,2
//   depclt verify   --suite all
//   depclt genogram inspect --g "p=[.,1,1,1,4,5,5]; s=[0,2,1,0,-1,2,0]"
//
// Every numeric option can also come from a JSON object passed with --config;
// explicit flags win. Exit codes: 0 ok, 2 config error, 3 verification
// failure, 4 degenerate variance.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "depclt/bounds.hpp"
#include "depclt/combinatorics.hpp"
#include "depclt/cumulant_matching.hpp"
#include "depclt/errors.hpp"
#include "depclt/fields.hpp"
#include "depclt/genogram.hpp"
#include "depclt/wasserstein.hpp"
#include "json.hpp"

using namespace depclt;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitDegenerate = 4;
constexpr const char* kCsvHeader = "# depclt v1";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Output goes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("cannot open output file " + path);
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// Fills options that were not given on the command line from a JSON object.
// Keys match long option names without dashes.
void apply_config(CLI::App& cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        CLI::Option* opt = nullptr;
        try {
            opt = cmd.get_option("--" + it.key());
        } catch (const CLI::OptionNotFound&) {
            throw ConfigError("unknown config key '" + it.key() + "'");
        }
        if (opt->count() > 0) continue;
        std::vector<std::string> vals;
        auto as_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (it.value().is_array())
            for (const auto& v : it.value()) vals.push_back(as_text(v));
        else if (it.value().is_boolean())
            vals.push_back(it.value().get<bool>() ? "true" : "false");
        else
            vals.push_back(as_text(it.value()));
        opt->clear();
        for (const auto& v : vals) opt->add_result(v);
        opt->run_callback();
    }
}

NoiseLaw parse_noise(const std::string& s) {
    static const std::map<std::string, NoiseKind> kinds{{"normal", NoiseKind::Normal},
                                                        {"rademacher", NoiseKind::Rademacher},
                                                        {"exponential", NoiseKind::CenteredExponential},
                                                        {"uniform", NoiseKind::Uniform}};
    auto it = kinds.find(s);
    if (it == kinds.end()) throw ConfigError("unknown noise '" + s + "'");
    return NoiseLaw{it->second};
}

struct ModelArgs {
    std::string model = "window";
    std::string kernel = "mean";
    std::string noise = "normal";
    int d = 1;
    int m = 1;
    int width = 0;
    double decay = 2.0;
    int lags = 512;

    void add(CLI::App* cmd) {
        cmd->add_option("--model", model, "window | linear | ustat")->capture_default_str();
        cmd->add_option("--kernel", kernel, "window: mean|sum|product; ustat: sumproduct|sum|product")
            ->capture_default_str();
        cmd->add_option("--noise", noise, "normal | rademacher | exponential | uniform")->capture_default_str();
        cmd->add_option("--d", d, "lattice dimension")->capture_default_str();
        cmd->add_option("--m", m, "dependence range")->capture_default_str();
        cmd->add_option("--width", width, "window width (0: 2m+1)")->capture_default_str();
        cmd->add_option("--decay", decay, "linear model decay exponent")->capture_default_str();
        cmd->add_option("--lags", lags, "linear model truncation")->capture_default_str();
    }

    // Size n means |T| = n for lattice models (n^{1/d} per side) and n base
    // variables for U-statistics.
    std::pair<FieldModel, IndexSet> build(int n) const {
        const NoiseLaw nl = parse_noise(noise);
        if (model == "window") {
            MovingWindow mw;
            mw.d = d;
            mw.m = m;
            mw.width = width;
            mw.noise = nl;
            if (kernel == "mean") mw.kernel = WindowKernel::Mean;
            else if (kernel == "sum") mw.kernel = WindowKernel::Sum;
            else if (kernel == "product") mw.kernel = WindowKernel::Product;
            else throw ConfigError("unknown window kernel '" + kernel + "'");
            const int side = static_cast<int>(std::lround(std::pow(n, 1.0 / d)));
            if (std::llround(std::pow(side, d)) != n) throw ConfigError("size is not a perfect d-th power");
            return {mw, IndexSet::box(std::vector<int>(d, side))};
        }
        if (model == "linear") {
            if (d != 1) throw ConfigError("the linear model lives on a line");
            return {LinearCausal{decay, lags, nl}, IndexSet::line(n)};
        }
        if (model == "ustat") {
            UStat u;
            u.n = n;
            u.base = nl;
            if (kernel == "sumproduct" || kernel == "mean") u.kernel = UKernel::SumProduct;
            else if (kernel == "sum") u.kernel = UKernel::Sum;
            else if (kernel == "product") u.kernel = UKernel::Product;
            else throw ConfigError("unknown U-statistic kernel '" + kernel + "'");
            return {u, IndexSet::line(n)};
        }
        throw ConfigError("unknown model '" + model + "'");
    }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    ModelArgs model;
    std::vector<int> sizes{256, 512, 1024, 2048};
    long reps = 10000;
    double p = 1.0;
    std::uint64_t seed = 1;
    int threads = 1;
    int batches = 8;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& os) {
    if (a.reps < 100) throw ConfigError("simulate needs --reps >= 100");
    if (a.sizes.empty()) throw ConfigError("simulate needs --sizes");
    for (std::size_t i = 1; i < a.sizes.size(); ++i)
        if (a.sizes[i] <= a.sizes[i - 1]) throw ConfigError("--sizes must be strictly increasing");
    if (a.batches < 2 || a.reps / a.batches < 2) throw ConfigError("--batches must split the replicates");

    os << kCsvHeader << '\n' << "size,p,wp,floor,se\n";
    std::vector<double> xs, ys;
    for (std::size_t si = 0; si < a.sizes.size(); ++si) {
        const int n = a.sizes[si];
        auto [model, T] = a.model.build(n);
        SumSampler sampler(model, T);
        const std::uint64_t stream = splitmix64(a.seed ^ (0x9e37ull * (si + 1)));
        std::vector<double> draws = sampler.draw_many(stream, static_cast<std::size_t>(a.reps), a.threads);

        // Spread of the estimator over batches, scaled to the full sample.
        const std::size_t per = draws.size() / a.batches;
        std::vector<double> batch_vals;
        for (int b = 0; b < a.batches; ++b) {
            std::vector<double> part(draws.begin() + b * per, draws.begin() + (b + 1) * per);
            std::sort(part.begin(), part.end());
            batch_vals.push_back(wp_vs_normal(part, a.p));
        }
        double mean = 0.0, var = 0.0;
        for (double v : batch_vals) mean += v / batch_vals.size();
        for (double v : batch_vals) var += (v - mean) * (v - mean) / (batch_vals.size() - 1);
        const double se = std::sqrt(var / a.batches);

        std::sort(draws.begin(), draws.end());
        const double wp = wp_vs_normal(draws, a.p);

        // Floor: the same estimator applied to exact normal draws.
        std::vector<double> ref(draws.size());
        Rng rng = make_stream(stream, ~0ull);
        NoiseLaw normal{NoiseKind::Normal};
        normal.fill(rng, ref);
        std::sort(ref.begin(), ref.end());
        const double floor = wp_vs_normal(ref, a.p);

        os << n << ',' << format_real(a.p) << ',' << format_real(wp) << ',' << format_real(floor) << ','
           << format_real(se) << '\n';
        xs.push_back(n);
        ys.push_back(wp);
    }
    if (xs.size() >= 3) {
        const RateFit fit = fit_rate(xs, ys);
        os << "slope," << format_real(a.p) << ',' << format_real(fit.slope) << ',' << format_real(fit.intercept)
           << ',' << format_real(fit.stderr_slope) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
    std::string kind = "mdep";
    std::vector<double> R1, Rw;
    double p = 2.0, omega = 1.0, M = 1.0, sigma = 1.0, sum_w2 = 0.0, sum_p2 = 0.0;
    int m = 1, d = 1;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& os) {
    BoundReport rep;
    if (a.kind == "local")
        rep = wp_bracket_local(a.R1, a.Rw, a.p, a.omega);
    else if (a.kind == "ld2")
        rep = wp_bracket_ld2(a.M, a.sigma, a.sum_w2, a.sum_p2, a.p, a.omega);
    else if (a.kind == "mdep")
        rep = mdep_bracket(a.m, a.d, a.p, a.omega, a.M, a.sigma, a.sum_p2);
    else
        throw ConfigError("unknown bound kind '" + a.kind + "'");
    os << to_json(rep) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// rate

int cmd_rate(double u, int d, double p, bool integer_p, std::ostream& os) {
    const RateResult r = rate_exponent(u, d, p, integer_p);
    os << kCsvHeader << '\n' << "u,d,p,integer_p,beta,label,eps_loss,guaranteed\n";
    os << format_real(u) << ',' << d << ',' << format_real(p) << ',' << integer_p << ',' << format_real(r.beta)
       << ',' << r.label << ',' << r.eps_loss << ',' << r.guaranteed << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// tail

struct TailArgs {
    double p = 2.0, K = 1.0, n = 4096;
    std::vector<double> t{1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    bool as_printed = false;
    bool monte_carlo = false;
    ModelArgs model;
    long reps = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
};

int cmd_tail(const TailArgs& a, std::ostream& os) {
    const TailPenalty pen = a.as_printed ? TailPenalty::AsPrinted : TailPenalty::Markov;
    std::vector<double> draws;
    if (a.monte_carlo) {
        if (a.reps < 100) throw ConfigError("tail needs --reps >= 100");
        auto [model, T] = a.model.build(static_cast<int>(a.n));
        draws = SumSampler(model, T).draw_many(a.seed, static_cast<std::size_t>(a.reps), a.threads);
    }
    os << kCsvHeader << '\n' << "t,bound,rho,mc_prob,mc_se\n";
    for (double t : a.t) {
        const TailResult tr = tail_bound(t, a.p, a.K, a.n, pen);
        os << format_real(t) << ',' << format_real(tr.bound) << ',' << format_real(tr.rho) << ',';
        if (a.monte_carlo) {
            const double hits = static_cast<double>(std::count_if(draws.begin(), draws.end(), [&](double w) { return w >= t; }));
            const double prob = hits / draws.size();
            os << format_real(prob) << ',' << format_real(std::sqrt(prob * (1.0 - prob) / draws.size()));
        } else {
            os << ',';
        }
        os << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

// Small exact fields shared by the verification suites.
std::vector<TinyField> regression_fields() {
    std::vector<TinyField> out;
    const auto rad = DiscreteVar::rademacher();
    const auto skew = DiscreteVar::two_point(2.0, -1.0, 1.0 / 3.0);
    out.emplace_back(std::vector<DiscreteVar>{rad, rad, rad}, IndexSet::line(3),
                     [](int i, std::span<const double> b) { return b[i]; });
    out.emplace_back(std::vector<DiscreteVar>{rad, skew, rad, skew}, IndexSet::line(3),
                     [](int i, std::span<const double> b) { return b[i] + 0.5 * b[i + 1] + 0.3 * b[i] * b[i + 1]; });
    out.emplace_back(std::vector<DiscreteVar>{skew, rad, skew, rad, skew}, IndexSet::line(4),
                     [](int i, std::span<const double> b) { return b[i] * b[i + 1] + 0.4 * b[i] + 0.2 * b[0] * b[4]; });
    return out;
}

struct VerifyLine {
    std::string name;
    double residual;
};

std::vector<VerifyLine> run_suite(const std::string& suite, double inject) {
    static const std::vector<std::string> known{"all", "wfw_polynomial", "step1", "step2", "wfw", "matching"};
    if (std::find(known.begin(), known.end(), suite) == known.end())
        throw ConfigError("unknown suite '" + suite + "'");
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    std::vector<VerifyLine> lines;
    const auto fields = regression_fields();
    const auto sine = SmoothFunction::sine();
    const auto poly = SmoothFunction::polynomial({0.5, -1.0, 0.25, 0.3, -0.1});

    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        const auto& tf = fields[fi];
        const std::string tag = "field" + std::to_string(fi);
        SumOptions opt;
        opt.m = fi == 2 ? 0 : 1;
        if (want("wfw_polynomial")) lines.push_back({tag + ".wfw_polynomial", verify_wfw_polynomial(tf, poly, 4)});
        if (want("step1"))
            for (const auto& g : enumerate(3, 2).all)
                lines.push_back({tag + ".step1 " + g.str(), verify_step1(g, tf, opt, sine).residual()});
        if (want("step2"))
            for (const auto& g : enumerate(3, 2).all)
                lines.push_back({tag + ".step2 " + g.str(), verify_step2(g, tf, opt, sine, 2).residual()});
        if (want("wfw")) {
            const WfwResidual w = verify_wfw(tf, opt, 2, sine);
            lines.push_back({tag + ".wfw cumulant form", w.cumulant_form.residual()});
            lines.push_back({tag + ".wfw adjusted form", w.tilde_form.residual()});
        }
        if (want("matching")) {
            const int k = 3;
            std::vector<double> u;
            for (int j = 1; j <= k - 1; ++j) u.push_back(cumulant_of_sum(tf, j + 2));
            MatchingProblem prob{u, 2.5, 1.0, 12};
            try {
                const MatchingResult res = match(prob);
                const MatchingResiduals r = verify_matching(tf, res);
                lines.push_back({tag + ".matching cumulant scaling", r.cumulant_scaling});
                lines.push_back({tag + ".matching prefix", r.prefix_roundtrip});
            } catch (const DomainError&) {
                // u too large for this tiny field; matching is not defined there.
            }
        }
    }
    if (inject != 0.0 && !lines.empty()) lines.front().residual += std::abs(inject);
    return lines;
}

int cmd_verify(const std::string& suite, double tol, double inject, std::ostream& os) {
    const auto lines = run_suite(suite, inject);
    bool ok = true;
    for (const auto& l : lines) {
        const bool pass = l.residual < tol;
        ok &= pass;
        os << (pass ? "PASS " : "FAIL ") << l.name << " residual=" << format_real(l.residual) << '\n';
    }
    os << (ok ? "PASS" : "FAIL") << " suite " << suite << " (" << lines.size() << " checks, tol "
       << format_real(tol) << ")\n";
    return ok ? 0 : kExitVerify;
}

// ---------------------------------------------------------------------------
// genogram

std::string rational_str(const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int cmd_genogram(const std::string& action, int k, int cap, const std::string& gtext, const std::string& htext,
                 std::ostream& os) {
    json out;
    if (action == "enumerate") {
        const auto cls = enumerate(k, cap);
        out["order"] = k;
        out["id_cap"] = cap;
        out["all"] = cls.all.size();
        out["positive"] = cls.positive.size();
        out["nonpositive"] = cls.nonpositive.size();
        out["last_positive"] = cls.last_positive.size();
        out["ordered_trees"] = count_ordered_trees(k);
    } else if (action == "inspect") {
        const Genogram g = Genogram::parse(gtext);
        out["genogram"] = g.str();
        out["order"] = g.size();
        out["leaves"] = g.leaves();
        out["negatives"] = g.negatives();
        json verts = json::array();
        for (int j = 1; j <= g.size(); ++j) {
            verts.push_back({{"label", j},
                             {"parent", j == 1 ? 0 : g.parent(j)},
                             {"id", g.id(j)},
                             {"progenitor", progenitor(g, j)},
                             {"u", u_index(g, j)}});
        }
        out["vertices"] = verts;
        json branches = json::array();
        for (const auto& br : branch_structure(g)) branches.push_back({{"first", br.first}, {"blocks", br.blocks.parts}});
        out["branches"] = branches;
        json sites = json::array();
        for (const auto& s : growth_sites(g)) {
            json site{{"vertex", s.vertex}};
            if (s.id_limit) site["max_id"] = *s.id_limit - 1;
            else site["max_id"] = "unbounded";
            sites.push_back(site);
        }
        out["growth_sites"] = sites;
        out["b_H"] = rational_str(b_coefficient(g));
    } else if (action == "coeff") {
        const Genogram h = Genogram::parse(htext);
        const Genogram g = gtext.empty() ? Genogram{} : Genogram::parse(gtext);
        const GenCoefficients c = coefficients(h, g);
        out["H"] = h.str();
        out["G"] = g.str();
        out["a"] = rational_str(c.a);
        out["b"] = rational_str(c.b);
        out["gamma"] = c.gamma;
        out["tau"] = c.tau;
    } else {
        throw ConfigError("unknown genogram action '" + action + "'");
    }
    os << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wasserstein-p CLT bounds for dependent data: simulation, bounds and exact identities"};
    app.require_subcommand(1);
    std::string out_path, config_path;
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--config", config_path, "JSON config; flags override its entries");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo W_p between W_n and N(0,1) across sizes");
    sim.model.add(simulate);
    simulate->add_option("--sizes", sim.sizes, "strictly increasing sizes")->delimiter(',')->capture_default_str();
    simulate->add_option("--reps", sim.reps, "replicates per size (>= 100)")->capture_default_str();
    simulate->add_option("--p", sim.p, "Wasserstein order")->capture_default_str();
    simulate->add_option("--seed", sim.seed)->capture_default_str();
    simulate->add_option("--threads", sim.threads)->capture_default_str();
    simulate->add_option("--batches", sim.batches, "batches for the standard error")->capture_default_str();

    BoundsArgs bnd;
    auto* bounds = app.add_subcommand("bounds", "evaluate a Wasserstein bracket (unit constants)");
    bounds->add_option("--kind", bnd.kind, "local | ld2 | mdep")->capture_default_str();
    bounds->add_option("--R1", bnd.R1, "R_{j,1} for j < ceil(p)")->delimiter(',');
    bounds->add_option("--Rw", bnd.Rw, "R_{j,omega} for j <= ceil(p)")->delimiter(',');
    bounds->add_option("--p", bnd.p)->capture_default_str();
    bounds->add_option("--omega", bnd.omega)->capture_default_str();
    bounds->add_option("--M", bnd.M, "neighborhood size bound")->capture_default_str();
    bounds->add_option("--sigma", bnd.sigma)->capture_default_str();
    bounds->add_option("--sum-w2", bnd.sum_w2, "sum E|X|^{omega+2}")->capture_default_str();
    bounds->add_option("--sum-p2", bnd.sum_p2, "sum E|X|^{p+2}")->capture_default_str();
    bounds->add_option("--m", bnd.m)->capture_default_str();
    bounds->add_option("--d", bnd.d)->capture_default_str();

    double rate_u = 0.0, rate_p = 2.0;
    int rate_d = 1;
    bool rate_int = false;
    auto* rate = app.add_subcommand("rate", "W_p rate exponent under polynomial mixing");
    rate->add_option("--u", rate_u, "mixing decay exponent (required, here or in --config)");
    rate->add_option("--d", rate_d)->capture_default_str();
    rate->add_option("--p", rate_p)->capture_default_str();
    rate->add_flag("--integer-p", rate_int, "use the integer-p table");

    TailArgs tl;
    auto* tail = app.add_subcommand("tail", "normal-approximation tail bound on a t grid");
    tail->add_option("--p", tl.p)->capture_default_str();
    tail->add_option("--K", tl.K, "W_p scale: W_p(W_n, Z) <= K / sqrt(n)")->capture_default_str();
    tail->add_option("--n", tl.n)->capture_default_str();
    tail->add_option("--t", tl.t, "thresholds")->delimiter(',');
    tail->add_flag("--as-printed", tl.as_printed, "use the rho t penalty instead of (1 - rho) t");
    tail->add_flag("--monte-carlo", tl.monte_carlo, "add Monte Carlo P(W_n >= t) for the model at size n");
    tl.model.add(tail);
    tail->add_option("--reps", tl.reps)->capture_default_str();
    tail->add_option("--seed", tl.seed)->capture_default_str();
    tail->add_option("--threads", tl.threads)->capture_default_str();

    std::string suite = "all";
    double tol = 1e-9, inject = 0.0;
    auto* verify = app.add_subcommand("verify", "exact identity suites on regression fields");
    verify->add_option("--suite", suite, "all | wfw_polynomial | step1 | step2 | wfw | matching")
        ->capture_default_str();
    verify->add_option("--tol", tol)->capture_default_str();
    verify->add_option("--inject", inject, "add this amount to the first residual");

    std::string action, gtext, htext;
    int gk = 4, gcap = 2;
    auto* geno = app.add_subcommand("genogram", "enumerate | inspect | coeff");
    geno->add_option("action", action)->required();
    geno->add_option("--k", gk, "order for enumerate")->capture_default_str();
    geno->add_option("--cap", gcap, "identifier cap for enumerate")->capture_default_str();
    geno->add_option("--g", gtext, "genogram text, e.g. \"p=[.,1]; s=[0,1]\"");
    geno->add_option("--ext", htext, "extension H for coeff");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        apply_config(*cmd, config_path);
        Sink sink(out_path);
        std::ostream& os = sink.os();
        if (cmd == simulate) return cmd_simulate(sim, os);
        if (cmd == bounds) return cmd_bounds(bnd, os);
        if (cmd == rate) return cmd_rate(rate_u, rate_d, rate_p, rate_int, os);
        if (cmd == tail) return cmd_tail(tl, os);
        if (cmd == verify) return cmd_verify(suite, tol, inject, os);
        if (cmd == geno) return cmd_genogram(action, gk, gcap, gtext, htext, os);
    } catch (const DegeneracyError& e) {
        std::cerr << "degenerate: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ConfigError& e) {
        std::cerr << "config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CLI::Error& e) {
        std::cerr << "config: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
