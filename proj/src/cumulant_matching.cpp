#include "depclt/cumulant_matching.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

#include "depclt/combinatorics.hpp"
#include "depclt/errors.hpp"
#include "depclt/fields.hpp"

namespace depclt {

int MatchingProblem::k() const { return static_cast<int>(std::ceil(p)); }

std::optional<long long> choose_q(const std::vector<double>& u, double C_p) {
    if (!(C_p > 0.0 && C_p <= 1.0)) throw DomainError("choose_q: C_p must lie in (0, 1]");
    long double best = -1.0L;
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        if (u[idx] == 0.0) continue;
        const long double j = static_cast<long double>(idx + 1);
        const long double v = static_cast<long double>(C_p) * C_p *
                              std::pow(std::abs(static_cast<long double>(u[idx])), -2.0L / j);
        if (best < 0.0L || v < best) best = v;
    }
    if (best < 0.0L) return std::nullopt;
    // snap values that are integers up to rounding, e.g. 0.01^{-2}
    long double q = std::floor(best);
    if (best - q > 1.0L - 1e-12L * best) q += 1.0L;
    if (q < 1.0L) throw DomainError("choose_q: u too large for matching at this n");
    return static_cast<long long>(q);
}

std::vector<double> target_cumulants(const std::vector<double>& u, long long q) {
    std::vector<double> out(u.size());
    for (std::size_t idx = 0; idx < u.size(); ++idx)
        out[idx] = static_cast<double>(std::pow(static_cast<long double>(q), (idx + 1) / 2.0L) * u[idx]);
    return out;
}

MatchingResult build_moment_sequence(const std::vector<double>& kappa_tilde, int k, int extension_order, double C_p) {
    if (k < 2) throw DomainError("build_moment_sequence: k must be at least 2");
    if (static_cast<int>(kappa_tilde.size()) != k - 1)
        throw DomainError("build_moment_sequence: need kappa~_3..kappa~_{k+1}");
    MatchingResult res;
    res.kappa_tilde = kappa_tilde;
    for (int j = 1; j <= k - 1; ++j)
        if (std::abs(kappa_tilde[j - 1]) > std::pow(C_p, j) * (1.0 + 1e-12)) res.exceeds_cp = true;

    // cumulants (0, 1, kappa~_3, .., kappa~_{k+1}) give mu~_0..mu~_{k+1}
    std::vector<long double> kappa{0.0L, 1.0L};
    for (double v : kappa_tilde) kappa.push_back(v);
    std::vector<long double> mu = moments_from_cumulants(kappa);
    if (k % 2 == 1) mu.push_back(0.0L);
    const int J = static_cast<int>(mu.size() - 1) / 2;  // sequence ends at order 2J+1

    auto hankel_ok = [&](const std::vector<long double>& seq, int upto) {
        std::vector<long double> even(seq.begin(), seq.begin() + 2 * upto + 1);
        auto H = hankel_determinants(even);
        for (int j = 0; j <= upto; ++j)
            if (H[j] < 1.0L - 1e-9L) return j;
        return -1;
    };

    if (const int bad = hankel_ok(mu, J); bad >= 0) {
        res.failed_at = bad;
        res.mu_tilde = mu;
        std::vector<long double> even(mu.begin(), mu.begin() + 2 * J + 1);
        res.hankel = hankel_determinants(even);
        return res;
    }

    for (int j = J; 2 * j + 2 <= extension_order; ++j) {
        long double C = 1.0L;
        for (long double v : mu) C = std::max(C, std::abs(v));
        long double fact = 1.0L;
        for (int r = 2; r <= j + 1; ++r) fact *= r;
        mu.resize(2 * j + 2);
        mu.push_back((j + 1) * fact * std::pow(C, static_cast<long double>(j + 2)) + 1.0L);
        if (2 * j + 3 <= extension_order) mu.push_back(0.0L);
        if (const int bad = hankel_ok(mu, j + 1); bad >= 0) {
            res.failed_at = bad;
            break;
        }
    }
    if (static_cast<int>(mu.size()) - 1 > extension_order) mu.resize(extension_order + 1);
    res.mu_tilde = mu;
    const int top = static_cast<int>(mu.size() - 1) / 2;
    std::vector<long double> even(mu.begin(), mu.begin() + 2 * top + 1);
    res.hankel = hankel_determinants(even);
    res.feasible = res.failed_at < 0;
    return res;
}

MatchingResult match(const MatchingProblem& prob) {
    const int k = prob.k();
    if (static_cast<int>(prob.u.size()) != k - 1) throw DomainError("match: u must have ceil(p) - 1 entries");
    const auto q = choose_q(prob.u, prob.C_p);
    std::vector<double> kt(k - 1, 0.0);
    if (q) kt = target_cumulants(prob.u, *q);
    MatchingResult res = build_moment_sequence(kt, k, prob.extension_order, prob.C_p);
    res.q = q;
    return res;
}

MatchingResiduals verify_matching(const TinyField& tf, const MatchingResult& result) {
    MatchingResiduals out;
    const int k = static_cast<int>(result.kappa_tilde.size()) + 1;
    for (int j = 1; j <= k - 1; ++j) {
        const double kw = cumulant_of_sum(tf, j + 2);
        const double scaled =
            result.q ? result.kappa_tilde[j - 1] / std::pow(static_cast<double>(*result.q), j / 2.0) : 0.0;
        out.cumulant_scaling = std::max(out.cumulant_scaling, std::abs(scaled - kw));
    }
    std::vector<long double> prefix(result.mu_tilde.begin(), result.mu_tilde.begin() + (k + 2));
    const auto kappa = cumulants_from_moments(prefix);
    std::vector<long double> want{0.0L, 1.0L};
    for (double v : result.kappa_tilde) want.push_back(v);
    for (int j = 0; j <= k; ++j)
        out.prefix_roundtrip = std::max(out.prefix_roundtrip, static_cast<double>(std::abs(kappa[j] - want[j])));
    return out;
}

namespace {

// JSON numbers are doubles; values outside that range are written as strings.
nlohmann::ordered_json ld_value(long double v) {
    if (std::isfinite(static_cast<double>(v))) return static_cast<double>(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", v);
    return std::string(buf);
}

}  // namespace

std::string to_json(const MatchingResult& r) {
    nlohmann::ordered_json j;
    if (r.q)
        j["q"] = *r.q;
    else
        j["q"] = "NORMAL";
    j["kappa_tilde"] = r.kappa_tilde;
    auto& mu = j["mu_tilde"] = nlohmann::ordered_json::array();
    for (auto v : r.mu_tilde) mu.push_back(ld_value(v));
    auto& H = j["hankel"] = nlohmann::ordered_json::array();
    for (auto v : r.hankel) H.push_back(ld_value(v));
    j["feasible"] = r.feasible;
    j["failed_at"] = r.failed_at;
    j["exceeds_cp"] = r.exceeds_cp;
    return j.dump();
}

}  // namespace depclt
