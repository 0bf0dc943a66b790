#pragma once

// Constructive cumulant matching: pick a sample size q so that rescaled target
// cumulants stay small, turn them into moments, extend the moment sequence,
// and certify it through Hankel determinants.
//
// Internals run in long double: extension moments grow like C^{j+2} per step
// and leave the double range by order 12.

#include <optional>
#include <string>
#include <vector>

#include "depclt/fields.hpp"

namespace depclt {

struct MatchingProblem {
    std::vector<double> u;  // u_1..u_{k-1}
    double p = 2.0;
    double C_p = 0.25;
    int extension_order = 12;

    int k() const;
};

// nullopt stands for the normal branch (all u_j = 0).
std::optional<long long> choose_q(const std::vector<double>& u, double C_p);

// kappa~_{j+2} = q^{j/2} u_j for j = 1..k-1.
std::vector<double> target_cumulants(const std::vector<double>& u, long long q);

struct MatchingResult {
    std::optional<long long> q;              // empty: normal branch
    std::vector<double> kappa_tilde;          // kappa~_3..kappa~_{k+1}
    std::vector<long double> mu_tilde;        // mu~_0..mu~_N
    std::vector<long double> hankel;          // H_0..H_{N/2}
    bool feasible = false;
    int failed_at = -1;                       // first j with H_j < 1 - 1e-9
    bool exceeds_cp = false;                  // some |kappa~_{j+2}| > C_p^j
};

// Initial moments from Bell polynomials of (0, 1, kappa~_3, ..), an appended
// zero when k is odd, then even extension moments (j+1)(j+1)! C^{j+2} + 1 with
// C the running bound on |mu~|, odd ones zero, up to `extension_order`.
MatchingResult build_moment_sequence(const std::vector<double>& kappa_tilde, int k, int extension_order,
                                     double C_p = 1.0);

// Full pipeline for a problem.
MatchingResult match(const MatchingProblem& prob);

struct MatchingResiduals {
    double cumulant_scaling = 0.0;  // max_j |kappa~_{j+2} / q^{j/2} - kappa_{j+2}(W)|
    double prefix_roundtrip = 0.0;  // max_j |kappa_j(mu~) - (0, 1, kappa~_3, ..)_j|
};

MatchingResiduals verify_matching(const TinyField& tf, const MatchingResult& result);

std::string to_json(const MatchingResult& r);

}  // namespace depclt
