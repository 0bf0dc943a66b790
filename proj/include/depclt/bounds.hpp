#pragma once

// Remainder terms and the Wasserstein brackets built from them, S/T/R nested
// sums on exact fields, mixing-rate quantities, and the normal tail bound.
//
// Brackets are reported with every theorem constant set to 1; only their
// scaling is meaningful.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "depclt/fields.hpp"
#include "depclt/smooth_function.hpp"

namespace depclt {

// t_1..t_k with t_1 = 0 and |t_j| <= j - 1 (stored 0-based).
using TSequence = std::vector<int>;

void validate_tsequence(const TSequence& t);

// Nested sums over i_j in N_j where N_1 = T, N_j = N(i_1..i_{|t_j|}) or empty if
// t_j = 0; positive t_j open a new expectation block. Values use X / sigma.
double s_sum(const TinyField& tf, const TSequence& t, int m);
double t_sum(const TinyField& tf, const TSequence& t, int s, const SmoothFunction& f, int m);
double r_sum(const TinyField& tf, const TSequence& t, double omega, int m);

// All t_{1..len} with t_{j+1} = +-j, t_2 < 0 and no two consecutive positives.
std::vector<TSequence> alternating_sequences(int len);

// R_{k,omega}: sum over restricted compositions of k+2 of compositional
// absolute moments along m-neighborhood chains.
double remainder_R(const TinyField& tf, int k, double omega, int m);
// Same quantity as the sum of r_sum over alternating_sequences(k+2).
double remainder_R_aggregated(const TinyField& tf, int k, double omega, int m);
// Closed form for n i.i.d. summands (singleton neighborhoods); abs_moment(r) = E|X|^r.
double remainder_R_iid(int k, double omega, double n, double variance,
                       const std::function<double(double)>& abs_moment);

struct BoundReport {
    std::string name;
    double bracket = 0.0;
    std::vector<std::pair<std::string, double>> components;
    bool constant_known = false;
};

std::string to_json(const BoundReport& r);

double remainder_bracket_ld(double M, int k, double omega, double sigma, double sum_abs_moment);

// R1[j-1] = R_{j,1} for j < ceil(p); Rw[j-1] = R_{j,omega} for j <= ceil(p).
BoundReport wp_bracket_local(const std::vector<double>& R1, const std::vector<double>& Rw, double p, double omega);

// sum_w2 = sum E|X|^{omega+2}, sum_p2 = sum E|X|^{p+2}.
BoundReport wp_bracket_ld2(double M_n, double sigma, double sum_w2, double sum_p2, double p, double omega);

BoundReport mdep_bracket(int m, int d, double p, double omega, double M, double sigma, double sum_p2);

double cumulant_bracket_local(double R_k1);

struct MixingProfile {
    std::vector<double> alphas;  // alpha_1..alpha_L, zero beyond L
    bool poly = false;           // alpha_l = C l^{-u} instead
    double C = 1.0;
    double u = 1.0;

    static MixingProfile explicit_list(std::vector<double> a);
    static MixingProfile poly_decay(double C, double u);
    double alpha(long l) const;
};

double cumulant_bracket_mixing(double T_size, int d, int k, double r, int m, const MixingProfile& a);
double mixing_M1(double T_size, int d, double p, double omega, double r, const MixingProfile& a);
double mixing_M2(double T_size, int d, double p, double r, int m, double delta, const MixingProfile& a);

struct RateResult {
    double beta = 0.0;
    std::string label;
    bool eps_loss = false;    // boundary case: the rate holds for beta - eps, any eps > 0
    bool guaranteed = true;   // false when u falls outside every case
};

// W_p = O(|T|^{-beta}) under polynomial mixing decay with exponent u.
RateResult rate_exponent(double u, int d, double p, bool integer_p, double eps = 0.01);

enum class TailPenalty {
    Markov,     // K^p / ((1 - rho) t sqrt(n))^p, from P(|W - Z| >= (1 - rho) t)
    AsPrinted,  // K^p / (rho t sqrt(n))^p
};

struct TailResult {
    double bound = 0.0;
    double rho = 0.0;
};

double tail_objective(double rho, double t, double p, double K, double n, TailPenalty pen);
TailResult tail_bound(double t, double p, double K, double n, TailPenalty pen = TailPenalty::Markov);

// |E[W f(W)] - sum_{j=1}^k kappa_{j+1}/j! E[f^{(j)}(W)]| for polynomial f of degree <= k.
double verify_wfw_polynomial(const TinyField& tf, const SmoothFunction& f, int k);

}  // namespace depclt
