#include "depclt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

#include "depclt/combinatorics.hpp"
#include "depclt/errors.hpp"
#include "depclt/wasserstein.hpp"

namespace depclt {

void validate_tsequence(const TSequence& t) {
    if (t.empty()) throw DomainError("t-sequence must be nonempty");
    if (t[0] != 0) throw DomainError("t-sequence must start with t_1 = 0");
    for (std::size_t j = 1; j < t.size(); ++j)
        if (std::abs(t[j]) > static_cast<int>(j)) throw DomainError("t-sequence needs |t_j| <= j - 1");
}

namespace {

IdSet prefix_neighborhood(const TinyField& tf, const std::vector<int>& prefix, int len, int m) {
    IdSet J(prefix.begin(), prefix.begin() + len);
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    return mdep_neighborhood(tf.index_set(), m, J);
}

// Index range of position j (0-based) given the chosen prefix.
IdSet range_at(const TinyField& tf, const TSequence& t, std::size_t j, const std::vector<int>& prefix, int m) {
    if (j == 0) {
        IdSet all(tf.size());
        for (int i = 0; i < tf.size(); ++i) all[i] = i;
        return all;
    }
    if (t[j] == 0) return {};
    return prefix_neighborhood(tf, prefix, std::abs(t[j]), m);
}

RandomVar abs_of(const RandomVar& y) {
    RandomVar out(y.size());
    for (std::size_t w = 0; w < y.size(); ++w) out[w] = std::abs(y[w]);
    return out;
}

RandomVar pow_of(const RandomVar& y, double e) {
    RandomVar out(y.size());
    for (std::size_t w = 0; w < y.size(); ++w) out[w] = std::pow(y[w], e);
    return out;
}

// Walks the chains i_1, i_2, ... of a t-sequence over the first `positions`
// slots, carrying the product of finished block expectations and the running
// product of the open block. `last_slot` rewrites the variable in the final
// walked slot; `extra`, if set, appends one more slot computed from the whole
// prefix, either continuing the open block or opening its own.
struct ChainWalk {
    const TinyField& tf;
    const TSequence& t;
    int m = 0;
    std::size_t positions = 0;
    bool absolute = false;
    std::function<RandomVar(const std::vector<int>&, const RandomVar&)> last_slot = {};
    std::function<RandomVar(const std::vector<int>&)> extra = {};
    bool extra_new_block = false;

    double run() {
        std::vector<int> prefix;
        return step(0, prefix, 1.0, RandomVar{});
    }

    double finish(const std::vector<int>& prefix, double factor, const RandomVar& cur) const {
        if (!extra) return factor * tf.expect(cur);
        const RandomVar e = extra(prefix);
        if (extra_new_block) return factor * tf.expect(cur) * tf.expect(e);
        return factor * tf.expect(cur * e);
    }

    double step(std::size_t j, std::vector<int>& prefix, double factor, const RandomVar& cur) const {
        double total = 0.0;
        for (int i : range_at(tf, t, j, prefix, m)) {
            RandomVar y = absolute ? abs_of(tf.Y(i)) : tf.Y(i);
            prefix.push_back(i);
            if (j + 1 == positions && last_slot) y = last_slot(prefix, y);
            double f = factor;
            RandomVar next;
            if (j == 0) {
                next = std::move(y);
            } else if (t[j] > 0) {
                f *= tf.expect(cur);
                next = std::move(y);
            } else {
                next = cur * y;
            }
            if (f != 0.0) total += (j + 1 == positions) ? finish(prefix, f, next) : step(j + 1, prefix, f, next);
            prefix.pop_back();
        }
        return total;
    }
};

}  // namespace

double s_sum(const TinyField& tf, const TSequence& t, int m) {
    validate_tsequence(t);
    ChainWalk walk{tf, t, m, t.size()};
    return walk.run();
}

double t_sum(const TinyField& tf, const TSequence& t, int s, const SmoothFunction& f, int m) {
    validate_tsequence(t);
    const int k = static_cast<int>(t.size());
    if (s < 0 || s > k) throw DomainError("t_sum: s must lie in 0..k");
    ChainWalk walk{tf, t, m, t.size()};
    walk.last_slot = [&](const std::vector<int>& prefix, const RandomVar& y) {
        const int keep = k - s;
        RandomVar w;
        if (keep == 0) {
            w = tf.W();
        } else {
            std::vector<char> excluded(tf.size(), 0);
            for (int i : prefix_neighborhood(tf, prefix, keep, m)) excluded[i] = 1;
            w = tf.W_outside(excluded);
        }
        return y * f.derivative(k - 1, w);
    };
    return walk.run();
}

double r_sum(const TinyField& tf, const TSequence& t, double omega, int m) {
    validate_tsequence(t);
    if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("r_sum: omega must lie in (0, 1]");
    const std::size_t k = t.size();
    // the final slot is the omega-power of the absolute sum over N_k
    auto tail = [&](const std::vector<int>& prefix) {
        RandomVar acc(tf.outcomes(), 0.0);
        for (int i : range_at(tf, t, k - 1, prefix, m)) acc = acc + abs_of(tf.Y(i));
        return pow_of(acc, omega);
    };
    if (k == 1) return tf.expect(tail({}));
    ChainWalk walk{tf, t, m, k - 1, true};
    walk.extra = tail;
    walk.extra_new_block = t[k - 1] > 0;
    return walk.run();
}

std::vector<TSequence> alternating_sequences(int len) {
    if (len < 2) throw DomainError("alternating_sequences: length must be at least 2");
    std::vector<TSequence> out;
    TSequence t{0, -1};
    auto rec = [&](auto&& self) -> void {
        const int j = static_cast<int>(t.size());
        if (j == len) {
            out.push_back(t);
            return;
        }
        for (int sign : {-1, 1}) {
            if (sign > 0 && t.back() > 0) continue;
            t.push_back(sign * j);
            self(self);
            t.pop_back();
        }
    };
    rec(rec);
    return out;
}

double remainder_R(const TinyField& tf, int k, double omega, int m) {
    if (k < 1) throw DomainError("remainder_R: k must be at least 1");
    if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("remainder_R: omega must lie in (0, 1]");
    const auto shapes = enumerate_restricted_compositions(k + 2);
    std::vector<int> prefix;
    std::vector<RandomVar> slots;
    double total = 0.0;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == k + 1) {
            RandomVar acc(tf.outcomes(), 0.0);
            for (int i : prefix_neighborhood(tf, prefix, k + 1, m)) acc = acc + abs_of(tf.Y(i));
            slots.push_back(pow_of(acc, omega));
            for (const auto& eta : shapes) total += compositional_expectation(tf.law(), eta, slots);
            slots.pop_back();
            return;
        }
        IdSet range;
        if (depth == 0) {
            for (int i = 0; i < tf.size(); ++i) range.push_back(i);
        } else {
            range = prefix_neighborhood(tf, prefix, depth, m);
        }
        for (int i : range) {
            prefix.push_back(i);
            slots.push_back(abs_of(tf.Y(i)));
            self(self, depth + 1);
            slots.pop_back();
            prefix.pop_back();
        }
    };
    rec(rec, 0);
    return total;
}

double remainder_R_aggregated(const TinyField& tf, int k, double omega, int m) {
    if (k < 1) throw DomainError("remainder_R_aggregated: k must be at least 1");
    double total = 0.0;
    for (const auto& t : alternating_sequences(k + 2)) total += r_sum(tf, t, omega, m);
    return total;
}

double remainder_R_iid(int k, double omega, double n, double variance,
                       const std::function<double(double)>& abs_moment) {
    if (k < 1) throw DomainError("remainder_R_iid: k must be at least 1");
    if (!(n >= 1.0 && variance > 0.0)) throw DomainError("remainder_R_iid: need n >= 1 and positive variance");
    // every chain stays at i_1, so each block is a single absolute moment
    double shape_sum = 0.0;
    for (const auto& eta : enumerate_restricted_compositions(k + 2)) {
        double term = 1.0;
        for (std::size_t b = 0; b + 1 < eta.parts.size(); ++b) term *= abs_moment(eta.parts[b]);
        term *= abs_moment(eta.parts.back() - 1 + omega);
        shape_sum += term;
    }
    const double sigma = std::sqrt(n * variance);
    return n * shape_sum / std::pow(sigma, k + 1 + omega);
}

std::string to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["bracket"] = r.bracket;
    j["constant_known"] = r.constant_known;
    nlohmann::ordered_json comps = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.components) comps[k] = v;
    j["components"] = comps;
    return j.dump();
}

double remainder_bracket_ld(double M, int k, double omega, double sigma, double sum_abs_moment) {
    if (!(M > 0.0 && sigma > 0.0 && sum_abs_moment >= 0.0 && k >= 1))
        throw DomainError("remainder_bracket_ld: inputs must be positive");
    return std::pow(M, k + omega) * std::pow(sigma, -(k + 1 + omega)) * sum_abs_moment;
}

BoundReport wp_bracket_local(const std::vector<double>& R1, const std::vector<double>& Rw, double p, double omega) {
    const int cp = static_cast<int>(std::ceil(p));
    if (static_cast<int>(R1.size()) < cp - 1 || static_cast<int>(Rw.size()) < cp)
        throw DomainError("wp_bracket_local: need R_{j,1} for j < ceil(p) and R_{j,omega} for j <= ceil(p)");
    BoundReport rep{"wp_local", 0.0, {}};
    for (int j = 1; j <= cp - 1; ++j) {
        if (R1[j - 1] < 0.0) throw DomainError("wp_bracket_local: negative remainder");
        const double term = std::pow(R1[j - 1], 1.0 / j);
        rep.components.emplace_back("R_" + std::to_string(j) + ",1^(1/" + std::to_string(j) + ")", term);
        rep.bracket += term;
    }
    for (int j = 1; j <= cp; ++j) {
        if (Rw[j - 1] < 0.0) throw DomainError("wp_bracket_local: negative remainder");
        const double term = std::pow(Rw[j - 1], 1.0 / (j + omega - 1.0));
        rep.components.emplace_back("R_" + std::to_string(j) + ",w^(1/(j+w-1))", term);
        rep.bracket += term;
    }
    return rep;
}

BoundReport wp_bracket_ld2(double M_n, double sigma, double sum_w2, double sum_p2, double p, double omega) {
    if (!(M_n > 0.0 && sigma > 0.0 && sum_w2 >= 0.0 && sum_p2 >= 0.0 && p >= 1.0 && omega > 0.0))
        throw DomainError("wp_bracket_ld2: invalid inputs");
    BoundReport rep{"wp_ld2", 0.0, {}};
    const double a = std::pow(std::pow(M_n, 1.0 + omega) * std::pow(sigma, -(omega + 2.0)) * sum_w2, 1.0 / omega);
    const double b = std::pow(std::pow(M_n, p + 1.0) * std::pow(sigma, -(p + 2.0)) * sum_p2, 1.0 / p);
    rep.components = {{"omega_term", a}, {"p_term", b}};
    rep.bracket = a + b;
    return rep;
}

BoundReport mdep_bracket(int m, int d, double p, double omega, double M, double sigma, double sum_p2) {
    if (m < 1 || d < 1 || !(p >= 1.0 && omega > 0.0 && M >= 0.0 && sigma > 0.0 && sum_p2 >= 0.0))
        throw DomainError("mdep_bracket: invalid inputs");
    BoundReport rep{"mdep", 0.0, {}};
    const double mfac = std::pow(static_cast<double>(m), (1.0 + omega) * d / omega);
    const double Mfac = std::pow(M, (p - omega) / (p * omega));
    const double mom = std::pow(sigma, -(p + 2.0) / p) * std::pow(sum_p2, 1.0 / p);
    rep.components = {{"m_factor", mfac}, {"M_factor", Mfac}, {"moment_factor", mom}};
    rep.bracket = mfac * Mfac * mom;
    return rep;
}

double cumulant_bracket_local(double R_k1) {
    if (R_k1 < 0.0) throw DomainError("cumulant_bracket_local: negative remainder");
    return R_k1;
}

MixingProfile MixingProfile::explicit_list(std::vector<double> a) {
    for (double v : a)
        if (v < 0.0) throw DomainError("mixing coefficients must be nonnegative");
    MixingProfile out;
    out.alphas = std::move(a);
    return out;
}

MixingProfile MixingProfile::poly_decay(double C, double u) {
    if (!(C > 0.0 && u > 0.0)) throw DomainError("poly_decay needs C > 0 and u > 0");
    MixingProfile out;
    out.poly = true;
    out.C = C;
    out.u = u;
    return out;
}

double MixingProfile::alpha(long l) const {
    if (l < 1) throw DomainError("mixing coefficient index must be positive");
    if (poly) return C * std::pow(static_cast<double>(l), -u);
    return l <= static_cast<long>(alphas.size()) ? alphas[l - 1] : 0.0;
}

namespace {

double alpha_pow(const MixingProfile& a, long l, double e) {
    const double v = a.alpha(l);
    return v == 0.0 ? 0.0 : std::pow(v, e);
}

long half_side(double T_size, int d) { return static_cast<long>(std::floor(std::pow(T_size, 1.0 / d) / 2.0)); }

}  // namespace

double cumulant_bracket_mixing(double T_size, int d, int k, double r, int m, const MixingProfile& a) {
    if (k < 2 || d < 1 || m < 0 || !(T_size >= 1.0)) throw DomainError("cumulant_bracket_mixing: invalid inputs");
    if (!(r > k + 1)) throw DomainError("cumulant_bracket_mixing: need r > k + 1");
    double s = std::pow(static_cast<double>(m), d * k);
    const long top = m + 1 + half_side(T_size, d);
    for (long l = m + 1; l <= top; ++l) s += std::pow(static_cast<double>(l), d * k - 1.0) * alpha_pow(a, l, (r - k - 1) / r);
    return std::pow(T_size, -(k - 1) / 2.0) * s;
}

double mixing_M1(double T_size, int d, double p, double omega, double r, const MixingProfile& a) {
    if (d < 1 || !(T_size >= 1.0 && p >= 1.0)) throw DomainError("mixing_M1: invalid inputs");
    if (!(r > p + 2)) throw DomainError("mixing_M1: need r > p + 2");
    const long top = static_cast<long>(std::floor(std::pow(T_size, 1.0 / d)));
    double s = 1.0;
    for (long l = 1; l <= top; ++l)
        s += std::pow(static_cast<double>(l), d * (p + 1) - omega) * alpha_pow(a, l, (r - p - 2) / r);
    return std::pow(T_size, -p / 2.0) * s;
}

double mixing_M2(double T_size, int d, double p, double r, int m, double delta, const MixingProfile& a) {
    if (d < 1 || m < 1 || !(T_size >= 1.0 && p >= 1.0 && delta >= 0.0 && delta <= 1.0))
        throw DomainError("mixing_M2: invalid inputs");
    if (!(r > p + 1 + delta)) throw DomainError("mixing_M2: need r > p + 1 + delta");
    const long top = m + 1 + half_side(T_size, d);
    const double md = static_cast<double>(m);
    double s2 = 0.0, s3 = 0.0;
    for (long l = m + 1; l <= top; ++l) {
        const double L = static_cast<double>(l);
        s2 += std::pow(L, d * delta - delta) * alpha_pow(a, l, (r - p - 1 - delta) / r);
        s3 += std::pow(L, d * p - 1) * alpha_pow(a, l, (r - p - 1) / r);
    }
    return std::pow(T_size, -p / 2.0) * std::pow(md, 2.0 * d * p) +
           std::pow(T_size, -(p - 1 + delta) / 2.0) * std::pow(md, d * p) * s2 + std::pow(T_size, -(p - 1) / 2.0) * s3;
}

RateResult rate_exponent(double u, int d, double p, bool integer_p, double eps) {
    if (!(u > 0.0 && d >= 1 && p > 0.0)) throw DomainError("rate_exponent: need u, d, p > 0");
    if (integer_p && p != std::floor(p)) throw DomainError("rate_exponent: integer table needs integer p");
    RateResult r;
    const double top = d * (p + 1.0);
    if (u > top) {
        r.beta = 0.5;
        r.label = "u>d(p+1)";
        return r;
    }
    if (u == top) {
        r.beta = 0.5 - eps;
        r.label = "u=d(p+1)";
        r.eps_loss = true;
        return r;
    }
    if (!integer_p) {
        if (u > d * (p / 2.0 + 1.0)) {
            r.beta = 0.5 - ((p + 1.0) / p - u / (d * p));
            r.label = "d(p/2+1)<u<d(p+1)";
            return r;
        }
    } else {
        const double dp = d * p;
        if (u > dp) {
            r.beta = 0.5 - std::min((p + 1.0) / p - u / dp, d / (u + dp));
            r.label = "dp<u<d(p+1)";
            return r;
        }
        if (u == dp) {
            r.beta = 0.5 - (1.0 / (2.0 * p) + eps);
            r.label = "u=dp";
            r.eps_loss = true;
            return r;
        }
        if (u > top / 2.0) {
            r.beta = 0.5 - ((2.0 * p + 1.0) / (2.0 * p) - u / dp);
            r.label = "d(p+1)/2<u<dp";
            return r;
        }
    }
    r.beta = 0.0;
    r.label = "no guarantee";
    r.guaranteed = false;
    return r;
}

double tail_objective(double rho, double t, double p, double K, double n, TailPenalty pen) {
    const double gap = pen == TailPenalty::Markov ? (1.0 - rho) : rho;
    const double penalty = K == 0.0 ? 0.0 : std::pow(K / (gap * t * std::sqrt(n)), p);
    return normal_ccdf(rho * t) + penalty;
}

TailResult tail_bound(double t, double p, double K, double n, TailPenalty pen) {
    if (!(t > 0.0)) throw DomainError("tail_bound: t must be positive");
    if (!(p >= 1.0 && K >= 0.0 && n >= 1.0)) throw DomainError("tail_bound: need p >= 1, K >= 0, n >= 1");
    constexpr double lo = 1e-3, hi = 1.0 - 1e-6;
    auto obj = [&](double rho) { return tail_objective(rho, t, p, K, n, pen); };

    // coarse scan to locate the basin, then golden-section inside it
    constexpr int grid = 400;
    int best = 0;
    double best_val = obj(lo);
    for (int g = 1; g <= grid; ++g) {
        const double v = obj(lo + (hi - lo) * g / grid);
        if (v < best_val) {
            best_val = v;
            best = g;
        }
    }
    double a = lo + (hi - lo) * std::max(best - 1, 0) / grid;
    double b = lo + (hi - lo) * std::min(best + 1, grid) / grid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = obj(c), fd = obj(d);
    while (b - a > 1e-9) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = obj(d);
        }
    }
    TailResult out{best_val, lo + (hi - lo) * best / grid};
    const double mid = 0.5 * (a + b);
    const double v = obj(mid);
    if (v < out.bound) out = {v, mid};
    return out;
}

double verify_wfw_polynomial(const TinyField& tf, const SmoothFunction& f, int k) {
    if (!f.is_polynomial()) throw DomainError("verify_wfw_polynomial: f must be a polynomial");
    if (f.degree() > k) throw DomainError("verify_wfw_polynomial: degree of f exceeds k");
    const auto kappa = cumulants_from_moments(moments_of_sum(tf, k + 1));
    const double lhs = tf.expect(tf.W() * f.derivative(0, tf.W()));
    double rhs = 0.0, fact = 1.0;
    for (int j = 1; j <= k; ++j) {
        fact *= j;
        rhs += kappa[j] / fact * tf.expect(f.derivative(j, tf.W()));
    }
    return std::abs(lhs - rhs);
}

}  // namespace depclt
