#include "depclt/fields.hpp"

#include <algorithm>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "depclt/combinatorics.hpp"
#include "depclt/errors.hpp"

namespace depclt {

DiscreteVar DiscreteVar::rademacher() { return {{-1.0, 1.0}, {0.5, 0.5}}; }

DiscreteVar DiscreteVar::two_point(double a, double b, double p_a) { return {{a, b}, {p_a, 1.0 - p_a}}; }

TinyField::TinyField(std::vector<DiscreteVar> base, IndexSet T, FieldMap map, bool center)
    : base_(std::move(base)), T_(std::move(T)) {
    std::size_t count = 1;
    for (const auto& v : base_) {
        if (v.values.empty() || v.values.size() != v.probs.size())
            throw DomainError("TinyField: base variable needs matching values and probabilities");
        double total = 0.0;
        for (double p : v.probs) total += p;
        if (std::abs(total - 1.0) > 1e-12) throw DomainError("TinyField: base probabilities must sum to 1");
        count *= v.values.size();
        if (count > kOutcomeBudget) throw BudgetError("TinyField: joint outcome count exceeds 2^20");
    }

    const std::size_t nb = base_.size();
    std::vector<double> prob(count, 1.0);
    base_table_.assign(count * nb, 0.0);
    std::vector<std::size_t> digit(nb, 0);
    for (std::size_t w = 0; w < count; ++w) {
        for (std::size_t b = 0; b < nb; ++b) {
            prob[w] *= base_[b].probs[digit[b]];
            base_table_[w * nb + b] = base_[b].values[digit[b]];
        }
        for (std::size_t b = nb; b-- > 0;) {  // mixed-radix increment, last variable fastest
            if (++digit[b] < base_[b].values.size()) break;
            digit[b] = 0;
        }
    }
    law_ = FiniteLaw(std::move(prob));

    x_.assign(T_.size(), RandomVar(count));
    for (int i = 0; i < T_.size(); ++i) {
        for (std::size_t w = 0; w < count; ++w) x_[i][w] = map(i, base_values(w));
        if (center) {
            const double mean = law_.expect(x_[i]);
            for (double& v : x_[i]) v -= mean;
        }
    }

    RandomVar s(count, 0.0);
    for (const auto& xi : x_) s = s + xi;
    const double m1 = law_.expect(s);
    const double var = law_.expect(s * s) - m1 * m1;
    sigma_ = var > 1e-28 ? std::sqrt(var) : 0.0;
    const double scale = sigma_ > 0.0 ? 1.0 / sigma_ : 0.0;
    y_.reserve(x_.size());
    for (const auto& xi : x_) y_.push_back(scale * xi);
    w_ = scale * s;
}

std::span<const double> TinyField::base_values(std::size_t outcome) const {
    return {base_table_.data() + outcome * base_.size(), base_.size()};
}

RandomVar TinyField::W_outside(const std::vector<char>& excluded) const {
    RandomVar out(outcomes(), 0.0);
    for (int i = 0; i < size(); ++i) {
        if (excluded[i]) continue;
        for (std::size_t w = 0; w < out.size(); ++w) out[w] += y_[i][w];
    }
    return out;
}

double exact_expectation(const TinyField& tf, const std::function<double(std::span<const double>)>& g) {
    double acc = 0.0;
    for (std::size_t w = 0; w < tf.outcomes(); ++w) acc += tf.law().probability(w) * g(tf.base_values(w));
    return acc;
}

double exact_expectation(const TinyField& tf, const RandomVar& y) { return tf.expect(y); }

std::vector<double> moments_of_sum(const TinyField& tf, int k) {
    std::vector<double> mu(k + 1, 0.0);
    RandomVar power = tf.law().constant(1.0);
    for (int r = 0; r <= k; ++r) {
        mu[r] = tf.expect(power);
        power = power * tf.W();
    }
    return mu;
}

double cumulant_of_sum(const TinyField& tf, int k) {
    if (k < 1 || k > 10) throw DomainError("cumulant_of_sum: order must be in 1..10");
    return cumulants_from_moments(moments_of_sum(tf, k))[k - 1];
}

// ---------------------------------------------------------------------------

double NoiseLaw::draw(Rng& rng) const {
    switch (kind) {
        case NoiseKind::Normal: {
            boost::random::normal_distribution<double> z;
            return z(rng);
        }
        case NoiseKind::Rademacher: return (rng() >> 63) ? 1.0 : -1.0;
        case NoiseKind::CenteredExponential: {
            boost::random::exponential_distribution<double> e;
            return e(rng) - 1.0;
        }
        case NoiseKind::Uniform: {
            boost::random::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
            return u(rng);
        }
    }
    return 0.0;
}

void NoiseLaw::fill(Rng& rng, std::span<double> out) const {
    if (kind == NoiseKind::Normal) {
        boost::random::normal_distribution<double> z;
        for (double& v : out) v = z(rng);
        return;
    }
    for (double& v : out) v = draw(rng);
}

int MovingWindow::stride() const {
    const int w = effective_width();
    return (w + m) / (m + 1);
}

namespace {

// Noise lattice layout of a moving-window model over T.
struct WindowGeometry {
    int d = 1, w = 1, s = 1;
    std::vector<int> lo, extent;
    std::size_t noise_count = 1;

    WindowGeometry(const MovingWindow& mw, const IndexSet& T) : d(mw.d), w(mw.effective_width()), s(mw.stride()) {
        if (T.dimension() != d) throw DomainError("MovingWindow: index set dimension does not match model");
        if (mw.m < 0 || w < 1) throw DomainError("MovingWindow: need m >= 0 and a positive width");
        if (T.size() == 0) throw DomainError("MovingWindow: empty index set");
        lo.assign(d, T.point(0)[0]);
        std::vector<int> hi(d);
        for (int c = 0; c < d; ++c) lo[c] = hi[c] = T.point(0)[c];
        for (int i = 0; i < T.size(); ++i)
            for (int c = 0; c < d; ++c) {
                lo[c] = std::min(lo[c], T.point(i)[c]);
                hi[c] = std::max(hi[c], T.point(i)[c]);
            }
        extent.resize(d);
        for (int c = 0; c < d; ++c) {
            extent[c] = s * (hi[c] - lo[c]) + w;
            noise_count *= extent[c];
        }
    }

    // Noise ids in the window of site `p`.
    std::vector<std::size_t> window(const IndexPoint& p) const {
        std::vector<std::size_t> ids;
        std::vector<int> off(d, 0);
        while (true) {
            std::size_t id = 0;
            for (int c = 0; c < d; ++c) id = id * extent[c] + (s * (p[c] - lo[c]) + off[c]);
            ids.push_back(id);
            int axis = d - 1;
            while (axis >= 0 && off[axis] == w - 1) off[axis--] = 0;
            if (axis < 0) break;
            ++off[axis];
        }
        return ids;
    }
};

double window_value(WindowKernel k, const std::vector<std::size_t>& ids, std::span<const double> noise) {
    switch (k) {
        case WindowKernel::Sum:
        case WindowKernel::Mean: {
            double acc = 0.0;
            for (auto id : ids) acc += noise[id];
            return k == WindowKernel::Mean ? acc / static_cast<double>(ids.size()) : acc;
        }
        case WindowKernel::Product: {
            double acc = 1.0;
            for (auto id : ids) acc *= noise[id];
            return acc;
        }
    }
    return 0.0;
}

std::vector<double> linear_weights(const MovingWindow& mw, const IndexSet& T) {
    WindowGeometry g(mw, T);
    std::vector<double> c(g.noise_count, 0.0);
    for (int i = 0; i < T.size(); ++i) {
        const auto ids = g.window(T.point(i));
        const double a = mw.kernel == WindowKernel::Mean ? 1.0 / static_cast<double>(ids.size()) : 1.0;
        for (auto id : ids) c[id] += a;
    }
    return c;
}

struct CausalLayout {
    int lo = 0, hi = 0;
};

CausalLayout causal_layout(const LinearCausal& lc, const IndexSet& T) {
    if (T.dimension() != 1) throw DomainError("LinearCausal: only d = 1 is supported");
    if (lc.L < 0) throw DomainError("LinearCausal: truncation must be nonnegative");
    if (T.size() == 0) throw DomainError("LinearCausal: empty index set");
    CausalLayout out{T.point(0)[0], T.point(0)[0]};
    for (int i = 0; i < T.size(); ++i) {
        out.lo = std::min(out.lo, T.point(i)[0]);
        out.hi = std::max(out.hi, T.point(i)[0]);
    }
    return out;
}

std::vector<double> linear_weights(const LinearCausal& lc, const IndexSet& T) {
    const auto lay = causal_layout(lc, T);
    // noise k (shifted by lo - L) feeds X_i with coefficient (1 + i - k)^{-a}
    std::vector<double> c(static_cast<std::size_t>(lay.hi - lay.lo + lc.L + 1), 0.0);
    std::vector<double> rho(lc.L + 1);
    for (int j = 0; j <= lc.L; ++j) rho[j] = std::pow(1.0 + j, -lc.a);
    for (int t = 0; t < T.size(); ++t) {
        const int i = T.point(t)[0];
        for (int j = 0; j <= lc.L; ++j) c[static_cast<std::size_t>(i - j - (lay.lo - lc.L))] += rho[j];
    }
    return c;
}

double sum_of_squares(const std::vector<double>& c) {
    double acc = 0.0;
    for (double v : c) acc += v * v;
    return acc;
}

double ustat_variance(const UStat& u) {
    const double n = u.n;
    switch (u.kernel) {
        case UKernel::Sum: return n * (n - 1) * (n - 1);
        case UKernel::Product: return n * (n - 1) / 2.0;
        case UKernel::SumProduct: return n * (n - 1) * (n - 1) + n * (n - 1) / 2.0;
    }
    return 0.0;
}

// sum_{i<j} h(x_i, x_j) in O(n) from S = sum x and Q = sum x^2.
double ustat_total(UKernel k, double n, double S, double Q) {
    const double pairs_sum = (n - 1) * S;
    const double pairs_prod = 0.5 * (S * S - Q);
    switch (k) {
        case UKernel::Sum: return pairs_sum;
        case UKernel::Product: return pairs_prod;
        case UKernel::SumProduct: return pairs_sum + pairs_prod;
    }
    return 0.0;
}

double checked_sigma(double var) {
    if (!(var > 0.0)) throw DegeneracyError("variance of the sum is not positive");
    return std::sqrt(var);
}

}  // namespace

VarianceEstimate variance_of_sum(const FieldModel& model, const IndexSet& T) {
    VarianceEstimate out;
    std::visit(
        [&](const auto& mdl) {
            using M = std::decay_t<decltype(mdl)>;
            if constexpr (std::is_same_v<M, MovingWindow>) {
                if (mdl.kernel == WindowKernel::Product) {
                    // distinct windows give uncorrelated products of independent centered noises
                    WindowGeometry g(mdl, T);
                    out.value = T.size();
                } else {
                    out.value = sum_of_squares(linear_weights(mdl, T));
                }
            } else if constexpr (std::is_same_v<M, LinearCausal>) {
                out.value = sum_of_squares(linear_weights(mdl, T));
            } else {
                out.value = ustat_variance(mdl);
            }
        },
        model);
    checked_sigma(out.value);
    return out;
}

double ustat_kernel(UKernel k, double x, double y) {
    switch (k) {
        case UKernel::Sum: return x + y;
        case UKernel::Product: return x * y;
        case UKernel::SumProduct: return x + y + x * y;
    }
    return 0.0;
}

FieldSample sample_field(const FieldModel& model, const IndexSet& T, std::uint64_t seed) {
    FieldSample out;
    out.seed = seed;
    out.sigma = checked_sigma(variance_of_sum(model, T).value);
    Rng rng = make_stream(seed, 0);
    std::visit(
        [&](const auto& mdl) {
            using M = std::decay_t<decltype(mdl)>;
            if constexpr (std::is_same_v<M, MovingWindow>) {
                WindowGeometry g(mdl, T);
                std::vector<double> noise(g.noise_count);
                mdl.noise.fill(rng, noise);
                for (int i = 0; i < T.size(); ++i)
                    out.values.push_back(window_value(mdl.kernel, g.window(T.point(i)), noise));
            } else if constexpr (std::is_same_v<M, LinearCausal>) {
                const auto lay = causal_layout(mdl, T);
                std::vector<double> noise(static_cast<std::size_t>(lay.hi - lay.lo + mdl.L + 1));
                mdl.noise.fill(rng, noise);
                for (int t = 0; t < T.size(); ++t) {
                    const int i = T.point(t)[0];
                    double acc = 0.0;
                    for (int j = 0; j <= mdl.L; ++j)
                        acc += std::pow(1.0 + j, -mdl.a) * noise[static_cast<std::size_t>(i - j - (lay.lo - mdl.L))];
                    out.values.push_back(acc);
                }
            } else {
                std::vector<double> x(mdl.n);
                mdl.base.fill(rng, x);
                for (int i = 0; i < mdl.n; ++i)
                    for (int j = i + 1; j < mdl.n; ++j) out.values.push_back(ustat_kernel(mdl.kernel, x[i], x[j]));
            }
        },
        model);
    return out;
}

std::pair<double, double> ustat_projection_variance(UKernel kernel, const NoiseLaw& base, std::uint64_t seed,
                                                    int reps) {
    // Var g = Cov(h(X, Y), h(X, Y')) for independent X, Y, Y'
    Rng rng = make_stream(seed, 0x5eed);
    std::vector<double> a(reps), b(reps);
    for (int r = 0; r < reps; ++r) {
        const double x = base.draw(rng), y = base.draw(rng), y2 = base.draw(rng);
        a[r] = ustat_kernel(kernel, x, y);
        b[r] = ustat_kernel(kernel, x, y2);
    }
    double ma = 0.0, mb = 0.0;
    for (int r = 0; r < reps; ++r) {
        ma += a[r];
        mb += b[r];
    }
    ma /= reps;
    mb /= reps;
    double cov = 0.0, sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double t = (a[r] - ma) * (b[r] - mb);
        cov += t;
        sq += t * t;
    }
    cov /= reps;
    const double var_t = sq / reps - cov * cov;
    return {cov, std::sqrt(std::max(var_t, 0.0) / reps)};
}

UStatSample ustat_sample(int n, UKernel kernel, const NoiseLaw& base, std::uint64_t seed) {
    if (n < 2) throw DomainError("ustat_sample: need n >= 2");
    UStatSample out;
    UStat model{n, kernel, base};
    out.sample = sample_field(model, IndexSet::line(1), seed);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.tuples.push_back({i, j});
    auto [vg, se] = ustat_projection_variance(kernel, base, seed);
    out.var_g = vg;
    out.var_g_se = se;
    out.degenerate = vg < 3.0 * se + 1e-3;
    return out;
}

// ---------------------------------------------------------------------------

SumSampler::SumSampler(FieldModel model, IndexSet T) : model_(std::move(model)), T_(std::move(T)) {
    sigma_ = checked_sigma(variance_of_sum(model_, T_).value);
    if (auto* mw = std::get_if<MovingWindow>(&model_); mw && mw->kernel != WindowKernel::Product) {
        weights_ = linear_weights(*mw, T_);
        linear_ = true;
    } else if (auto* lc = std::get_if<LinearCausal>(&model_)) {
        weights_ = linear_weights(*lc, T_);
        linear_ = true;
    }
}

double SumSampler::draw(std::uint64_t seed, std::uint64_t replicate) const {
    Rng rng = make_stream(seed, replicate);
    if (linear_) {
        const NoiseLaw noise = std::holds_alternative<MovingWindow>(model_) ? std::get<MovingWindow>(model_).noise
                                                                            : std::get<LinearCausal>(model_).noise;
        double acc = 0.0;
        if (noise.kind == NoiseKind::Normal) {
            boost::random::normal_distribution<double> z;
            for (double c : weights_) acc += c * z(rng);
        } else {
            for (double c : weights_) acc += c * noise.draw(rng);
        }
        return acc / sigma_;
    }
    if (auto* u = std::get_if<UStat>(&model_)) {
        double S = 0.0, Q = 0.0;
        for (int i = 0; i < u->n; ++i) {
            const double x = u->base.draw(rng);
            S += x;
            Q += x * x;
        }
        return ustat_total(u->kernel, u->n, S, Q) / sigma_;
    }
    const auto& mw = std::get<MovingWindow>(model_);
    WindowGeometry g(mw, T_);
    std::vector<double> noise(g.noise_count);
    mw.noise.fill(rng, noise);
    double acc = 0.0;
    for (int i = 0; i < T_.size(); ++i) acc += window_value(mw.kernel, g.window(T_.point(i)), noise);
    return acc / sigma_;
}

std::vector<double> SumSampler::draw_many(std::uint64_t seed, std::size_t reps, int threads) const {
    std::vector<double> out(reps);
    threads = std::max(1, threads);
    auto work = [&](int t) {
        for (std::size_t r = t; r < reps; r += threads) out[r] = draw(seed, r);
    };
    if (threads == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
    return out;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_field_csv(std::ostream& os, const IndexSet& T, const FieldSample& s) {
    os << "# depclt v1\n# sigma=" << format_real(s.sigma) << " seed=" << s.seed << "\n";
    for (int c = 0; c < T.dimension(); ++c) os << "i" << (c + 1) << ",";
    os << "value\n";
    for (int i = 0; i < T.size() && i < static_cast<int>(s.values.size()); ++i) {
        for (int c = 0; c < T.dimension(); ++c) os << T.point(i)[c] << ",";
        os << format_real(s.values[i]) << "\n";
    }
}

}  // namespace depclt
