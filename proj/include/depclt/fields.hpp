#pragma once

// Dependent-data generators and exact finite fields.
//
// TinyField enumerates the joint law of a handful of independent discrete base
// variables and evaluates every X_i on every outcome, so all expectations are
// exact sums. The parametric models below are sampled by Monte Carlo.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "depclt/dependency.hpp"
#include "depclt/outcome.hpp"
#include "depclt/rng.hpp"

namespace depclt {

struct DiscreteVar {
    std::vector<double> values;
    std::vector<double> probs;

    static DiscreteVar rademacher();
    static DiscreteVar two_point(double a, double b, double p_a);
};

class TinyField {
public:
    using FieldMap = std::function<double(int index, std::span<const double> base)>;

    static constexpr std::size_t kOutcomeBudget = std::size_t{1} << 20;

    // With `center`, each X_i has its exact mean subtracted.
    TinyField(std::vector<DiscreteVar> base, IndexSet T, FieldMap map, bool center = true);

    const FiniteLaw& law() const { return law_; }
    const IndexSet& index_set() const { return T_; }
    int size() const { return T_.size(); }
    std::size_t outcomes() const { return law_.size(); }
    std::span<const double> base_values(std::size_t outcome) const;

    const RandomVar& X(int i) const { return x_[i]; }   // raw (centered) values
    const RandomVar& Y(int i) const { return y_[i]; }   // X_i / sigma
    double sigma() const { return sigma_; }
    bool degenerate() const { return sigma_ == 0.0; }
    const RandomVar& W() const { return w_; }

    // sigma^{-1} sum over i with excluded[i] == 0.
    RandomVar W_outside(const std::vector<char>& excluded) const;

    double expect(const RandomVar& y) const { return law_.expect(y); }

private:
    std::vector<DiscreteVar> base_;
    IndexSet T_;
    FiniteLaw law_;
    std::vector<double> base_table_;  // outcomes x base-count, row major
    std::vector<RandomVar> x_, y_;
    RandomVar w_;
    double sigma_ = 0.0;
};

double exact_expectation(const TinyField& tf, const std::function<double(std::span<const double>)>& g);
double exact_expectation(const TinyField& tf, const RandomVar& y);

// mu_0..mu_k of W.
std::vector<double> moments_of_sum(const TinyField& tf, int k);
double cumulant_of_sum(const TinyField& tf, int k);

// ---------------------------------------------------------------------------
// Parametric models

enum class NoiseKind { Normal, Rademacher, CenteredExponential, Uniform };

// Standardized noise: mean 0, variance 1.
struct NoiseLaw {
    NoiseKind kind = NoiseKind::Normal;

    double draw(Rng& rng) const;
    void fill(Rng& rng, std::span<double> out) const;
};

enum class WindowKernel { Mean, Sum, Product };

// X_i = kernel of the noises in a w^d window. Windows start at stride
// s = ceil(w / (m+1)) on the noise lattice, which makes sites farther than m
// apart share no noise. The default width is 2m+1.
struct MovingWindow {
    int d = 1;
    int m = 1;
    int width = 0;
    WindowKernel kernel = WindowKernel::Mean;
    NoiseLaw noise;

    int effective_width() const { return width > 0 ? width : 2 * m + 1; }
    int stride() const;
};

// X_i = sum_{j=0}^{L} (1+j)^{-a} xi_{i-j} on a line.
struct LinearCausal {
    double a = 2.0;
    int L = 512;
    NoiseLaw noise;
};

enum class UKernel { SumProduct, Sum, Product };  // x+y+xy, x+y, xy

struct UStat {
    int n = 64;
    UKernel kernel = UKernel::SumProduct;
    NoiseLaw base;
};

using FieldModel = std::variant<MovingWindow, LinearCausal, UStat>;

struct FieldSample {
    std::vector<double> values;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct VarianceEstimate {
    double value = 0.0;
    double se = 0.0;
    bool exact = true;
};

VarianceEstimate variance_of_sum(const FieldModel& model, const IndexSet& T);

FieldSample sample_field(const FieldModel& model, const IndexSet& T, std::uint64_t seed);

double ustat_kernel(UKernel k, double x, double y);

struct UStatSample {
    FieldSample sample;             // one value per strictly increasing pair
    std::vector<std::vector<int>> tuples;
    bool degenerate = false;        // Var(g) indistinguishable from 0, g(x) = E[h(x, X)]
    double var_g = 0.0;
    double var_g_se = 0.0;
};

UStatSample ustat_sample(int n, UKernel kernel, const NoiseLaw& base, std::uint64_t seed);

// Monte Carlo estimate of Var(g) with standard error.
std::pair<double, double> ustat_projection_variance(UKernel kernel, const NoiseLaw& base,
                                                    std::uint64_t seed, int reps = 200'000);

// Draws of W_n = sigma^{-1} sum X_i. Replicate r uses stream (seed, r) so the
// output does not depend on the thread count.
class SumSampler {
public:
    SumSampler(FieldModel model, IndexSet T);

    double sigma() const { return sigma_; }
    double draw(std::uint64_t seed, std::uint64_t replicate) const;
    std::vector<double> draw_many(std::uint64_t seed, std::size_t reps, int threads = 1) const;

private:
    FieldModel model_;
    IndexSet T_;
    double sigma_ = 0.0;
    std::vector<double> weights_;  // linear models: sum X_i = sum_k weights_k xi_k
    bool linear_ = false;
};

void write_field_csv(std::ostream& os, const IndexSet& T, const FieldSample& s);

std::string format_real(double x);  // 17 significant digits

}  // namespace depclt
