#pragma once

// Counting variables as sums of independent Bernoulli variables.
//
// For the polydisk the kernel restricted to the window is diagonal in the
// monomial basis of the Bargmann-Fock space with eigenvalues
// prod_l p_{n_l}(R). For the ball, rotation invariance makes the same basis
// diagonalize the restricted kernel; the eigenvalue of a monomial of total
// degree k is P(k + D, R^2) = p_{k+D-1}(R), with multiplicity
// binom(k + D - 1, D - 1). The ball spectrum is accepted only after its
// mean and variance reproduce the closed forms; otherwise construction
// throws VerificationError.

#include <cstdint>
#include <vector>

#include "heisvar/specfun.hpp"

namespace heisvar {

enum class WindowKind { ball, polydisk };

struct Window {
  WindowKind kind = WindowKind::ball;
  int D = 1;
  double R = 1.0;
};

struct BernoulliEntry {
  double prob = 0.0;
  double complement = 1.0;  // 1 - prob, carried separately for accuracy
  std::uint64_t multiplicity = 1;
};

struct BernoulliSpectrum {
  std::vector<BernoulliEntry> entries;  // prob strictly decreasing
  Window window;
  double tail_bound = 0.0;  // bound on the mean of the omitted entries
};

struct CountPMF {
  std::vector<double> probs;  // P(count = n), n = 0..n_max
  int n_max = 0;
  double tail_mass = 0.0;  // probability dropped by the n_max cap and trimming
};

struct SampleStats {
  std::uint64_t n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::uint64_t seed = 0;
  /// Standard error of the sample variance from the fourth central moment.
  double variance_std_error = 0.0;
  /// histogram[n] = number of samples with count n.
  std::vector<std::uint64_t> histogram;
};

struct SpectrumMoments {
  double mean = 0.0;
  double variance = 0.0;
  double error = 0.0;
};

/// Cumulants kappa_1..kappa_4 of a Bernoulli sum.
struct SpectrumCumulants {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;

  double skewness() const;
  double excess_kurtosis() const;
};

struct SpectrumLimits {
  std::size_t max_entries = 5'000'000;
};

/// p_k(R) = P(k + 1, R^2), the probability that mode k is occupied.
double pk(int k, double R);

/// 1 - p_k(R), accurate when p_k is close to 1.
double pk_complement(int k, double R);

BernoulliSpectrum polydisk_spectrum(int D, double R, Accuracy trunc = Accuracy{1e-15, 1e-16},
                                    SpectrumLimits limits = {});

BernoulliSpectrum ball_spectrum(int D, double R, Accuracy trunc = Accuracy{1e-15, 1e-16},
                                SpectrumLimits limits = {});

SpectrumMoments spectrum_moments(const BernoulliSpectrum& s);

SpectrumCumulants spectrum_cumulants(const BernoulliSpectrum& s);

/// Exact distribution of the count, by convolving Binomial(m, p) factors.
CountPMF counting_pmf(const BernoulliSpectrum& s, int n_max);

/// Upper bound on the count: the sum of all multiplicities, capped.
std::uint64_t count_support(const BernoulliSpectrum& s);

/// Draws n_samples realizations of the count. Streams are keyed by
/// (seed, entry, block), so the result depends only on the seed and
/// n_samples, never on the number of worker threads (0 = hardware).
SampleStats sample_counts(const BernoulliSpectrum& s, std::uint64_t n_samples, std::uint64_t seed,
                          unsigned threads = 0);

}  // namespace heisvar
