#include "heisvar/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "heisvar/errors.hpp"
#include "heisvar/exact.hpp"
#include "heisvar/philox.hpp"

namespace heisvar {

namespace {

void check_window(int D, double R, const char* who) {
  if (D < 1) throw DomainError(std::string(who) + ": D must be >= 1");
  if (!(R >= 0.0) || !std::isfinite(R)) throw DomainError(std::string(who) + ": R must be finite and >= 0");
}

// Neumaier-compensated accumulator.
struct Sum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

std::uint64_t binomial_u64(int n, int k) {
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw ResourceError("multiplicity overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

// Upper bound on log p_k(R) that stays finite after p_k underflows.
double log_pk_bound(int k, double lambda, double pk_value) {
  if (pk_value > 1e-280) return std::log(pk_value);
  const double j = k + 1.0;
  const double q = lambda / (j + 1.0);
  return -lambda + j * std::log(lambda) - std::lgamma(j + 1.0) - std::log1p(-q);
}

}  // namespace

double SpectrumCumulants::skewness() const { return k2 > 0.0 ? k3 / std::pow(k2, 1.5) : 0.0; }

double SpectrumCumulants::excess_kurtosis() const { return k2 > 0.0 ? k4 / (k2 * k2) : 0.0; }

double pk(int k, double R) {
  if (k < 0) throw DomainError("pk: k must be >= 0");
  if (!(R >= 0.0)) throw DomainError("pk: R must be >= 0");
  return reg_lower_gamma(k + 1, R * R);
}

double pk_complement(int k, double R) {
  if (k < 0) throw DomainError("pk_complement: k must be >= 0");
  if (!(R >= 0.0)) throw DomainError("pk_complement: R must be >= 0");
  return reg_upper_gamma(k + 1, R * R);
}

BernoulliSpectrum polydisk_spectrum(int D, double R, Accuracy trunc, SpectrumLimits limits) {
  check_window(D, R, "polydisk_spectrum");
  trunc.validate();
  BernoulliSpectrum out;
  out.window = {WindowKind::polydisk, D, R};
  if (R == 0.0) return out;
  if (D == 1) {
    // The unit polydisk is the disk; share the ball's truncation rule.
    BernoulliSpectrum disk = ball_spectrum(1, R, trunc, limits);
    disk.window = out.window;
    return disk;
  }
  const double lambda = R * R;
  const double tau = std::max(trunc.abs_tol, std::numeric_limits<double>::min());

  // One-dimensional occupation probabilities above the threshold.
  std::vector<double> p, q;
  for (int k = 0;; ++k) {
    const GammaPair g = reg_gamma_pair(k + 1, lambda);
    if (g.lower < tau) break;
    p.push_back(g.lower);
    q.push_back(g.upper);
    if (p.size() > limits.max_entries) throw ResourceError("polydisk_spectrum: too many modes");
  }

  // Sorted multi-indices n_1 <= ... <= n_D with product >= tau. The
  // product is formed in index order so each multiset maps to one value.
  std::vector<int> idx(D, 0);
  std::vector<BernoulliEntry> raw;
  std::vector<double> factorial(D + 1, 1.0);
  for (int i = 1; i <= D; ++i) factorial[i] = factorial[i - 1] * i;

  auto emit = [&] {
    double prod = 1.0;
    double log_q = 0.0;
    for (int i = 0; i < D; ++i) {
      prod *= p[idx[i]];
      log_q += std::log1p(-q[idx[i]]);
    }
    // Multiplicity D! / prod(run lengths!).
    double denom = 1.0;
    for (int i = 0; i < D;) {
      int j = i;
      while (j < D && idx[j] == idx[i]) ++j;
      denom *= factorial[j - i];
      i = j;
    }
    raw.push_back({prod, -std::expm1(log_q), static_cast<std::uint64_t>(std::llround(factorial[D] / denom))});
    if (raw.size() > limits.max_entries) throw ResourceError("polydisk_spectrum: entry cap exceeded");
  };

  const int K = static_cast<int>(p.size());
  auto recurse = [&](auto&& self, int level, int start, double partial) -> void {
    for (int k = start; k < K; ++k) {
      const double next = partial * p[k];
      // p is decreasing, so the remaining factors are at most p[k] each and
      // larger k cannot bring the product back above tau.
      if (next * std::pow(p[k], D - 1 - level) < tau) break;
      idx[level] = k;
      if (level + 1 == D) {
        emit();
      } else {
        self(self, level + 1, k, next);
      }
    }
  };
  recurse(recurse, 0, 0, 1.0);

  std::sort(raw.begin(), raw.end(), [](const BernoulliEntry& a, const BernoulliEntry& b) { return a.prob > b.prob; });
  for (const BernoulliEntry& e : raw) {
    if (!out.entries.empty() && out.entries.back().prob == e.prob) {
      out.entries.back().multiplicity += e.multiplicity;
    } else {
      out.entries.push_back(e);
    }
  }

  // Rankin bound: the omitted products x < tau satisfy x <= x^{1-s} tau^s,
  // so their sum is at most tau^s (sum_k p_k^{1-s})^D.
  double best = std::numeric_limits<double>::infinity();
  for (double s : {0.5, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99}) {
    double total = 0.0;
    for (int k = 0;; ++k) {
      const double pv = k < K ? p[k] : reg_lower_gamma(k + 1, lambda);
      const double term = std::exp((1.0 - s) * log_pk_bound(k, lambda, pv));
      total += term;
      if (k > 2.0 * lambda + 2.0) {
        const double r = std::pow(lambda / (k + 2.0), 1.0 - s);
        const double rest = term * r / (1.0 - r);
        if (rest < 1e-6 * total) {
          total += rest;
          break;
        }
      }
      if (k > 10'000'000) break;
    }
    best = std::min(best, std::pow(tau, s) * std::pow(total, D));
  }
  // The full sum is (sum_k p_k)^D = R^{2D}, so the omitted mass is also the
  // gap to the retained sum, up to rounding.
  Sum retained;
  for (auto it = out.entries.rbegin(); it != out.entries.rend(); ++it) {
    retained.add(static_cast<double>(it->multiplicity) * it->prob);
  }
  const double total = std::pow(lambda, D);
  const double gap = std::max(0.0, total - retained.value()) + 8.0 * std::numeric_limits<double>::epsilon() * total;
  out.tail_bound = std::min(best, gap);
  return out;
}

BernoulliSpectrum ball_spectrum(int D, double R, Accuracy trunc, SpectrumLimits limits) {
  check_window(D, R, "ball_spectrum");
  trunc.validate();
  BernoulliSpectrum out;
  out.window = {WindowKind::ball, D, R};
  if (R == 0.0) return out;
  const double lambda = R * R;
  const double k_floor = lambda + 20.0 * std::sqrt(lambda + 1.0);

  double last_term = 0.0;
  double skipped = 0.0;  // mass of entries below the threshold
  int k_cut = 0;
  for (int k = 0;; ++k) {
    const GammaPair g = reg_gamma_pair(k + D, lambda);
    const std::uint64_t m = binomial_u64(k + D - 1, D - 1);
    last_term = static_cast<double>(m) * g.lower;
    if (last_term >= trunc.abs_tol) {
      out.entries.push_back({g.lower, g.upper, m});
    } else {
      skipped += last_term;
    }
    k_cut = k;
    if (k > k_floor && g.lower < trunc.abs_tol) break;
    if (out.entries.size() > limits.max_entries) throw ResourceError("ball_spectrum: entry cap exceeded");
  }
  // Successive terms m_k p_{k+D-1} shrink by at least lambda / (k + 1).
  const double ratio_bound = lambda / (k_cut + 2.0);
  out.tail_bound = skipped + last_term * ratio_bound / (1.0 - ratio_bound);

  const SpectrumMoments mom = spectrum_moments(out);
  const HeisenbergParams hp{D, R};
  const double mean = mean_ball(hp);
  if (std::abs(mom.mean - mean) > out.tail_bound + 1e-11 * (1.0 + mean)) {
    throw VerificationError("ball_spectrum: spectral mean " + std::to_string(mom.mean) +
                            " disagrees with R^{2D}/D! = " + std::to_string(mean));
  }
  const VarianceReport exact = variance_ball_bessel(hp);
  if (std::abs(mom.variance - exact.variance) > out.tail_bound + 1e-9 * (1.0 + exact.variance)) {
    throw VerificationError("ball_spectrum: spectral variance " + std::to_string(mom.variance) +
                            " disagrees with the Bessel form " + std::to_string(exact.variance));
  }
  return out;
}

SpectrumMoments spectrum_moments(const BernoulliSpectrum& s) {
  Sum mean, var;
  // Smallest contributions first.
  for (auto it = s.entries.rbegin(); it != s.entries.rend(); ++it) {
    const double m = static_cast<double>(it->multiplicity);
    mean.add(m * it->prob);
    var.add(m * it->prob * it->complement);
  }
  return {mean.value(), var.value(), s.tail_bound};
}

SpectrumCumulants spectrum_cumulants(const BernoulliSpectrum& s) {
  Sum k1, k2, k3, k4;
  for (auto it = s.entries.rbegin(); it != s.entries.rend(); ++it) {
    const double m = static_cast<double>(it->multiplicity);
    const double p = it->prob;
    const double q = it->complement;
    const double pq = p * q;
    k1.add(m * p);
    k2.add(m * pq);
    k3.add(m * pq * (q - p));
    k4.add(m * pq * (1.0 - 6.0 * pq));
  }
  return {k1.value(), k2.value(), k3.value(), k4.value()};
}

std::uint64_t count_support(const BernoulliSpectrum& s) {
  std::uint64_t total = 0;
  for (const BernoulliEntry& e : s.entries) {
    if (__builtin_add_overflow(total, e.multiplicity, &total)) return std::numeric_limits<std::uint64_t>::max();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact distribution

namespace {

struct Poly {
  long long offset = 0;  // exponent of c[0]
  std::vector<double> c;
};

constexpr double kTrim = 1e-22;

// Multiplies two generating functions, dropping exponents above n_max and
// negligible coefficients at either end; the dropped mass is accumulated.
Poly multiply(const Poly& a, const Poly& b, long long n_max, double& dropped) {
  Poly r;
  r.offset = a.offset + b.offset;
  if (r.offset > n_max) {
    double ma = 0.0, mb = 0.0;
    for (double v : a.c) ma += v;
    for (double v : b.c) mb += v;
    dropped += ma * mb;
    r.c = {};
    return r;
  }
  const long long full = static_cast<long long>(a.c.size() + b.c.size()) - 1;
  const long long keep = std::min(full, n_max - r.offset + 1);
  r.c.assign(static_cast<std::size_t>(keep), 0.0);
  double lost = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    const double ai = a.c[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      const long long e = static_cast<long long>(i + j);
      if (e < keep) {
        r.c[static_cast<std::size_t>(e)] += ai * b.c[j];
      } else {
        lost += ai * b.c[j];
      }
    }
  }
  std::size_t lo = 0, hi = r.c.size();
  while (lo < hi && r.c[lo] < kTrim) lost += r.c[lo++];
  while (hi > lo && r.c[hi - 1] < kTrim) lost += r.c[--hi];
  r.c = std::vector<double>(r.c.begin() + static_cast<std::ptrdiff_t>(lo), r.c.begin() + static_cast<std::ptrdiff_t>(hi));
  r.offset += static_cast<long long>(lo);
  dropped += lost;
  return r;
}

}  // namespace

CountPMF counting_pmf(const BernoulliSpectrum& s, int n_max) {
  if (n_max < 0) throw DomainError("counting_pmf: n_max must be >= 0");
  if (n_max > 10'000'000) throw ResourceError("counting_pmf: n_max above 10^7");
  double dropped = 0.0;
  Poly acc{0, {1.0}};
  for (const BernoulliEntry& e : s.entries) {
    if (acc.c.empty()) break;
    // (q + p z)^m by repeated squaring.
    if (e.prob == 0.0) continue;
    Poly base{0, {e.complement, e.prob}};
    if (e.complement == 0.0) base = Poly{1, {1.0}};
    Poly pow{0, {1.0}};
    std::uint64_t m = e.multiplicity;
    while (m > 0) {
      if (m & 1u) pow = multiply(pow, base, n_max, dropped);
      m >>= 1;
      if (m > 0) base = multiply(base, base, n_max, dropped);
      if (pow.c.empty()) break;
    }
    acc = multiply(acc, pow, n_max, dropped);
  }
  CountPMF out;
  out.n_max = n_max;
  out.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t i = 0; i < acc.c.size(); ++i) out.probs[static_cast<std::size_t>(acc.offset) + i] = acc.c[i];
  out.tail_mass = std::max(0.0, dropped);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

constexpr std::uint64_t kBlockSize = 16384;

struct EntrySampler {
  std::uint64_t m = 1;
  double r = 0.0;  // min(p, 1 - p)
  bool flipped = false;  // r is the failure probability
  double p0 = 1.0;       // (1 - r)^m
  double odds = 0.0;     // r / (1 - r)
  bool inversion = true;
};

EntrySampler make_sampler(const BernoulliEntry& e) {
  EntrySampler s;
  s.m = e.multiplicity;
  s.flipped = e.prob > 0.5;
  s.r = s.flipped ? e.complement : e.prob;
  const double md = static_cast<double>(s.m);
  s.inversion = s.m == 1 || md * s.r < 10.0;
  if (s.r > 0.0 && s.r < 1.0) {
    s.p0 = std::exp(md * std::log1p(-s.r));
    s.odds = s.r / (1.0 - s.r);
  } else {
    s.p0 = s.r == 0.0 ? 1.0 : 0.0;
  }
  return s;
}

std::uint64_t draw(const EntrySampler& s, PhiloxStream& rng) {
  std::uint64_t k = 0;
  if (s.r <= 0.0 || s.p0 == 1.0) {
    // (1 - r)^m rounds to 1: inversion would return 0 for every u < 1.
    k = 0;
  } else if (s.m == 1) {
    k = rng.uniform() < s.r ? 1 : 0;
  } else if (s.inversion) {
    const double u = rng.uniform();
    double term = s.p0;
    double cdf = term;
    while (u >= cdf && k < s.m) {
      term *= static_cast<double>(s.m - k) / static_cast<double>(k + 1) * s.odds;
      ++k;
      cdf += term;
      if (term == 0.0) break;
    }
  } else {
    std::binomial_distribution<std::uint64_t> dist(s.m, s.r);
    k = dist(rng);
  }
  return s.flipped ? s.m - k : k;
}

}  // namespace

SampleStats sample_counts(const BernoulliSpectrum& s, std::uint64_t n_samples, std::uint64_t seed, unsigned threads) {
  if (n_samples < 1) throw DomainError("sample_counts: n_samples must be >= 1");
  if (s.entries.size() > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("sample_counts: too many entries");
  const std::uint64_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  if (n_blocks > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("sample_counts: too many samples");

  std::vector<EntrySampler> samplers;
  samplers.reserve(s.entries.size());
  for (const BernoulliEntry& e : s.entries) samplers.push_back(make_sampler(e));

  const long long shift = std::llround(spectrum_moments(s).mean);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_blocks));

  struct Partial {
    __int128 s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::vector<std::uint64_t> hist;
  };
  std::vector<Partial> partials(threads);
  std::atomic<std::uint64_t> next_block{0};

  auto worker = [&](unsigned t) {
    Partial& acc = partials[t];
    std::vector<std::uint64_t> counts;
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const std::uint64_t begin = b * kBlockSize;
      const std::uint64_t len = std::min(kBlockSize, n_samples - begin);
      counts.assign(len, 0);
      for (std::size_t e = 0; e < samplers.size(); ++e) {
        if (samplers[e].p0 == 1.0) {
          if (samplers[e].flipped) {
            for (std::uint64_t i = 0; i < len; ++i) counts[i] += samplers[e].m;
          }
          continue;
        }
        PhiloxStream rng(seed, static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(b), 0x48564152u);
        for (std::uint64_t i = 0; i < len; ++i) counts[i] += draw(samplers[e], rng);
      }
      for (std::uint64_t c : counts) {
        const __int128 d = static_cast<__int128>(c) - shift;
        acc.s1 += d;
        acc.s2 += d * d;
        acc.s3 += d * d * d;
        acc.s4 += d * d * d * d;
        if (c >= acc.hist.size()) acc.hist.resize(c + 1, 0);
        ++acc.hist[c];
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  __int128 s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  SampleStats out;
  for (const Partial& p : partials) {
    s1 += p.s1;
    s2 += p.s2;
    s3 += p.s3;
    s4 += p.s4;
    if (p.hist.size() > out.histogram.size()) out.histogram.resize(p.hist.size(), 0);
    for (std::size_t i = 0; i < p.hist.size(); ++i) out.histogram[i] += p.hist[i];
  }
  const long double n = static_cast<long double>(n_samples);
  const long double mu = static_cast<long double>(s1) / n;
  const long double r2 = static_cast<long double>(s2) / n;
  const long double r3 = static_cast<long double>(s3) / n;
  const long double r4 = static_cast<long double>(s4) / n;
  const long double m2 = std::max(0.0L, r2 - mu * mu);
  const long double m3 = r3 - 3 * mu * r2 + 2 * mu * mu * mu;
  const long double m4 = r4 - 4 * mu * r3 + 6 * mu * mu * r2 - 3 * mu * mu * mu * mu;

  out.n_samples = n_samples;
  out.seed = seed;
  out.mean = static_cast<double>(shift + mu);
  if (n_samples > 1) {
    out.variance = static_cast<double>(m2 * n / (n - 1));
    const long double v4 = (m4 - m2 * m2 * (n - 3) / (n - 1)) / n;
    out.variance_std_error = static_cast<double>(std::sqrt(std::max(0.0L, v4)));
  }
  if (m2 > 0) {
    out.skewness = static_cast<double>(m3 / std::pow(m2, 1.5L));
    out.excess_kurtosis = static_cast<double>(m4 / (m2 * m2) - 3);
  }
  return out;
}

}  // namespace heisvar
