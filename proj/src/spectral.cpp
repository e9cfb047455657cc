#include "girthlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "girthlab/error.hpp"

namespace girthlab {

namespace {

constexpr int kMaxGramDim = 8;

ExactMatrix gram(const ExactMatrix& m) {
  if (m.dim() > kMaxGramDim) throw UnsupportedError("Gram spectra support n ≤ 8");
  return m * m.transpose();
}

}  // namespace

double gram_lambda_max(const ExactMatrix& m) {
  const ExactMatrix g = gram(m);
  const int n = g.dim();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = g(i, j).get_d();

  std::vector<double> v(static_cast<std::size_t>(n)), w(v.size());
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 + 0.1 * i;
  double rayleigh = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    double next = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a[static_cast<std::size_t>(i * n + j)] * v[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = s;
      next += s * v[static_cast<std::size_t>(i)];
    }
    v.swap(w);
    if (iter > 0 && std::abs(next - rayleigh) <= 1e-12 * std::abs(next)) return next;
    rayleigh = next;
  }
  return rayleigh;
}

std::vector<BigInt> gram_char_poly(const ExactMatrix& m) {
  const ExactMatrix g = gram(m);
  const int n = g.dim();
  // Faddeev–LeVerrier over Z: c[k] is the coefficient of λ^{n-k} in det(λI − G).
  std::vector<BigInt> c(static_cast<std::size_t>(n + 1));
  c[0] = 1;
  ExactMatrix mk(n);
  for (int k = 1; k <= n; ++k) {
    ExactMatrix next = g * mk;
    for (int i = 0; i < n; ++i) next(i, i) += c[static_cast<std::size_t>(k - 1)];
    mk = next;
    const ExactMatrix gm = g * mk;
    BigInt trace = 0;
    for (int i = 0; i < n; ++i) trace += gm(i, i);
    BigInt coeff;
    mpz_divexact_ui(coeff.get_mpz_t(), trace.get_mpz_t(), static_cast<unsigned long>(k));
    c[static_cast<std::size_t>(k)] = -coeff;
  }
  // det(G − λI) = (−1)^n det(λI − G).
  if (n % 2)
    for (auto& x : c) x = -x;
  return c;
}

double bound_from_gamma(double gamma, double p) {
  if (!(gamma > 1.0)) throw Error("spectral norm γ must exceed 1");
  return 2.0 * std::log(p / 2.0) / std::log(gamma) - 1.0;
}

GirthBound girth_lower_bound(const FamilySpec& spec, std::uint64_t p) {
  if (p < 3) throw ParameterError("girth bound needs p ≥ 3");
  auto gamma_of = [&](long a, long b, double* lam, double* beta) {
    const auto [ma, mb] = unitriangular_pair(spec.n, a, b);
    const double l = gram_lambda_max(power_closed_form(ma, spec.l));
    const double be = gram_lambda_max(power_closed_form(mb, spec.l));
    if (lam) *lam = l;
    if (beta) *beta = be;
    return std::sqrt(std::max(l, be));
  };
  GirthBound out;
  out.p = p;
  out.gamma = gamma_of(spec.a, spec.b, &out.lambda_max, &out.beta_max);
  out.gamma_swapped = gamma_of(spec.b, spec.a, nullptr, nullptr);
  out.bound_raw = bound_from_gamma(out.gamma, static_cast<double>(p));
  // Guard against ⌈5 + 1e-15⌉ = 6 from rounding in the logarithms.
  out.bound_reported = std::max(3, static_cast<int>(std::ceil(out.bound_raw - 1e-9)));
  return out;
}

SpectralGapReport second_eigenvalue(std::span<const ModMatrix> generators, const SpectralOptions& opts) {
  const SymmetricGenerators gens(generators, false);
  const GroupEnumeration g = enumerate_group(gens, opts.order_limit, opts.explore);
  const std::size_t order = g.elements.size();
  const std::size_t degree = static_cast<std::size_t>(g.degree);

  SpectralGapReport out;
  out.degree = g.degree;
  out.order = order;
  out.top_eigenvalue = static_cast<double>(degree);
  out.seed = opts.seed;
  if (order < 2) {
    out.converged = true;
    return out;
  }

  const double shift = static_cast<double>(degree);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(order), w(order);
  for (double& x : v) x = dist(rng);

  auto project_normalize = [&](std::vector<double>& f) {
    double mean = 0.0;
    for (double x : f) mean += x;
    mean /= static_cast<double>(order);
    double norm = 0.0;
    for (double& x : f) {
      x -= mean;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : f) x /= norm;
  };

  unsigned threads = opts.explore.threads ? opts.explore.threads : std::max(1u, std::thread::hardware_concurrency());
  if (order < 100000) threads = 1;
  auto apply = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double s = shift * v[i];
      for (std::size_t k = 0; k < degree; ++k) s += v[g.neighbours[i * degree + k]];
      w[i] = s;
    }
  };

  project_normalize(v);
  double mu = 0.0;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    if (threads == 1) {
      apply(0, order);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (order + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(apply, std::min(order, t * per), std::min(order, (t + 1) * per));
      for (auto& th : pool) th.join();
    }
    mu = 0.0;
    for (std::size_t i = 0; i < order; ++i) mu += v[i] * w[i];
    double res = 0.0;
    for (std::size_t i = 0; i < order; ++i) res += (w[i] - mu * v[i]) * (w[i] - mu * v[i]);
    out.residual = std::sqrt(res);
    out.iterations = iter;
    v.swap(w);
    project_normalize(v);
    if (out.residual <= opts.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.second_eigenvalue = mu - shift;
  out.normalized_gap = (shift - out.second_eigenvalue) / shift;
  return out;
}

}  // namespace girthlab
