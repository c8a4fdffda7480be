#include "hq/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hq/detail/summation.hpp"
#include "hq/error.hpp"

namespace hq::quadrature {

namespace {

Rule compute_gauss_legendre(std::size_t order) {
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] to [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.count == 0.0) return b;
  if (b.count == 0.0) return a;
  Moments r;
  r.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * b.count / r.count;
  r.m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / r.count;
  return r;
}

Moments merge_pairwise(std::span<const Moments> v) {
  if (v.empty()) return {};
  if (v.size() == 1) return v.front();
  const std::size_t half = v.size() / 2;
  return merge(merge_pairwise(v.first(half)), merge_pairwise(v.subspan(half)));
}

constexpr std::size_t kChunk = 4096;

}  // namespace

const Rule& gauss_legendre(std::size_t order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

unsigned default_workers() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : std::min(hw, 64u);
}

void parallel_chunks(std::size_t count, std::size_t chunk_size, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  std::vector<std::exception_ptr> errors(chunks);
  auto run_chunk = [&](std::size_t c) {
    try {
      const std::size_t begin = c * chunk_size;
      fn(c, begin, std::min(count, begin + chunk_size));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Estimate tensor_product(const PointFunction& f, std::span<const double> sides, std::size_t order,
                        unsigned workers) {
  const Rule& rule = gauss_legendre(order);
  const std::size_t dim = sides.size();
  double total_points = std::pow(static_cast<double>(order), static_cast<double>(dim));
  if (total_points > 1e12) {
    throw Error(ErrorCode::DimensionTooLarge, "tensor grid exceeds 1e12 nodes");
  }
  const auto count = static_cast<std::size_t>(total_points);
  double volume = 1.0;
  for (double a : sides) volume *= a;

  std::vector<double> partial((count + kChunk - 1) / kChunk, 0.0);
  parallel_chunks(count, kChunk, workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> x(dim);
    detail::CompensatedSum acc;
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const std::size_t k = rem % order;
        rem /= order;
        x[d] = rule.nodes[k] * sides[d];
        w *= rule.weights[k];
      }
      acc.add(w * f(x));
    }
    partial[c] = acc.value();
  });
  return {detail::pairwise_sum(partial) * volume, 0.0, count};
}

double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim) noexcept {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(sample)) + dim);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Estimate monte_carlo(const PointFunction& f, std::span<const double> sides, std::size_t samples,
                     std::uint64_t seed, unsigned workers) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least 2 samples");
  const std::size_t dim = sides.size();
  double volume = 1.0;
  for (double a : sides) volume *= a;

  std::vector<Moments> partial((samples + kChunk - 1) / kChunk);
  parallel_chunks(samples, kChunk, workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> x(dim);
    Moments m;
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t d = 0; d < dim; ++d) x[d] = uniform01(seed, s, d) * sides[d];
      const double v = f(x);
      m.count += 1.0;
      const double delta = v - m.mean;
      m.mean += delta / m.count;
      m.m2 += delta * (v - m.mean);
    }
    partial[c] = m;
  });
  const Moments total = merge_pairwise(partial);
  const double variance = total.m2 / (total.count - 1.0);
  return {total.mean * volume, std::sqrt(variance / total.count) * volume, samples};
}

void kronecker_point(std::size_t index, std::span<double> out) {
  const std::size_t d = out.size();
  if (d == 0) return;
  // generalized golden ratio: positive root of x^(d+1) = x + 1
  double g = 2.0;
  for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / static_cast<double>(d + 1));
  double inv = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    inv /= g;
    const double v = 0.5 + inv * static_cast<double>(index + 1);
    out[j] = v - std::floor(v);
  }
}

double adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol,
                   double* error) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol, &err);
  if (error) *error = err;
  return value;
}

}  // namespace hq::quadrature
