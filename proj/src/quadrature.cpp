#include "bvloc/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace bvloc {

const QuadRule& gauss_legendre(int order) {
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1 || order > 512)
    throw PreconditionError("quadrature order out of range");

  QuadRule r;
  r.x.resize(order);
  r.w.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      // Legendre recurrence for P_n and its derivative at x
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return cache.emplace(order, std::move(r)).first->second;
}

int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw ? static_cast<int>(hw) : 1;
  if (const char* env = std::getenv("BVLOC_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<int>(v);
  }
  return std::min(std::max(n, 1), 16);
}

void integrate_box_multi(const Box& box, int order, int m,
                         const std::function<void(const double*, double*)>& f,
                         double* out) {
  const int dim = box.n;
  if (dim < 1 || dim > kMaxVars) throw PreconditionError("bad box dimension");
  const QuadRule& rule = gauss_legendre(order);

  long total = 1;
  for (int d = 0; d < dim; ++d) total *= order;
  double scale = 1.0;
  for (int d = 0; d < dim; ++d) scale *= 0.5 * (box.hi[d] - box.lo[d]);

  const long nblocks = std::min<long>(total, 64);
  std::vector<double> partial(nblocks * m, 0.0);
  std::atomic<long> next{0};
  std::atomic<bool> bad{false};

  auto run_block = [&](long b) {
    long beg = b * total / nblocks, end = (b + 1) * total / nblocks;
    std::vector<double> val(m);
    double* acc = partial.data() + b * m;
    double pt[kMaxVars];
    for (long idx = beg; idx < end; ++idx) {
      long rem = idx;
      double wt = scale;
      for (int d = 0; d < dim; ++d) {
        int id = static_cast<int>(rem % order);
        rem /= order;
        pt[d] = box.lo[d] +
                0.5 * (box.hi[d] - box.lo[d]) * (rule.x[id] + 1.0);
        wt *= rule.w[id];
      }
      f(pt, val.data());
      for (int j = 0; j < m; ++j) {
        if (!std::isfinite(val[j])) bad.store(true, std::memory_order_relaxed);
        acc[j] += wt * val[j];
      }
    }
  };

  int workers = std::min<long>(thread_budget(), nblocks);
  if (workers <= 1) {
    for (long b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&] {
        for (;;) {
          long b = next.fetch_add(1);
          if (b >= nblocks) return;
          run_block(b);
        }
      });
    for (auto& th : pool) th.join();
  }
  if (bad.load())
    throw PreconditionError("integrand produced non-finite values");

  // fixed pairwise tree over the block partials
  for (long gap = 1; gap < nblocks; gap *= 2)
    for (long b = 0; b + gap < nblocks; b += 2 * gap)
      for (int j = 0; j < m; ++j)
        partial[b * m + j] += partial[(b + gap) * m + j];
  for (int j = 0; j < m; ++j) out[j] = partial[j];
}

double integrate_box(const Box& box, int order,
                     const std::function<double(const double*)>& f) {
  double out = 0;
  integrate_box_multi(box, order, 1,
                      [&](const double* p, double* v) { v[0] = f(p); }, &out);
  return out;
}

}  // namespace bvloc
