#include "v2x/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

SimilarityMatrix similarity_matrix(const std::vector<Vec2>& midpoints,
                                   double zeta, double phi,
                                   const RoadNetwork& network) {
  if (zeta <= 0.0) throw std::invalid_argument("zeta must be > 0");
  if (phi <= 0.0) throw std::invalid_argument("phi must be > 0");
  const int k = static_cast<int>(midpoints.size());
  SimilarityMatrix s;
  s.k = k;
  s.zeta = zeta;
  s.phi = phi;
  s.s.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    s.at(i, i) = 1.0;
    for (int j = i + 1; j < k; ++j) {
      const double d = network.distance(midpoints[i], midpoints[j]);
      const double v = d > phi ? 0.0 : std::exp(-(d * d) / (zeta * zeta));
      s.at(i, j) = v;
      s.at(j, i) = v;
    }
  }
  return s;
}

std::vector<double> normalized_laplacian(const SimilarityMatrix& s) {
  const int k = s.k;
  std::vector<double> deg(k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) deg[i] += s.at(i, j);
    // Unit diagonal keeps every degree >= 1, so the scaling is always defined.
  }
  std::vector<double> l(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double n = s.at(i, j) / std::sqrt(deg[i] * deg[j]);
      l[static_cast<std::size_t>(i) * k + j] = (i == j ? 1.0 : 0.0) - n;
    }
  }
  return l;
}

void jacobi_eigen_sym(std::vector<double>& a, int n, std::vector<double>& evecs,
                      std::vector<double>& evals) {
  evecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) evecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  auto V = [&](int i, int j) -> double& {
    return evecs[static_cast<std::size_t>(i) * n + j];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += sq(A(p, q));
    if (std::sqrt(off) < 1e-10) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = A(r, p), arq = A(r, q);
          A(r, p) = c * arp - sn * arq;
          A(r, q) = sn * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = A(p, r), aqr = A(q, r);
          A(p, r) = c * apr - sn * aqr;
          A(q, r) = sn * apr + c * aqr;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp - sn * vrq;
          V(r, q) = sn * vrp + c * vrq;
        }
      }
    }
  }
  evals.resize(n);
  for (int i = 0; i < n; ++i) evals[i] = A(i, i);
}

// One k-means++ seeding plus Lloyd iterations; fills `label` and returns the
// final within-cluster sum of squares. Consumes exactly k rng draws.
static double kmeans_once(const std::vector<double>& rows, int n, int dim,
                          int k, std::mt19937_64& rng,
                          std::vector<int>& label) {
  auto row = [&](int i) { return rows.data() + static_cast<std::size_t>(i) * dim; };
  auto d2 = [&](const double* x, const double* y) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += sq(x[c] - y[c]);
    return s;
  };

  // k-means++ seeding.
  std::vector<double> centers(static_cast<std::size_t>(k) * dim, 0.0);
  auto center = [&](int c) { return centers.data() + static_cast<std::size_t>(c) * dim; };
  std::vector<double> dist2(n, std::numeric_limits<double>::max());
  {
    const int first = static_cast<int>(rng_below(rng, n));
    std::copy_n(row(first), dim, center(0));
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        dist2[i] = std::min(dist2[i], d2(row(i), center(c - 1)));
        total += dist2[i];
      }
      int pick = 0;
      if (total > 0.0) {
        const double target = rng_u01(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += dist2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<int>(rng_below(rng, n));
      }
      std::copy_n(row(pick), dim, center(c));
    }
  }

  label.assign(n, 0);
  std::vector<int> count(k, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = d2(row(i), center(0));
      for (int c = 1; c < k; ++c) {
        const double d = d2(row(i), center(c));
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    // Repair empty clusters: move the point farthest from its center.
    std::fill(count.begin(), count.end(), 0);
    for (int i = 0; i < n; ++i) ++count[label[i]];
    for (int c = 0; c < k; ++c) {
      while (count[c] == 0) {
        int far_i = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          if (count[label[i]] <= 1) continue;
          const double d = d2(row(i), center(label[i]));
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        if (far_i < 0) break;
        --count[label[far_i]];
        label[far_i] = c;
        ++count[c];
        changed = true;
      }
    }
    for (int c = 0; c < k; ++c) {
      std::fill(center(c), center(c) + dim, 0.0);
    }
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < dim; ++d) center(label[i])[d] += row(i)[d];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        for (int d = 0; d < dim; ++d) center(c)[d] /= count[c];
      }
    }
    if (!changed) break;
  }
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) inertia += d2(row(i), center(label[i]));
  return inertia;
}

std::vector<int> kmeans(const std::vector<double>& rows, int n, int dim, int k,
                        std::mt19937_64& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  // Lloyd from a single k-means++ seed lands in poor local optima often
  // enough to matter (lopsided clusters), so take the best of a fixed number
  // of restarts. Each restart consumes exactly k rng draws, keeping the
  // stream advance independent of the data.
  constexpr int kRestarts = 10;
  std::vector<int> best, trial;
  double best_inertia = std::numeric_limits<double>::max();
  for (int r = 0; r < kRestarts; ++r) {
    const double inertia = kmeans_once(rows, n, dim, k, rng, trial);
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best = trial;
    }
  }
  return best;
}

std::vector<int> spectral_cluster(const SimilarityMatrix& s, int g,
                                  std::mt19937_64& rng) {
  const int k = s.k;
  if (g < 1 || g > k) throw std::invalid_argument("spectral_cluster: need 1 <= g <= k");
  if (g == 1) return std::vector<int>(static_cast<std::size_t>(k), 0);
  std::vector<double> l = normalized_laplacian(s);
  std::vector<double> evecs, evals;
  jacobi_eigen_sym(l, k, evecs, evals);

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return evals[a] < evals[b]; });

  // Embedding rows from the g smallest eigenvectors, row-normalized.
  std::vector<double> rows(static_cast<std::size_t>(k) * g, 0.0);
  for (int i = 0; i < k; ++i) {
    double norm2 = 0.0;
    for (int j = 0; j < g; ++j) {
      const double v = evecs[static_cast<std::size_t>(i) * k + order[j]];
      rows[static_cast<std::size_t>(i) * g + j] = v;
      norm2 += v * v;
    }
    if (norm2 > 1e-300) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int j = 0; j < g; ++j) rows[static_cast<std::size_t>(i) * g + j] *= inv;
    }
  }
  return kmeans(rows, k, g, g, rng);
}

GroupAssignment allocate_rbs(const std::vector<int>& group_of, int g, int n_rb) {
  const int k = static_cast<int>(group_of.size());
  if (n_rb < 1) throw std::invalid_argument("allocate_rbs: n_rb must be >= 1");
  GroupAssignment out;
  out.group_of = group_of;
  out.rb_sets.assign(k, {});
  for (int c = 0; c < g; ++c) {
    std::vector<int> members;
    for (int i = 0; i < k; ++i) {
      if (group_of[i] == c) members.push_back(i);  // ascending id by scan order
    }
    const int m = static_cast<int>(members.size());
    if (m == 0) continue;
    if (m > n_rb) out.overflow = true;
    const int base = n_rb / m;
    const int extra = n_rb % m;
    int next = 0;
    for (int idx = 0; idx < m; ++idx) {
      const int take = base + (idx < extra ? 1 : 0);
      auto& set = out.rb_sets[members[idx]];
      for (int r = 0; r < take; ++r) set.push_back(next + r);
      next += take;
    }
  }
  return out;
}

}  // namespace v2x
