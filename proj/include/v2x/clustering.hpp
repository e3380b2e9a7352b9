#pragma once

#include <random>
#include <vector>

#include "v2x/mobility.hpp"

namespace v2x {

struct SimilarityMatrix {
  int k = 0;
  double zeta = 30.0;
  double phi = 150.0;
  std::vector<double> s;  // row-major k*k, symmetric, unit diagonal

  double at(int i, int j) const { return s[static_cast<std::size_t>(i) * k + j]; }
  double& at(int i, int j) { return s[static_cast<std::size_t>(i) * k + j]; }
};

struct GroupAssignment {
  std::vector<int> group_of;            // pair -> group index in [0, g)
  std::vector<std::vector<int>> rb_sets;  // pair -> sorted RB indices
  bool overflow = false;  // some group outnumbered the RBs; tail pairs got none
};

// Gaussian kernel on pair midpoints with hard cutoff at phi.
SimilarityMatrix similarity_matrix(const std::vector<Vec2>& midpoints,
                                   double zeta, double phi,
                                   const RoadNetwork& network);

// Normalized-Laplacian spectral embedding + k-means. Deterministic given rng
// state. Guarantees exactly g nonempty groups when k >= g.
std::vector<int> spectral_cluster(const SimilarityMatrix& s, int g,
                                  std::mt19937_64& rng);

// Within each group, RBs 0..n_rb-1 are split contiguously in ascending pair-id
// order with sizes differing by at most one.
GroupAssignment allocate_rbs(const std::vector<int>& group_of, int g, int n_rb);

// Exposed pieces (used directly by tests).
std::vector<double> normalized_laplacian(const SimilarityMatrix& s);

// Cyclic Jacobi eigendecomposition of a symmetric n*n matrix (row-major).
// On return `a` holds the diagonalized matrix, `evals[i]` its eigenvalues and
// `evecs` the eigenvectors as columns (evecs[r*n+i] = component r of vector i).
void jacobi_eigen_sym(std::vector<double>& a, int n, std::vector<double>& evecs,
                      std::vector<double>& evals);

std::vector<int> kmeans(const std::vector<double>& rows, int n, int dim, int k,
                        std::mt19937_64& rng);

}  // namespace v2x
