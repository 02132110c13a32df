#pragma once

#include <cstddef>
#include <vector>

namespace sigfolio {

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Deterministic; fine for the small matrices this project needs (feature
// covariances up to a few hundred rows).
struct SymmetricEigen {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // row-major: vectors[i*n + j] = component j of eigenvector i
};

SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, std::size_t n);

// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
std::vector<double> project_simplex(std::vector<double> v);

}  // namespace sigfolio
