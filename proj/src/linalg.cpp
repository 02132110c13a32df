#include "sigfolio/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigfolio/error.hpp"

namespace sigfolio {

SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, std::size_t n) {
    if (matrix.size() != n * n) throw Error("jacobi_eigen: matrix size mismatch");
    std::vector<double> a = matrix;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return std::sqrt(2.0 * s);
    };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i * n + j]));
    const double tol = 1e-14 * std::max(scale, 1e-300) * double(n);

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= tol * 1e-2) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p];
                    const double aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a[p * n + j];
                    const double aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double vpj = v[p * n + j];
                    const double vqj = v[q * n + j];
                    v[p * n + j] = c * vpj - s * vqj;
                    v[q * n + j] = s * vpj + c * vqj;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        out.values[r] = a[order[r] * n + order[r]];
        for (std::size_t j = 0; j < n; ++j) out.vectors[r * n + j] = v[order[r] * n + j];
    }
    return out;
}

std::vector<double> project_simplex(std::vector<double> v) {
    const std::size_t n = v.size();
    if (n == 0) throw Error("project_simplex: empty vector");
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double tau = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cumsum += u[i];
        const double candidate = (cumsum - 1.0) / double(i + 1);
        if (u[i] - candidate > 0.0) tau = candidate;
    }
    for (double& x : v) x = std::max(x - tau, 0.0);
    return v;
}

}  // namespace sigfolio
