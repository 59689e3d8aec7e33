// Test-side oracles and generators. Nothing here calls into the library's
// numerics, so comparisons against it are independent.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "anderson/disorder.hpp"
#include "anderson/geometry.hpp"

namespace testing {

/// Eigenvalues 2 - 2cos(j pi / (l + 1)), j = 1..l, of the free path on l sites.
inline std::vector<double> path_spectrum(int l) {
    std::vector<double> out;
    for (int j = 1; j <= l; ++j)
        out.push_back(2.0 - 2.0 * std::cos(j * std::numbers::pi / (l + 1)));
    std::sort(out.begin(), out.end());
    return out;
}

/// Dense tridiagonal path matrix with diagonal 2 + v.
inline Eigen::MatrixXd path_matrix(const std::vector<double>& v) {
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        H(i, i) = 2.0 + v[static_cast<std::size_t>(i)];
        if (i + 1 < n)
            H(i, i + 1) = H(i + 1, i) = -1.0;
    }
    return H;
}

inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

/// Field with explicit values on 1d sites lo..hi.
inline anderson::DisorderRealization field_1d(int lo, const std::vector<double>& values) {
    anderson::SiteField f;
    for (std::size_t i = 0; i < values.size(); ++i)
        f.emplace(anderson::Site{lo + static_cast<int>(i)}, values[i]);
    return anderson::DisorderRealization(std::move(f));
}

/// Zero field on every site of the given box in Z^d.
inline anderson::DisorderRealization zero_field(const std::vector<anderson::Site>& sites) {
    anderson::SiteField f;
    for (const auto& s : sites)
        f.emplace(s, 0.0);
    return anderson::DisorderRealization(std::move(f));
}

inline anderson::ConfigPoint point(std::vector<int> coords, int n, int d) {
    return anderson::ConfigPoint(n, d, std::move(coords));
}

/// Every point of the box [lo, hi]^{size} enumerated lexicographically.
inline std::vector<std::vector<int>> box(int size, int lo, int hi) {
    std::vector<std::vector<int>> out;
    std::vector<int> x(static_cast<std::size_t>(size), lo);
    while (true) {
        out.push_back(x);
        int k = size - 1;
        while (k >= 0 && x[static_cast<std::size_t>(k)] == hi) {
            x[static_cast<std::size_t>(k)] = lo;
            --k;
        }
        if (k < 0)
            return out;
        ++x[static_cast<std::size_t>(k)];
    }
}

}  // namespace testing
