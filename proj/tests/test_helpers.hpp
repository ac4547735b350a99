#pragma once

#include <random>

#include "catlab/states.hpp"

namespace catlab::testing {

inline ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

inline PureState random_pure(const Dims& dims, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector v(total_dim(dims));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    return PureState(std::move(v), dims);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace catlab::testing
