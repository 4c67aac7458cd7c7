#pragma once

#include <random>

#include "lifshitz/fdt_lab.hpp"

namespace testing_support {

inline lifshitz::Matrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    lifshitz::Matrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            m(r, c) = {g(rng), g(rng)};
    return 0.5 * (m + m.adjoint());
}

// A with its diagonal in the eigenbasis of H removed (no static part)
inline lifshitz::Matrix remove_static_part(const lifshitz::Matrix& h, const lifshitz::Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<lifshitz::Matrix> es(h);
    lifshitz::Matrix ae = es.eigenvectors().adjoint() * a * es.eigenvectors();
    for (int k = 0; k < ae.rows(); ++k)
        ae(k, k) = 0.0;
    lifshitz::Matrix out = es.eigenvectors() * ae * es.eigenvectors().adjoint();
    return 0.5 * (out + out.adjoint());
}

}  // namespace testing_support
