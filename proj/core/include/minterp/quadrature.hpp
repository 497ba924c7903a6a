#ifndef MINTERP_QUADRATURE_HPP
#define MINTERP_QUADRATURE_HPP

#include <Eigen/Dense>

namespace minterp {

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Gauss-Legendre rule mapped to [a, b].
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes,
                    Eigen::VectorXd& weights);

/// Uniform angles t_k = 2*pi*k/n, k = 0..n-1. The equal-weight mean over
/// this grid is the trapezoidal rule for (1/2pi) * integral over the circle,
/// spectrally accurate for smooth periodic integrands.
Eigen::VectorXd circle_grid(int n);

}  // namespace minterp

#endif
