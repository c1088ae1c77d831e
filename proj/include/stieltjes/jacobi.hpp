#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace stieltjes::jacobi {

/// Truncated Jacobi operator J_n: diagonal v_0..v_{n-1}, off-diagonal h_0..h_{n-2}.
struct JacobiMatrix {
    Eigen::VectorXd v;
    Eigen::VectorXd h;
    double s1 = 1.0;  ///< first coefficient; the spectral measure has mass 1/s1

    Eigen::Index size() const { return v.size(); }
    Eigen::MatrixXd dense() const;
};

/// Ascending nodes with positive weights.
struct DiscreteMeasure {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    double total_mass() const { return weights.sum(); }
    /// sum of weights of nodes <= x
    double cumulative(double x) const;
    /// sum_j nodes_j^k weights_j
    double moment(int k) const;
};

/// J_n from s_1..s_{2n}:
///   v_0 = 1/(s1 s2),  v_k = (1/s_{2k+1})(1/s_{2k} + 1/s_{2k+2}),
///   h_k = 1/(s_{2k+2} sqrt(s_{2k+1} s_{2k+3})).
/// Throws ParameterError for an odd or empty block or a non-positive entry.
JacobiMatrix build_jacobi(const Eigen::VectorXd& s);

/// Number of eigenvalues strictly below lambda, from the signs of the
/// pivots of J - lambda I.  If a pivot vanishes exactly, lambda is moved up
/// by one ulp and the count restarts.
Eigen::Index sturm_count(const JacobiMatrix& J, double lambda);

/// Gershgorin interval containing the spectrum.
std::pair<double, double> gershgorin_bounds(const JacobiMatrix& J);

/// All eigenvalues in ascending order by Sturm bisection.  Each is bracketed
/// to width <= tol * |lambda| (bisection also stops when the bracket cannot
/// shrink in floating point).  Index ranges are split across `threads`
/// workers; the result does not depend on the split.
Eigen::VectorXd eigenvalues(const JacobiMatrix& J, double tol = 1e-14, int threads = 1);

/// Unit eigenvector for an isolated eigenvalue estimate by inverse iteration.
Eigen::VectorXd inverse_iteration(const JacobiMatrix& J, double lambda);

/// Gaussian quadrature measure sigma_n: nodes are the eigenvalues, weights the
/// squared first eigenvector components times 1/s1.
DiscreteMeasure quadrature_measure(const JacobiMatrix& J, double tol = 1e-14, int threads = 1);

/// Weights (sum_{l<n} psi_l(lambda_j)^2)^{-1} from the orthonormal polynomial
/// recurrence psi_0 = sqrt(s1), log-scaled against overflow.
Eigen::VectorXd christoffel_weights(const JacobiMatrix& J, const Eigen::VectorXd& nodes);

/// h_{n-1} psi_n(lambda) and psi_{n-1}(lambda) from the same recurrence
/// (h_{n-1} lies outside J_n, so psi_n is known up to that positive factor;
/// its zeros are the eigenvalues).  Both are scaled by exp(-log_scale).
struct PsiValue {
    double psi_n;
    double psi_n_minus_1;
    double log_scale;
};
PsiValue orthonormal_polynomial(const JacobiMatrix& J, double lambda);

/// N_n on a grid: #{nodes < lambda} / n.
Eigen::VectorXd counting_measure(const Eigen::VectorXd& nodes, const Eigen::VectorXd& grid);

}  // namespace stieltjes::jacobi
