#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace gxr {

using Complex = std::complex<double>;

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Composite rule: `panels` equal panels on [a, b], each with an n-point rule.
GaussRule composite_gauss(int n, int panels, double a, double b);

/// Adaptive Gauss-Legendre integration of a smooth function on [a, b]: panels
/// are bisected until a 10-point and a 20-point rule agree to the tolerance.
Complex adaptive_integrate(const std::function<Complex(double)>& f, double a, double b, double tol = 1e-14,
                           int max_depth = 30);

/// Legendre-type orthogonal polynomial values (Jacobi P_k^{(a,b)}(x)) by the
/// three-term recurrence; fills out[0..kmax].
void jacobi_all(int kmax, double a, double b, double x, double* out);
double jacobi(int k, double a, double b, double x);

} // namespace gxr
