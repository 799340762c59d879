#pragma once

namespace nomalink {

// Mutual information between a BPSK bit and a consistent Gaussian LLR
// L ~ N(sigma^2/2, sigma^2):
//   J(sigma) = 1 - E[ log2(1 + exp(-L)) ].
// Evaluated with high-order Gauss-Hermite quadrature (nodes generated once via
// the Golub-Welsch eigenproblem); absolute accuracy well below 1e-6 over the
// whole range.  J(0) = 0, J is strictly increasing, J(inf) = 1.
double j_function(double sigma);

// Inverse on I in [0, 1): bisection to |J(sigma) - I| <= 1e-9.
double j_inverse(double mutual_info);

}  // namespace nomalink
