#pragma once

namespace spiked {

struct AiryEval {
    double x;
    double ai;
    double ai_prime;
};

/// Ai(x) and Ai'(x) for |x| <= 40 (Boost.Math backend). Throws InputError outside.
AiryEval airy(double x);

/// Extended-precision Ai and Ai', for initializing the Painleve integration.
void airy_long(long double x, long double& ai, long double& ai_prime);

/// Bi(x), Bi'(x); used only for Wronskian checks.
AiryEval airy_bi(double x);

/// Tail integral of Ai over [x, infinity) for x >= -25. A cumulative table on [-25, 30]
/// (step 0.01) plus a 10-point Gauss correction inside the cell; leading asymptotics
/// beyond 30. The table is built once on first use and shared read-only afterwards.
double airy_tail_integral(double x);

/// Airy kernel K(X, Y) = int_0^inf Ai(u+X) Ai(u+Y) du by adaptive Gauss-Kronrod.
/// Arguments are ordered before integrating, so K(X, Y) == K(Y, X) bit for bit.
/// Requires X, Y >= -15.
double airy_kernel(double X, double Y);

/// Ai'(X)^2 - X Ai(X)^2, the closed form of K(X, X).
double airy_kernel_diagonal_closed_form(double X);

}  // namespace spiked
