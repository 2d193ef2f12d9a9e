#pragma once

#include <span>

#include "micov/errors.hpp"

namespace micov {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (modified Lentz), relative accuracy ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of Student's t with `df` degrees of freedom:
/// p = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_tailed_p(double t, int df);

struct PairedTTestResult {
    double t = 0.0;
    double p = 1.0;
    int df = 0;
};

/// Two-tailed paired t-test, t = mean(d) / (sd(d)/sqrt(n)) with the
/// (n-1)-denominator standard deviation. Throws UndefinedTError when the
/// differences have zero variance.
PairedTTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

} // namespace micov
