#pragma once

namespace fracrecon::specfun {

/// Euler Gamma function (Lanczos, g = 7, 9 coefficients; reflection below 0.5).
/// Throws Pole at non-positive integers and Overflow above ~171.6.
double gamma(double x);

/// log|Gamma(x)|; `sign` (optional) receives the sign of Gamma(x).
double lgamma(double x, int* sign = nullptr);

double beta(double a, double b);

/// Generalized binomial coefficient C(y, k) = Gamma(y+1) / (Gamma(k+1) Gamma(y-k+1)),
/// evaluated through log-Gamma differences with sign tracking. Zero when y-k+1 is a
/// non-positive integer.
double binomial(double y, double k);

struct GammaMin {
    double x_star;        // Gamma(1 + x_star) = min over x >= 0 of Gamma(x)
    double gamma_at_min;  // Gamma(1 + x_star)
};

/// Minimum of Gamma on the positive axis, found once by golden-section search.
const GammaMin& gamma_min();

/// Shorthand for gamma_min().gamma_at_min, the universal lower bound of Gamma on [1, 2].
double gamma_lower();

class MLParams {
public:
    MLParams(double theta1, double theta2);
    double theta1() const noexcept { return theta1_; }
    double theta2() const noexcept { return theta2_; }

private:
    double theta1_;
    double theta2_;
};

inline constexpr double kMittagLefflerMaxArg = 50.0;

/// Two-parametric Mittag-Leffler function E_{theta1,theta2}(z) by Taylor summation.
/// Domain |z| <= 50; for negative z the summation must also keep its cancellation
/// error under 1e-12, otherwise Domain is thrown.
double mittag_leffler(const MLParams& p, double z);

/// 1 / (Gamma(1+x*) (1-z)), an upper bound of E_{theta1,theta2}(-z) on z in [0,1)
/// whenever theta1 in (0,1] and theta2 >= theta1.
double ml_upper_bound(const MLParams& p, double z);

}  // namespace fracrecon::specfun
