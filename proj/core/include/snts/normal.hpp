#pragma once

namespace snts {

[[nodiscard]] double normal_pdf(double x) noexcept;
[[nodiscard]] double normal_cdf(double x) noexcept;

/// Inverse standard normal CDF. Acklam's rational approximation followed by
/// one Halley step against erfc; absolute error below 1e-12 on (0,1).
/// Throws InvalidArgument outside the open unit interval.
[[nodiscard]] double normal_quantile(double p);

/// Upper alpha/2 point z_{alpha/2} = Phi^{-1}(1 - alpha/2). Returns 0 at
/// alpha = 1.
[[nodiscard]] double two_sided_critical(double alpha);

}  // namespace snts
