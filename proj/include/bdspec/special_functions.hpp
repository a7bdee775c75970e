#pragma once

namespace bdspec {

/// Chebyshev polynomial of the second kind, U_n(y), by forward recurrence.
/// Accepts n >= -2 with U_{-1} = 0 and U_{-2} = -1 (the values the recurrence
/// forces; the alternating-rate closed forms use them at k = 0, 1).
double chebyshev_u(long n, double y);

/// Chebyshev polynomial of the first kind, T_n(y), n >= 0, by forward recurrence.
/// Recurrence rather than cos/acos: the spectral variable lands outside [-1,1]
/// off the support, where the trigonometric form is undefined.
double chebyshev_t(long n, double y);

/// Modified Bessel function of the first kind, I_n(z), integer n >= 0, z >= 0.
/// Power series for z <= 25, Miller backward recurrence with sum-rule
/// normalization above. Absolute accuracy ~1e-13 * e^z over the needed range.
double bessel_i(long n, double z);

/// e^{-z} I_n(z); the transition formulas only ever need this damped product,
/// and the scaled form cannot overflow.
double bessel_i_scaled(long n, double z);

}  // namespace bdspec
