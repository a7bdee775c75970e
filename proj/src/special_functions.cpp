#include "bdspec/special_functions.hpp"

#include <cmath>
#include <vector>

#include "bdspec/errors.hpp"

namespace bdspec {

double chebyshev_u(long n, double y) {
    if (n < -2) throw OutOfDomain("chebyshev_u: n must be >= -2");
    if (n == -2) return -1.0;
    if (n == -1) return 0.0;
    double prev = 0.0;  // U_{-1}
    double cur = 1.0;   // U_0
    for (long k = 0; k < n; ++k) {
        double next = 2.0 * y * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double chebyshev_t(long n, double y) {
    if (n < 0) throw OutOfDomain("chebyshev_t: n must be >= 0");
    if (n == 0) return 1.0;
    double prev = 1.0;  // T_0
    double cur = y;     // T_1
    for (long k = 1; k < n; ++k) {
        double next = 2.0 * y * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

constexpr double kSeriesCut = 25.0;

// I_n(z) e^{-s}: power series sum_k (z/2)^{n+2k} / (k! (n+k)!), damped by e^{-s}.
// The leading factor is carried in log space so large n cannot overflow.
double series_i_scaled(long n, double z, double s) {
    double log_lead = n * std::log(z / 2.0) - std::lgamma(double(n) + 1.0) - s;
    double term = std::exp(log_lead);
    double sum = term;
    double q = z * z / 4.0;
    for (long k = 0; k < 4000; ++k) {
        term *= q / (double(k + 1) * double(n + k + 1));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// Miller backward recurrence: I_{k-1} = I_{k+1} + (2k/z) I_k run downward from a
// start index where I is negligible, normalized by e^z = I_0 + 2 sum_{k>=1} I_k.
// Returns e^{-z} I_n(z).
double miller_i_scaled(long n, double z) {
    long base = std::max<long>(n, (long)std::ceil(z));
    long start = base + 18 + (long)std::ceil(3.0 * std::sqrt((double)base + 1.0));
    double yk1 = 0.0;    // y_{k+1}
    double yk = 1e-280;  // y_k at k = start
    double norm = 0.0;
    double yn = (n == start) ? yk : 0.0;
    norm += 2.0 * yk;
    for (long k = start; k >= 1; --k) {
        double ykm1 = yk1 + (2.0 * k / z) * yk;
        yk1 = yk;
        yk = ykm1;
        long idx = k - 1;
        norm += (idx == 0) ? yk : 2.0 * yk;
        if (idx == n) yn = yk;
        if (std::fabs(yk) > 1e260) {
            yk *= 1e-260;
            yk1 *= 1e-260;
            norm *= 1e-260;
            yn *= 1e-260;
        }
    }
    return yn / norm;
}

}  // namespace

double bessel_i_scaled(long n, double z) {
    if (n < 0) throw OutOfDomain("bessel_i: order must be >= 0 (use I_{-n} = I_n)");
    if (z < 0.0) throw OutOfDomain("bessel_i: argument must be >= 0");
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    if (z <= kSeriesCut) return series_i_scaled(n, z, z);
    return miller_i_scaled(n, z);
}

double bessel_i(long n, double z) {
    if (n < 0) throw OutOfDomain("bessel_i: order must be >= 0 (use I_{-n} = I_n)");
    if (z < 0.0) throw OutOfDomain("bessel_i: argument must be >= 0");
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    if (z <= kSeriesCut) return series_i_scaled(n, z, 0.0);
    return miller_i_scaled(n, z) * std::exp(z);
}

}  // namespace bdspec
