#include "bdspec/classify.hpp"

#include <cmath>
#include <limits>

#include "bdspec/spectral.hpp"

namespace bdspec {

namespace {

constexpr double kEqTol = 1e-12;
constexpr long kProbe = 40;  // beyond any defect; all rate rules have period <= 2

double inf() { return std::numeric_limits<double>::infinity(); }

// Ratio of pi over one period-2 step in the given direction; the catalog tails
// are exactly geometric, so this single ratio decides convergence.
double pi_block_ratio(const CatalogModel& m, int direction) {
    long n = direction > 0 ? kProbe : -kProbe;
    long n2 = direction > 0 ? n + 2 : n - 2;
    return m.potential_coefficient(n2) / m.potential_coefficient(n);
}

// Ratio of the escape-series terms 1/(lambda_n pi_n) over one period-2 step.
double escape_block_ratio(const CatalogModel& m, int direction) {
    long n = direction > 0 ? kProbe : -kProbe;
    long n2 = direction > 0 ? n + 2 : n - 2;
    double t1 = 1.0 / (m.rates_at(n).birth * m.potential_coefficient(n));
    double t2 = 1.0 / (m.rates_at(n2).birth * m.potential_coefficient(n2));
    return t2 / t1;
}

bool diverges(double ratio) { return ratio >= 1.0 - kEqTol; }

// Closed-form tail sum_{k>=0} block(start + 2k) for a geometric period-2 tail.
double geometric_tail(const CatalogModel& m, long start, int direction) {
    long step = direction > 0 ? 1 : -1;
    double b0 = m.potential_coefficient(start) + m.potential_coefficient(start + step);
    double ratio = m.potential_coefficient(start + 2 * step) / m.potential_coefficient(start);
    if (diverges(ratio)) return inf();
    return b0 / (1.0 - ratio);
}

Verdict ratesum_verdict(const CatalogModel& m) {
    if (m.state_space() == StateSpace::HalfLine) {
        // Absorbing half-line queue (mu_0 > 0): the paper's verdicts correspond
        // to joint divergence of the escape series and the potential mass
        // (both diverge exactly at lambda = mu).
        bool esc = diverges(escape_block_ratio(m, +1));
        bool mass = diverges(pi_block_ratio(m, +1));
        if (esc && mass) return Verdict::NullRecurrent;
        return Verdict::Transient;
    }
    bool up = diverges(escape_block_ratio(m, +1));
    bool down = diverges(escape_block_ratio(m, -1));
    if (!(up && down)) return Verdict::Transient;
    if (std::isfinite(total_potential_mass(m))) return Verdict::PositiveRecurrent;
    return Verdict::NullRecurrent;
}

Verdict spectral_verdict(const CatalogModel& m) {
    double scale, smin;
    bool atom_at_zero = false;
    if (m.state_space() == StateSpace::HalfLine) {
        SpectralMeasure s = spectral_measure_halfline(m, Side::Plus);
        smin = s.support_min();
        scale = s.support_max();
        for (const auto& a : s.atoms) atom_at_zero |= a.location <= kEqTol * scale;
    } else {
        SpectralMatrix s = spectral_matrix(m);
        smin = s.support_min();
        scale = s.support_max();
        for (const auto& a : s.atoms) atom_at_zero |= a.location <= kEqTol * scale;
    }
    if (atom_at_zero) return Verdict::PositiveRecurrent;
    // no atom: null recurrent iff the AC support closure reaches 0
    // (the catalog densities behave like x^{-1/2} there, so the x^{-1}
    // integral diverges structurally)
    if (smin <= kEqTol * scale) return Verdict::NullRecurrent;
    return Verdict::Transient;
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Transient: return "transient";
        case Verdict::NullRecurrent: return "null-recurrent";
        case Verdict::PositiveRecurrent: return "positive-recurrent";
    }
    return "?";
}

Classification classify(const CatalogModel& model) {
    Classification c;
    c.spectral_evidence = spectral_verdict(model);
    c.ratesum_evidence = ratesum_verdict(model);
    c.verdict = c.spectral_evidence;
    return c;
}

double total_potential_mass(const CatalogModel& model) {
    // explicit pi_n for |n| < kProbe, closed geometric tails beyond
    double sum = 0.0;
    for (long n = -kProbe + 1; n <= kProbe - 1; ++n) {
        if (model.state_space() == StateSpace::HalfLine && n < 0) continue;
        sum += model.potential_coefficient(n);
    }
    double up = geometric_tail(model, kProbe, +1);
    if (!std::isfinite(up)) return inf();
    sum += up;
    if (model.state_space() == StateSpace::Bilateral) {
        double down = geometric_tail(model, -kProbe, -1);
        if (!std::isfinite(down)) return inf();
        sum += down;
    }
    return sum;
}

double atom_at_zero_weight(const CatalogModel& model) {
    double mass = total_potential_mass(model);
    if (!std::isfinite(mass)) return 0.0;
    if (model.state_space() == StateSpace::HalfLine) return 0.0;  // absorbing queue: no jump
    // a finite potential mass with an escaping side is transient, not positive
    if (classify(model).verdict != Verdict::PositiveRecurrent) return 0.0;
    return 1.0 / mass;
}

std::optional<std::vector<double>> invariant_distribution(const CatalogModel& model, long n_lo,
                                                          long n_hi) {
    if (n_lo > n_hi) throw OutOfDomain("empty window");
    if (classify(model).verdict != Verdict::PositiveRecurrent) return std::nullopt;
    double mass = total_potential_mass(model);
    std::vector<double> out(n_hi - n_lo + 1);
    for (long n = n_lo; n <= n_hi; ++n)
        out[n - n_lo] = model.potential_coefficient(n) / mass;
    return out;
}

}  // namespace bdspec
