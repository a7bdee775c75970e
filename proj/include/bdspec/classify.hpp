#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdspec/model.hpp"

namespace bdspec {

enum class Verdict { Transient, NullRecurrent, PositiveRecurrent };

std::string verdict_name(Verdict v);

/// Recurrence classification with both evidence routes: the structural
/// spectral test (support/atom at 0) and the rate-series test. They agree on
/// every catalog model.
struct Classification {
    Verdict verdict = Verdict::Transient;
    Verdict spectral_evidence = Verdict::Transient;
    Verdict ratesum_evidence = Verdict::Transient;
};

Classification classify(const CatalogModel& model);

/// Sum of all potential coefficients, with the geometric tails summed in
/// closed form; +infinity when divergent.
double total_potential_mass(const CatalogModel& model);

/// psi({0}) = 1 / sum_n pi_n when the sum converges, else 0.
double atom_at_zero_weight(const CatalogModel& model);

/// Normalized invariant distribution pi_n / sum pi over [n_lo, n_hi];
/// nullopt unless the model is positive recurrent.
std::optional<std::vector<double>> invariant_distribution(const CatalogModel& model, long n_lo,
                                                          long n_hi);

}  // namespace bdspec
