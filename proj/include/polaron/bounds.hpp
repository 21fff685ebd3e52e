#pragma once

#include <optional>
#include <string>

namespace polaron {

// Rigorous lower bound -(16/(3 pi^2)) alpha^2 - 3/2 (optimized commutator
// bound with K = 8 alpha / (3 pi)).
double ly_lower_bound(double alpha);

// One-commutator remainder data at kinetic cutoff K: the kinetic prefactor
// 1 - 8 alpha/(3 pi K) and the field/constant remainders.
struct LyIntermediate {
    double kinetic_prefactor;
    double field_shift;     // -(2 alpha / pi) K  (complete-the-square bound below cutoff)
    double constant_shift;  // -3/2
};
LyIntermediate ly_intermediate(double alpha, double K);

// ||chi_x^j||^2 = (4 pi / 3) / K.
double chi_norm(double K_cut);

// Tail norms of the commutator chain at UV cutoff Lambda:
//   order1 = (int_{|k|>L} |k|^-4)^{1/2} = sqrt(4 pi / Lambda)
//   order3 = (int_{|k|>L} |k|^-8)^{1/2} = sqrt(4 pi / (5 Lambda^5))
struct CutoffNorms {
    double order1;
    double order3;
};
CutoffNorms cutoff_error_norms(double Lambda);

// e_pek + trace_correction/(2 alpha^2) in strong-coupling units.
struct TwoTermPrediction {
    double strong_coupling;
    double original_units;
};
TwoTermPrediction two_term_prediction(double e_pek_domain, double trace_correction,
                                      double alpha);

struct BoundsReport {
    double alpha = 0.0;
    double ly_lower = 0.0;
    double gaussian_upper = 0.0;  // -alpha^2/(3 pi)
    double pekar_upper = 0.0;     // alpha^2 e_pek
    std::optional<double> numeric_energy;  // ED value, original units
    std::optional<double> two_term;        // confined prediction, original units
    double cutoff_order1 = 0.0, cutoff_order3 = 0.0;
};

// Assembles the report and enforces the sandwich ordering
//   ly_lower <= numeric <= pekar_upper <= gaussian_upper
// whenever a numeric energy is present; violations throw naming the pair.
BoundsReport sandwich(double alpha, double e_pek,
                      std::optional<double> numeric_energy = std::nullopt,
                      std::optional<double> two_term_original = std::nullopt,
                      double Lambda = 4.0 * 3.14159265358979323846);

}  // namespace polaron
