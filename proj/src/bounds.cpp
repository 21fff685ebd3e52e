#include "polaron/bounds.hpp"

#include <cmath>

#include "polaron/errors.hpp"

namespace polaron {

double ly_lower_bound(double alpha) {
    if (alpha < 0.0) throw ParameterError("ly_lower_bound: alpha must be >= 0");
    return -16.0 / (3.0 * M_PI * M_PI) * alpha * alpha - 1.5;
}

LyIntermediate ly_intermediate(double alpha, double K) {
    if (!(K > 0.0)) throw ParameterError("ly_intermediate: K must be positive");
    return {1.0 - 8.0 * alpha / (3.0 * M_PI * K), -2.0 * alpha / M_PI * K, -1.5};
}

double chi_norm(double K_cut) {
    if (!(K_cut > 0.0)) throw ParameterError("chi_norm: K must be positive");
    return 4.0 * M_PI / 3.0 / K_cut;
}

CutoffNorms cutoff_error_norms(double Lambda) {
    if (!(Lambda > 0.0)) throw ParameterError("cutoff_error_norms: Lambda must be positive");
    return {std::sqrt(4.0 * M_PI / Lambda),
            std::sqrt(4.0 * M_PI / (5.0 * std::pow(Lambda, 5)))};
}

TwoTermPrediction two_term_prediction(double e_pek_domain, double trace_correction,
                                      double alpha) {
    if (trace_correction > 0.0)
        throw ParameterError("two_term_prediction: trace correction must be <= 0");
    if (!(alpha > 0.0)) throw ParameterError("two_term_prediction: alpha must be positive");
    const double sc = e_pek_domain + trace_correction / (2.0 * alpha * alpha);
    return {sc, alpha * alpha * sc};
}

BoundsReport sandwich(double alpha, double e_pek, std::optional<double> numeric_energy,
                      std::optional<double> two_term_original, double Lambda) {
    BoundsReport r;
    r.alpha = alpha;
    r.ly_lower = ly_lower_bound(alpha);
    r.gaussian_upper = -alpha * alpha / (3.0 * M_PI);
    r.pekar_upper = alpha * alpha * e_pek;
    r.numeric_energy = numeric_energy;
    r.two_term = two_term_original;
    const auto norms = cutoff_error_norms(Lambda);
    r.cutoff_order1 = norms.order1;
    r.cutoff_order3 = norms.order3;

    if (r.pekar_upper > r.gaussian_upper + 1e-12)
        throw ConsistencyError("sandwich: pekar_upper above gaussian_upper");
    if (numeric_energy) {
        if (*numeric_energy < r.ly_lower - 1e-9)
            throw ConsistencyError("sandwich: numeric_energy below ly_lower");
        if (*numeric_energy > r.pekar_upper + 1e-9)
            throw ConsistencyError("sandwich: numeric_energy above pekar_upper");
    }
    return r;
}

}  // namespace polaron
