#ifndef SASFOCUS_METRICS_HPP
#define SASFOCUS_METRICS_HPP

#include "sasfocus/slc.hpp"
#include "sasfocus/weights.hpp"

namespace sasfocus {

enum class MetricName { MNS, ME, OSF, SSI };

struct MetricKind {
  MetricName name = MetricName::MNS;
  double osf_b = 1e-6;  // OSF stabilizer, must be > 0

  static MetricKind mns() { return {MetricName::MNS}; }
  static MetricKind me() { return {MetricName::ME}; }
  static MetricKind osf(double b = 1e-6) { return {MetricName::OSF, b}; }
  static MetricKind ssi() { return {MetricName::SSI}; }
};

MetricKind parse_metric(const std::string& name);
std::string metric_name(const MetricKind& kind);

/// stddev(|g|) / mean(|g|), population standard deviation.
double mns(const SlcImage& g);
/// sum |g|^2 ln(|g|^2), with 0 ln 0 := 0.
double me(const SlcImage& g);
/// sum ln(|g|^2 + b).
double osf(const SlcImage& g, double b);
/// sum |g|^4.
double ssi(const SlcImage& g);

/// The printed metric value evaluated on a magnitude image.
double metric_value(const MetricKind& kind, const RealImage& mag);
double metric_value(const MetricKind& kind, const SlcImage& g);

/// The value the optimizer maximizes: the printed metric for MNS, ME and
/// SSI; negated for OSF, whose log-sum is smaller for sharper imagery.
double objective_value(const MetricKind& kind, const RealImage& mag);

/// d(-objective)/d(mag), elementwise — slope of the minimization target
/// with respect to each magnitude sample.
RealImage objective_slope(const MetricKind& kind, const RealImage& mag);

struct MetricGradient {
  double d_coeffs[PhasePolynomial::kCoeffCount] = {};
};

/// Analytic gradient of -objective(w .* |ifft(apply_phase(G_e, phi(c), -1))|)
/// with respect to the phase-polynomial coefficients c_2..c_10. The weight
/// map is evaluated on |ifft(G_e)| and held fixed.
MetricGradient sharpness_grad(const MetricKind& kind, const ApertureSpectrum& G_e,
                              const PhasePolynomial& p, const WeightFn& weight);

}  // namespace sasfocus

#endif
