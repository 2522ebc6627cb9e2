#include "sasfocus/metrics.hpp"

#include "sasfocus/fft.hpp"
#include "sasfocus/phase.hpp"

#include <cmath>

namespace sasfocus {

MetricKind parse_metric(const std::string& name) {
  if (name == "mns") return MetricKind::mns();
  if (name == "me") return MetricKind::me();
  if (name == "osf") return MetricKind::osf();
  if (name == "ssi") return MetricKind::ssi();
  throw std::invalid_argument("unknown metric: " + name);
}

std::string metric_name(const MetricKind& kind) {
  switch (kind.name) {
    case MetricName::MNS: return "mns";
    case MetricName::ME: return "me";
    case MetricName::OSF: return "osf";
    case MetricName::SSI: return "ssi";
  }
  return "?";
}

namespace {

void mean_stddev(const RealImage& mag, double& mean, double& sd) {
  double sum = 0.0;
  for (double v : mag.data) sum += v;
  mean = sum / static_cast<double>(mag.size());
  double acc = 0.0;
  for (double v : mag.data) acc += (v - mean) * (v - mean);
  sd = std::sqrt(acc / static_cast<double>(mag.size()));
}

}  // namespace

double metric_value(const MetricKind& kind, const RealImage& mag) {
  switch (kind.name) {
    case MetricName::MNS: {
      double mean, sd;
      mean_stddev(mag, mean, sd);
      if (mean <= 0.0) throw std::domain_error("mns undefined: zero mean magnitude");
      return sd / mean;
    }
    case MetricName::ME: {
      double acc = 0.0;
      for (double v : mag.data) {
        const double p = v * v;
        if (p > 0.0) acc += p * std::log(p);
      }
      return acc;
    }
    case MetricName::OSF: {
      if (kind.osf_b <= 0.0) throw std::invalid_argument("osf: b must be > 0");
      double acc = 0.0;
      for (double v : mag.data) acc += std::log(v * v + kind.osf_b);
      return acc;
    }
    case MetricName::SSI: {
      double acc = 0.0;
      for (double v : mag.data) acc += v * v * v * v;
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

double metric_value(const MetricKind& kind, const SlcImage& g) {
  return metric_value(kind, magnitude(g));
}

double mns(const SlcImage& g) { return metric_value(MetricKind::mns(), g); }
double me(const SlcImage& g) { return metric_value(MetricKind::me(), g); }
double osf(const SlcImage& g, double b) { return metric_value(MetricKind::osf(b), g); }
double ssi(const SlcImage& g) { return metric_value(MetricKind::ssi(), g); }

double objective_value(const MetricKind& kind, const RealImage& mag) {
  // ME as printed is the negative-entropy form (it grows as energy
  // concentrates), so it is maximized as written; OSF's log-sum shrinks for
  // sharper imagery (sum-of-logs is largest for uniform intensity), so its
  // sharpness objective is the negated expression.
  const double v = metric_value(kind, mag);
  return kind.name == MetricName::OSF ? -v : v;
}

RealImage objective_slope(const MetricKind& kind, const RealImage& mag) {
  RealImage slope(mag.rows, mag.cols);
  const double n = static_cast<double>(mag.size());
  switch (kind.name) {
    case MetricName::MNS: {
      double mean, sd;
      mean_stddev(mag, mean, sd);
      if (mean <= 0.0) throw std::domain_error("mns undefined: zero mean magnitude");
      if (sd == 0.0) break;  // flat image: stationary, subgradient 0
      for (std::size_t i = 0; i < mag.size(); ++i) {
        const double d = (mag.data[i] - mean) / (n * sd * mean) - sd / (n * mean * mean);
        slope.data[i] = -d;
      }
      break;
    }
    case MetricName::ME:
      // objective = +sum a^2 ln a^2, so the minimization slope is its negative
      for (std::size_t i = 0; i < mag.size(); ++i) {
        const double a = mag.data[i];
        slope.data[i] = (a > 0.0) ? -(2.0 * a * std::log(a * a) + 2.0 * a) : 0.0;
      }
      break;
    case MetricName::OSF:
      if (kind.osf_b <= 0.0) throw std::invalid_argument("osf: b must be > 0");
      // objective = -sum ln(a^2 + b)
      for (std::size_t i = 0; i < mag.size(); ++i) {
        const double a = mag.data[i];
        slope.data[i] = 2.0 * a / (a * a + kind.osf_b);
      }
      break;
    case MetricName::SSI:
      for (std::size_t i = 0; i < mag.size(); ++i) {
        const double a = mag.data[i];
        slope.data[i] = -4.0 * a * a * a;
      }
      break;
  }
  return slope;
}

MetricGradient sharpness_grad(const MetricKind& kind, const ApertureSpectrum& G_e,
                              const PhasePolynomial& p, const WeightFn& weight) {
  const std::size_t m = G_e.rows;
  const auto phi = eval_phase(p, m);
  const ApertureSpectrum H = apply_phase(G_e, phi, -1);
  const SlcImage g = ifft_along_track(H);
  const RealImage mag = magnitude(g);

  RealImage w(G_e.rows, G_e.cols, 1.0);
  if (weight.kind != WeightFn::Kind::Identity)
    w = weight.apply(magnitude(ifft_along_track(G_e)));

  RealImage a(mag.rows, mag.cols);
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] = w.data[i] * mag.data[i];
  const RealImage slope = objective_slope(kind, a);

  // slope through the weight, then the shared magnitude/ifft adjoint
  RealImage d_mag(mag.rows, mag.cols);
  for (std::size_t i = 0; i < d_mag.size(); ++i)
    d_mag.data[i] = slope.data[i] * w.data[i];
  const std::vector<double> dphi = phase_slope_adjoint(H, g, d_mag);

  MetricGradient grad;
  accumulate_coeff_slope(dphi, grad.d_coeffs);
  for (double v : grad.d_coeffs)
    if (!std::isfinite(v)) throw std::runtime_error("sharpness_grad: non-finite gradient");
  return grad;
}

}  // namespace sasfocus
