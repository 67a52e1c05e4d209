#include "exi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace exi {

double frechet_quantile(double u, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("frechet: need alpha > 0");
  if (!(u > 0.0) || !(u < 1.0)) throw std::invalid_argument("frechet: need 0 < u < 1");
  return std::pow(-std::log(u), -1.0 / alpha);
}

double pareto_quantile(double u, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pareto: need alpha > 0");
  if (!(u > 0.0) || !(u < 1.0)) throw std::invalid_argument("pareto: need 0 < u < 1");
  return std::pow(1.0 - u, -1.0 / alpha);
}

double sample_innovation(const InnovationSpec& spec, SplitMix64& rng) {
  switch (spec.kind) {
    case Innovation::frechet:
      return frechet_quantile(rng.uniform(), spec.param);
    case Innovation::pareto:
      return pareto_quantile(rng.uniform(), spec.param);
    case Innovation::student_t: {
      const double nu = spec.param;
      if (!(nu > 0.0)) throw std::invalid_argument("student_t: need nu > 0");
      const double z = rng.normal();
      const double chi2 = 2.0 * rng.gamma(0.5 * nu);
      return z / std::sqrt(chi2 / nu);
    }
  }
  throw std::logic_error("sample_innovation: unknown innovation");
}

Series armax_recursion(double b, const Series& z) {
  if (!(b >= 0.0) || !(b < 1.0))
    throw std::invalid_argument("armax: need 0 <= b < 1");
  if (z.size() == 0) return z;
  Series x(z.size());
  x[0] = z[0];
  const double scale = 1.0 - b;
  for (Index t = 1; t < z.size(); ++t)
    x[t] = std::max(b * x[t - 1], scale * z[t]);
  return x;
}

Series linear_filter(const std::vector<double>& psi, const Series& z) {
  const auto p = static_cast<Index>(psi.size()) - 1;
  if (psi.empty() || z.size() <= p)
    throw std::invalid_argument("linear_filter: need innovations beyond lag order");
  Series y(z.size() - p);
  for (Index t = 0; t < y.size(); ++t) {
    double acc = 0.0;
    for (Index j = 0; j <= p; ++j) acc += psi[static_cast<std::size_t>(j)] * z[t + p - j];
    y[t] = acc;
  }
  return y;
}

Series moving_max_filter(const std::vector<double>& a, const Series& z) {
  const auto m = static_cast<Index>(a.size());
  if (a.empty() || z.size() < m)
    throw std::invalid_argument("moving_max_filter: need innovations beyond window");
  Series x(z.size() - m + 1);
  for (Index t = 0; t < x.size(); ++t) {
    double best = a[0] * z[t + m - 1];
    for (Index i = 1; i < m; ++i)
      best = std::max(best, a[static_cast<std::size_t>(i)] * z[t + m - 1 - i]);
    x[t] = best;
  }
  return x;
}

ProcessSpec ProcessSpec::armax(double b, double alpha, Index burn_in) {
  ProcessSpec s;
  s.family = Family::armax;
  s.b = b;
  s.alpha = alpha;
  s.burn_in = burn_in;
  s.innovation = {Innovation::frechet, alpha};
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::linear(std::vector<double> psi, InnovationSpec innovation) {
  ProcessSpec s;
  s.family = Family::linear;
  s.coeffs = std::move(psi);
  s.innovation = innovation;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::moving_max(std::vector<double> a, InnovationSpec innovation) {
  ProcessSpec s;
  s.family = Family::moving_max;
  s.coeffs = std::move(a);
  s.innovation = innovation;
  s.validate();
  return s;
}

void ProcessSpec::validate() const {
  if (!(innovation.param > 0.0))
    throw std::invalid_argument("process: innovation parameter must be > 0");
  switch (family) {
    case Family::armax:
      if (!(b >= 0.0) || !(b < 1.0))
        throw std::invalid_argument("armax: need 0 <= b < 1");
      if (!(alpha > 0.0)) throw std::invalid_argument("armax: need alpha > 0");
      if (burn_in < 0) throw std::invalid_argument("armax: need burn_in >= 0");
      return;
    case Family::linear: {
      if (coeffs.empty())
        throw std::invalid_argument("linear: need at least one coefficient");
      bool any = false;
      for (const double c : coeffs) {
        if (!std::isfinite(c)) throw std::invalid_argument("linear: non-finite coefficient");
        if (c != 0.0) any = true;
      }
      if (!any) throw std::invalid_argument("linear: all coefficients are zero");
      return;
    }
    case Family::moving_max:
      if (coeffs.empty())
        throw std::invalid_argument("moving_max: need at least one coefficient");
      for (const double c : coeffs)
        if (!(c > 0.0) || !std::isfinite(c))
          throw std::invalid_argument("moving_max: coefficients must be positive");
      if (!innovation.nonnegative())
        throw std::invalid_argument("moving_max: innovations must be nonnegative");
      return;
  }
  throw std::logic_error("process: unknown family");
}

std::string ProcessSpec::label() const {
  std::ostringstream out;
  const auto innov_name = [](Innovation k) {
    switch (k) {
      case Innovation::frechet: return "frechet";
      case Innovation::pareto: return "pareto";
      case Innovation::student_t: return "t";
    }
    return "?";
  };
  switch (family) {
    case Family::armax:
      out << "armax(b=" << b << ",alpha=" << alpha << ")";
      break;
    case Family::linear:
    case Family::moving_max:
      out << (family == Family::linear ? "linear(psi=" : "moving_max(a=");
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        out << (i ? "," : "") << coeffs[i];
      out << ";" << innov_name(innovation.kind) << "," << innovation.param << ")";
      break;
  }
  return out.str();
}

Series gen_process(const ProcessSpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("gen_process: need n >= 1");
  SplitMix64 rng(seed);
  switch (spec.family) {
    case ProcessSpec::Family::armax: {
      const Index total = n + spec.burn_in;
      Series z(total);
      for (Index t = 0; t < total; ++t)
        z[t] = frechet_quantile(rng.uniform(), spec.alpha);
      const Series x = armax_recursion(spec.b, z);
      return x.tail(n);
    }
    case ProcessSpec::Family::linear: {
      const auto p = static_cast<Index>(spec.coeffs.size()) - 1;
      Series z(n + p);
      for (Index t = 0; t < z.size(); ++t)
        z[t] = sample_innovation(spec.innovation, rng);
      return linear_filter(spec.coeffs, z);
    }
    case ProcessSpec::Family::moving_max: {
      const auto m = static_cast<Index>(spec.coeffs.size());
      Series z(n + m - 1);
      for (Index t = 0; t < z.size(); ++t)
        z[t] = sample_innovation(spec.innovation, rng);
      return moving_max_filter(spec.coeffs, z);
    }
  }
  throw std::logic_error("gen_process: unknown family");
}

double theoretical_theta(const ProcessSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case ProcessSpec::Family::armax:
      return 1.0 - std::pow(spec.b, spec.alpha);
    case ProcessSpec::Family::linear: {
      if (!spec.innovation.symmetric())
        throw std::invalid_argument(
            "theoretical_theta: linear-process formula requires symmetric "
            "innovations");
      const double a = spec.innovation.tail_index();
      double plus = 0.0, minus = 0.0, norm = 0.0;
      for (const double c : spec.coeffs) {
        plus = std::max(plus, c);
        minus = std::max(minus, -c);
        norm += std::pow(std::abs(c), a);
      }
      return (std::pow(plus, a) + std::pow(minus, a)) / norm;
    }
    case ProcessSpec::Family::moving_max: {
      const double a = spec.innovation.tail_index();
      double top = 0.0, norm = 0.0;
      for (const double c : spec.coeffs) {
        top = std::max(top, std::pow(c, a));
        norm += std::pow(c, a);
      }
      return top / norm;
    }
  }
  throw std::logic_error("theoretical_theta: unknown family");
}

}  // namespace exi
