#include "chiral/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chiral/partitions.hpp"

namespace chiral {

namespace {

using cd = std::complex<double>;

double closed_moment(const SteadyStateSolution& sol, const CumulantKey& key) {
  if (key.empty()) return 1.0;
  if (key.order() <= sol.moments.max_order()) return sol.moments.value(key);
  return moment_from_cumulants(key, sol.cumulants);
}

// Per-site operator in a normal-ordered product.
enum class SiteOp { raise, lower, number };

struct PauliTerm {
  cd coefficient;
  Pauli pauli;
};

std::array<PauliTerm, 2> expand(SiteOp op) {
  switch (op) {
    case SiteOp::raise: return {{{0.5, Pauli::x}, {cd(0, 0.5), Pauli::y}}};
    case SiteOp::lower: return {{{0.5, Pauli::x}, {cd(0, -0.5), Pauli::y}}};
    default: return {{{0.5, Pauli::identity}, {0.5, Pauli::z}}};
  }
}

// <prod_s op_s> for distinct sorted atoms.
cd product_moment(const SteadyStateSolution& sol, const std::vector<std::pair<int, SiteOp>>& sites) {
  const int n = static_cast<int>(sites.size());
  cd total = 0.0;
  for (unsigned choice = 0; choice < (1u << n); ++choice) {
    cd coef = 1.0;
    std::vector<Site> paulis;
    for (int i = 0; i < n; ++i) {
      const PauliTerm t = expand(sites[i].second)[(choice >> i) & 1u];
      coef *= t.coefficient;
      if (t.pauli != Pauli::identity) paulis.push_back({sites[i].first, to_axis(t.pauli)});
    }
    total += coef * closed_moment(sol, CumulantKey::from_sites(paulis));
  }
  return total;
}

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int a = start; a <= n; ++a) {
    cur.push_back(a);
    subsets(n, k, a + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  subsets(n, k, 1, cur, out);
  return out;
}

double halley(double x, double w) {
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

}  // namespace

double elastic_power(const SteadyStateSolution& sol) {
  const double a = std::sqrt(input_power(sol.params));
  const double c = std::sqrt(sol.params.beta);
  return std::norm(a - cd(0.0, c) * collective_moment(sol, 0, 1));
}

double inelastic_power(const SteadyStateSolution& sol) {
  const cd s = collective_moment(sol, 0, 1);
  return sol.params.beta * (collective_moment(sol, 1, 1).real() - std::norm(s));
}

PowerBreakdown power_breakdown(const SteadyStateSolution& sol) {
  PowerBreakdown p;
  p.p_in = input_power(sol.params);
  p.p_el = elastic_power(sol);
  p.p_ie = inelastic_power(sol);
  p.p_out = p.p_el + p.p_ie;
  p.physical = p.p_ie >= 0.0;
  return p;
}

double lambert_w(double x) {
  if (!(x >= 0.0)) throw std::domain_error("lambert_w needs x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w;
  if (x < 1.0) {
    w = x * (1.0 - x);
    if (w <= 0.0) w = std::log1p(x);
  } else {
    const double l = std::log(x);
    w = x < 3.0 ? std::log1p(x) * 0.8 : l - std::log(l);
  }
  return halley(x, w);
}

double lambert_w_exp(double log_x) {
  if (log_x < 300.0) return lambert_w(std::exp(log_x));
  // w + ln w = log_x
  double w = log_x - std::log(log_x);
  for (int it = 0; it < 100; ++it) {
    const double step = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 1e-15 * w) break;
  }
  return w;
}

double lambert_power(double z, const SystemParams& params) {
  const SystemParams p = validate(params);
  const double p_in = input_power(p);
  const double s = 8.0 * p.drive_ratio;
  if (s < 1e-200) return p_in * std::exp(-4.0 * p.beta * z);
  return p_in * lambert_w_exp(std::log(s) + s - 4.0 * p.beta * z) / s;
}

std::optional<double> od_star(double drive_ratio, double beta) {
  if (!(drive_ratio >= 1.0 / 24.0)) return std::nullopt;
  return std::log(24.0 * drive_ratio) + 8.0 * drive_ratio + 2.0 * beta - 1.0 / 3.0;
}

std::vector<double> first_row_correlation_approx(const SystemParams& params) {
  const SystemParams p = validate(params);
  const std::vector<double> a = mean_field_alphas(p);
  std::vector<double> z(p.n_atoms + 1, 0.0);
  for (int j = 1; j <= p.n_atoms; ++j) z[j] = -1.0 / (1.0 + 8.0 * a[j - 1] * a[j - 1]);
  std::vector<double> out(p.n_atoms + 1, 0.0);
  double prod = 1.0;
  for (int j = 2; j <= p.n_atoms; ++j) {
    out[j] = p.beta * (1.0 + z[1]) * z[j] * prod;
    prod *= 1.0 + p.beta * z[j];
  }
  return out;
}

CorrelationMap correlation_map(const SteadyStateSolution& sol, Axis first, Axis second) {
  if (sol.params.truncation_order < 2) throw std::invalid_argument("correlation map needs TO >= 2");
  const int n = sol.n_atoms();
  CorrelationMap map;
  map.first = first;
  map.second = second;
  map.n_atoms = n;
  map.matrix.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      map.matrix[static_cast<std::size_t>(i - 1) * n + (j - 1)] = sol.cumulants.value({{i, first}, {j, second}});
  map.first_row_approx = first_row_correlation_approx(sol.params);
  map.od_star_predicted = od_star(sol.params.drive_ratio, sol.params.beta);
  if (map.od_star_predicted) map.j_star_predicted = *map.od_star_predicted / (4.0 * sol.params.beta);
  double best = -1.0;
  for (int j = 2; j <= n; ++j) {
    const double v = std::abs(map.at(1, j));
    if (v > best) {
      best = v;
      map.j_star_numeric = j;
    }
  }
  map.od_star_numeric = 4.0 * sol.params.beta * map.j_star_numeric;
  return map;
}

cd collective_moment(const SteadyStateSolution& sol, int p, int q) {
  if (p < 0 || q < 0 || p > 2 || q > 2) throw std::invalid_argument("collective moments limited to p, q <= 2");
  const int n = sol.n_atoms();
  if (p > n || q > n) return 0.0;
  const auto raised = subsets(n, p), lowered = subsets(n, q);
  cd total = 0.0;
  std::vector<std::pair<int, SiteOp>> sites;
  for (const auto& I : raised)
    for (const auto& K : lowered) {
      sites.clear();
      std::size_t a = 0, b = 0;
      while (a < I.size() || b < K.size()) {
        if (b == K.size() || (a < I.size() && I[a] < K[b])) sites.emplace_back(I[a++], SiteOp::raise);
        else if (a == I.size() || K[b] < I[a]) sites.emplace_back(K[b++], SiteOp::lower);
        else {
          sites.emplace_back(I[a], SiteOp::number);
          ++a;
          ++b;
        }
      }
      total += product_moment(sol, sites);
    }
  // ordered index tuples over distinct sites
  const double perms = (p == 2 ? 2.0 : 1.0) * (q == 2 ? 2.0 : 1.0);
  return perms * total;
}

G2Result g2_zero(const SteadyStateSolution& sol) {
  const double a = std::sqrt(input_power(sol.params));
  const double c = std::sqrt(sol.params.beta);
  const cd i(0.0, 1.0);
  const cd s01 = collective_moment(sol, 0, 1), s10 = std::conj(s01);
  const cd s11 = collective_moment(sol, 1, 1);
  const cd s02 = collective_moment(sol, 0, 2), s20 = std::conj(s02);
  const cd s12 = collective_moment(sol, 1, 2), s21 = std::conj(s12);
  const cd s22 = collective_moment(sol, 2, 2);
  const double a2 = a * a, c2 = c * c;
  const cd num = a2 * a2 + 2.0 * i * a2 * a * c * (s10 - s01) - a2 * c2 * (s02 + s20) + 4.0 * a2 * c2 * s11 +
                 2.0 * i * a * c2 * c * (s21 - s12) + c2 * c2 * s22;
  const cd out = a2 + i * a * c * (s10 - s01) + c2 * s11;
  G2Result r;
  r.p_out = out.real();
  r.value = num.real() / (r.p_out * r.p_out);
  r.physical = r.value >= 0.0;
  r.trusted_order = sol.params.truncation_order != 2;
  return r;
}

double mandel_q(double p_out, double g2_0, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  return p_out * tau * (g2_0 - 1.0);
}

double single_atom_tau(double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  return 1.0 / std::sqrt(1.0 + s);
}

SourceInputs single_atom_source(double s, double beta) {
  SourceInputs in;
  in.p_out = beta * s / (2.0 * (1.0 + s));
  in.g2 = 0.0;
  in.tau = single_atom_tau(s);
  return in;
}

double single_atom_q(double s, double beta) { return -beta * s / (2.0 * std::pow(1.0 + s, 1.5)); }

}  // namespace chiral
