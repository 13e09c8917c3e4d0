#include "chiral/eom.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "chiral/partitions.hpp"
#include "json.hpp"
#include "row_accumulator.hpp"

namespace chiral {

namespace {

using detail::RowAccumulator;

struct StageIndex {
  StageIndex(int stage, int max_order, VariableSet mode) : layout(stage, max_order) {
    for (int k = 1; k <= max_order && k <= stage; ++k) {
      begin[k] = layout.block_size(k, stage - 1);
      const std::size_t end = layout.block_size(k, stage);
      slot[k].assign(end - begin[k], -1);
      for (std::size_t s = begin[k]; s < end; ++s) {
        CumulantKey key = layout.key_at(k, s);
        if (mode == VariableSet::reduced && !is_reduced_key(key)) continue;
        slot[k][s - begin[k]] = static_cast<int>(variables.size());
        variables.push_back(key);
      }
    }
  }

  int var(const CumulantKey& key) const { return slot[key.order()][layout.index(key) - begin[key.order()]]; }

  KeyLayout layout;
  std::array<std::size_t, CumulantKey::kCapacity + 1> begin{};
  std::array<std::vector<int>, CumulantKey::kCapacity + 1> slot;
  std::vector<CumulantKey> variables;
};

// Wraps a moment table so lookups of lower-stage moments are cheap.
struct LowerMoments {
  const MomentTable& table;
  double operator()(const CumulantKey& key) const {
    return key.empty() ? 1.0 : table.block(key.order())[table.layout().index(key)];
  }
};

}  // namespace

const char* to_string(VariableSet mode) { return mode == VariableSet::full ? "full" : "reduced"; }

VariableSet parse_variable_set(std::string_view text) {
  if (text == "full") return VariableSet::full;
  if (text == "reduced") return VariableSet::reduced;
  throw ValidationError("mode must be full or reduced");
}

std::vector<CumulantKey> stage_variables(int stage, int max_order, VariableSet mode) {
  return StageIndex(stage, max_order, mode).variables;
}

StageSystem generate_stage_system(const SystemParams& params, int stage, const MomentTable& lower, VariableSet mode,
                                  StageForm form) {
  const int top = params.truncation_order;
  if (stage < 1) throw std::invalid_argument("stage index must be >= 1");
  if (stage > 1 && (lower.n_atoms() < stage - 1 || lower.max_order() < std::min(top, stage - 1)))
    throw std::invalid_argument("missing lower-stage moments for stage " + std::to_string(stage));

  const StageIndex index(stage, top, mode);
  const int dim = static_cast<int>(index.variables.size());
  const AdjointGenerator gen(std::sqrt(params.drive_ratio), params.beta);
  const LowerMoments m{lower};
  const KeyLayout* lower_layout = stage > 1 ? &lower.layout() : nullptr;

  std::vector<std::vector<std::pair<int, double>>> rows(dim);
  std::vector<double> constant(dim, 0.0);
  RowAccumulator acc(dim);

  for (int r = 0; r < dim; ++r) {
    const CumulantKey& key = index.variables[r];
    double c0 = 0.0;
    gen.apply(key, [&](const CumulantKey& q, double c) {
      if (q.empty()) {
        c0 += c;
        return;
      }
      if (q.max_atom() != stage) {
        c0 += c * m(q);
        return;
      }
      // m(Q) = sum over B containing the stage atom of k(B) m(Q \ B); the
      // order l+1 cumulant is zero by the closure.
      const int qk = q.order();
      const unsigned others = (1u << (qk - 1)) - 1;
      const unsigned last = 1u << (qk - 1);
      unsigned xmask = 0;
      for (int i = 0; i < qk; ++i)
        if (q.axis(i) == Axis::x) xmask |= 1u << i;
      for (unsigned s = 0; s <= others; ++s) {
        if ((s & others) != s) continue;
        const unsigned bmask = s | last;
        if (__builtin_popcount(bmask) > top) continue;
        if (mode == VariableSet::reduced && (__builtin_popcount(bmask & xmask) & 1)) continue;
        const unsigned rmask = others & ~s;
        double w = c;
        if (rmask) {
          int ro;
          const std::size_t ri = lower_layout->subset_index(q, rmask, ro);
          w *= lower.block(ro)[ri];
        }
        if (w == 0.0) continue;
        int bo;
        const std::size_t bi = index.layout.subset_index(q, bmask, bo);
        acc.add(index.slot[bo][bi - index.begin[bo]], w);
      }
    });
    if (form == StageForm::cumulant) {
      // k(K) = m(K) - sum over proper B containing the stage atom of k(B) m(K \ B)
      const int k = key.order();
      const unsigned others = (1u << (k - 1)) - 1;
      const unsigned last = 1u << (k - 1);
      for (unsigned s = 0; s < others; ++s) {
        if ((s & others) != s) continue;
        const CumulantKey b = key.subset(s | last);
        if (mode == VariableSet::reduced && !is_reduced_key(b)) continue;
        const double w = m(key.subset(others & ~s));
        if (w == 0.0) continue;
        const int rb = index.var(b);
        for (const auto& [col, v] : rows[rb]) acc.add(col, -w * v);
        c0 -= w * constant[rb];
      }
    }
    rows[r] = acc.flush();
    constant[r] = c0;
  }

  StageSystem sys;
  sys.stage_index = stage;
  sys.variables = index.variables;
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < dim; ++r)
    for (const auto& [col, v] : rows[r]) trips.emplace_back(r, col, v);
  sys.matrix.resize(dim, dim);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.source = Eigen::Map<Eigen::VectorXd>(constant.data(), dim);
  return sys;
}

StageSystem generate_stage_system(const SystemParams& params, int stage, const CumulantTable& lower, VariableSet mode,
                                  StageForm form) {
  return generate_stage_system(params, stage, moments_from_cumulants(lower), mode, form);
}

std::string stage_system_json(const StageSystem& system) {
  nlohmann::json j;
  j["stage"] = system.stage_index;
  std::vector<std::string> vars;
  for (const auto& k : system.variables) vars.push_back(k.to_string());
  j["variables"] = vars;
  const Eigen::MatrixXd dense(system.matrix);
  std::vector<double> flat;
  for (int r = 0; r < dense.rows(); ++r)
    for (int c = 0; c < dense.cols(); ++c) flat.push_back(dense(r, c));
  j["matrix"] = flat;
  j["source"] = std::vector<double>(system.source.data(), system.source.data() + system.source.size());
  return j.dump();
}

namespace {

// Converts moment rates to cumulant rates by differentiating
// k(K) = m(K) - sum_{B containing the first site, B != K} k(B) m(K \ B).
CumulantTable cumulant_rates(const CumulantTable& state, const MomentTable& moments, const MomentTable& mdot) {
  CumulantTable kdot(state.n_atoms(), state.max_order());
  const KeyLayout& layout = state.layout();
  for (int k = 1; k <= state.max_order(); ++k) {
    const unsigned full = (1u << k) - 1;
    for (std::size_t i = 0; i < kdot.block(k).size(); ++i) {
      const CumulantKey key = layout.key_at(k, i);
      double v = mdot.block(k)[i];
      for (unsigned rest = 2; rest < full; ++rest) {
        if (rest & 1u) continue;
        const CumulantKey b = key.subset(full & ~rest);
        const CumulantKey r = key.subset(rest);
        const std::size_t ib = layout.index(b), ir = layout.index(r);
        v -= kdot.block(b.order())[ib] * moments.block(r.order())[ir] +
             state.block(b.order())[ib] * mdot.block(r.order())[ir];
      }
      kdot.block(k)[i] = v;
    }
  }
  return kdot;
}

}  // namespace

CumulantTable generated_drift(const CumulantTable& state, const SystemParams& params, VariableSet mode) {
  SystemParams p = params;
  p.truncation_order = state.max_order();
  const MomentTable moments = moments_from_cumulants(state);
  MomentTable mdot(state.n_atoms(), state.max_order());
  for (int n = 1; n <= state.n_atoms(); ++n) {
    const StageSystem sys = generate_stage_system(p, n, moments, mode, StageForm::moment);
    Eigen::VectorXd v(sys.variables.size());
    for (std::size_t i = 0; i < sys.variables.size(); ++i) v(i) = state.value(sys.variables[i]);
    const Eigen::VectorXd d = sys.drift(v);
    for (std::size_t i = 0; i < sys.variables.size(); ++i) mdot.at(sys.variables[i]) = d(i);
  }
  return cumulant_rates(state, moments, mdot);
}

CumulantTable closure_drift(const CumulantTable& state, const SystemParams& params, VariableSet mode) {
  const int top = state.max_order();
  const MomentTable moments = moments_from_cumulants(state);
  MomentTable mdot(state.n_atoms(), top);
  const AdjointGenerator gen(std::sqrt(params.drive_ratio), params.beta);
  const KeyLayout& layout = state.layout();
  for (int k = 1; k <= top; ++k)
    for (std::size_t i = 0; i < mdot.block(k).size(); ++i) {
      const CumulantKey key = layout.key_at(k, i);
      if (mode == VariableSet::reduced && !is_reduced_key(key)) continue;
      double v = 0.0;
      gen.apply(key, [&](const CumulantKey& q, double c) {
        if (q.empty())
          v += c;
        else if (q.order() <= top)
          v += c * moments.value(q);
        else
          v += c * moment_from_cumulants(q, state);
      });
      mdot.block(k)[i] = v;
    }
  return cumulant_rates(state, moments, mdot);
}

std::vector<double> effective_drives(const CumulantTable& state, const SystemParams& params) {
  const int n = state.n_atoms();
  std::vector<double> alpha(n + 1);
  alpha[0] = std::sqrt(params.drive_ratio);
  for (int j = 1; j <= n; ++j) alpha[j] = alpha[j - 1] - 0.5 * params.beta * state.value({{j, Axis::y}});
  return alpha;
}

CumulantTable hardcoded_to2_rhs(const CumulantTable& state, const SystemParams& params, Transcription form) {
  if (state.max_order() < 2) throw std::invalid_argument("hardcoded TO2 equations need pair cumulants");
  const int n = state.n_atoms();
  const double beta = params.beta;
  const auto alpha_vec = effective_drives(state, params);
  auto alpha = [&](int j) { return alpha_vec[j - 1]; };
  auto mean = [&](int j, Axis a) { return state.value({{j, a}}); };
  const Axis X = Axis::x, Y = Axis::y, Z = Axis::z;
  // <<s_i^a s_j^b>> for any pair of atoms; on one atom the Pauli product is
  // reduced first and only its real part is kept.
  auto K = [&](int i, Axis a, int j, Axis b) -> double {
    if (i == j) return (a == b ? 1.0 : 0.0) - mean(i, a) * mean(i, b);
    if (i > j) return state.value({{j, b}, {i, a}});
    return state.value({{i, a}, {j, b}});
  };

  CumulantTable d(n, 2);
  for (int j = 1; j <= n; ++j) {
    double sy = 0.0, sz = 0.0;
    for (int l = 1; l < j; ++l) {
      sy += K(j, Z, l, Y);
      sz += K(j, X, l, X) + K(j, Y, l, Y);
    }
    d.set({{j, X}}, -0.5 * mean(j, X));
    d.set({{j, Y}}, -0.5 * mean(j, Y) - 2.0 * alpha(j) * mean(j, Z) + beta * sy);
    d.set({{j, Z}}, 2.0 * alpha(j) * mean(j, Y) - mean(j, Z) - 1.0 - beta * sz);
  }
  for (int j = 2; j <= n; ++j)
    for (int i = 1; i < j; ++i) {
      const double zi = mean(i, Z), zj = mean(j, Z), yi = mean(i, Y), yj = mean(j, Y);
      double xx = -K(i, X, j, X) + beta * K(i, Z, j, Z) + beta * zi * zj;
      double yy = -K(i, Y, j, Y) - 2.0 * alpha(j) * K(i, Y, j, Z) - 2.0 * alpha(i) * K(i, Z, j, Y);
      double yz = -1.5 * K(i, Y, j, Z) - 2.0 * alpha(i) * K(i, Z, j, Z) + 2.0 * alpha(j) * K(i, Y, j, Y);
      double zz = -2.0 * K(i, Z, j, Z) + 2.0 * alpha(i) * K(i, Y, j, Z) + 2.0 * alpha(j) * K(i, Z, j, Y);
      // zy is the yz equation with the roles of i and j exchanged.
      double zy = -1.5 * K(j, Y, i, Z) - 2.0 * alpha(j) * K(j, Z, i, Z) + 2.0 * alpha(i) * K(j, Y, i, Y);
      for (int l = 1; l < i; ++l) {
        xx += beta * K(l, X, j, X) * zi;
        yy += beta * K(l, Y, j, Y) * zi;
        yz += beta * K(l, Y, j, Z) * zi;
        zz -= beta * K(l, Y, j, Z) * yi;
        zy -= beta * K(l, Y, j, Y) * yi;
      }
      for (int l = 1; l < j; ++l) {
        xx += beta * K(l, X, i, X) * zj;
        yy += beta * K(l, Y, i, Y) * zj;
        yz -= beta * K(l, Y, i, Y) * yj;
        zz -= beta * K(l, Y, i, Z) * yj;
        zy += beta * K(l, Y, i, Z) * zj;
      }
      if (form == Transcription::corrected) {
        // Direct (i,j) pair terms missing from the printed yy, yz and zz
        // equations, and the matching terms of the zy equation.
        const double kxx = K(i, X, j, X), kyy = K(i, Y, j, Y), kyz = K(i, Y, j, Z), kzy = K(i, Z, j, Y),
                     kzz = K(i, Z, j, Z);
        yy += beta * (kzz + zi * zj) - 2.0 * beta * yi * kyz;
        yz += beta * (2.0 * yi * kyy + yi * kxx - kzy - zi * yj);
        zy -= beta * (yi * kzz + (1.0 + zi) * kyz + yi * zj);
        zz += beta * (yi * kzy + (1.0 + zi) * (kxx + kyy) + yi * yj);
      }
      d.set({{i, X}, {j, X}}, xx);
      d.set({{i, Y}, {j, Y}}, yy);
      d.set({{i, Y}, {j, Z}}, yz);
      d.set({{i, Z}, {j, Y}}, zy);
      d.set({{i, Z}, {j, Z}}, zz);
    }
  return d;
}

GeneratorReport verify_generator(const SystemParams& params, VariableSet mode, int samples, std::uint64_t seed) {
  SystemParams p = validate(params);
  p.truncation_order = 2;
  const int n = p.n_atoms;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GeneratorReport rep;
  rep.n_atoms = n;
  rep.mode = mode;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    CumulantTable state(n, 2);
    for (int k = 1; k <= 2; ++k)
      for (std::size_t i = 0; i < state.block(k).size(); ++i) {
        const CumulantKey key = state.layout().key_at(k, i);
        if (is_reduced_key(key)) state.block(k)[i] = (k == 1 ? 0.9 : 0.3) * u(rng);
      }
    const CumulantTable gen = generated_drift(state, p, mode);
    const CumulantTable ref = hardcoded_to2_rhs(state, p, Transcription::corrected);
    const CumulantTable printed = hardcoded_to2_rhs(state, p, Transcription::as_printed);
    gen.for_each([&](const CumulantKey& key, double v) {
      const double expected = is_reduced_key(key) ? ref.value(key) : 0.0;
      const double diff = std::abs(v - expected);
      if (diff > rep.max_discrepancy) {
        rep.max_discrepancy = diff;
        rep.worst_key = key.to_string();
      }
      if (is_reduced_key(key)) rep.printed_discrepancy = std::max(rep.printed_discrepancy, std::abs(v - printed.value(key)));
    });
  }
  rep.pass = rep.max_discrepancy < 1e-10;
  return rep;
}

}  // namespace chiral
