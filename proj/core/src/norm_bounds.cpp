#include "powers/norm_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "powers/errors.hpp"
#include "powers/free_family.hpp"
#include "powers/parallel.hpp"

namespace powers {

namespace {

// ---------------------------------------------------------------------------
// Power iteration on the compressed convolution operator

template <typename T>
struct Csr {
  std::vector<std::size_t> row_begin;
  std::vector<std::uint32_t> col;
  std::vector<T> val;
};

struct BallIndex {
  std::vector<Word> words;
  std::unordered_map<Word, std::uint32_t, WordHash> index;
};

BallIndex make_ball_index(const GroupDescriptor& desc, int radius, std::size_t budget) {
  BallIndex bi;
  bi.words = ball(desc, radius, budget);
  bi.index.reserve(bi.words.size() * 2);
  for (std::uint32_t i = 0; i < bi.words.size(); ++i) bi.index.emplace(bi.words[i], i);
  return bi;
}

// Row i of the compression P lambda(b) P: entries b(w) at column
// index(w^-1 * u_i).
template <typename T>
Csr<T> build_compression(const AlgebraElement& b, const BallIndex& bi,
                         T (*convert)(const Scalar&)) {
  struct Term {
    Word winv;
    T coeff;
  };
  std::vector<Term> terms;
  terms.reserve(b.terms().size());
  for (const auto& [w, c] : b.terms()) terms.push_back({inv(w), convert(c)});

  std::size_t n = bi.words.size();
  Csr<T> m;
  m.row_begin.assign(n + 1, 0);
  std::vector<std::uint32_t> cols(n * terms.size());
  std::vector<T> vals(n * terms.size());
  std::vector<std::size_t> counts(n, 0);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t base = i * terms.size();
      std::size_t k = 0;
      for (const Term& t : terms) {
        auto it = bi.index.find(mul(t.winv, bi.words[i]));
        if (it == bi.index.end()) continue;
        cols[base + k] = it->second;
        vals[base + k] = t.coeff;
        ++k;
      }
      counts[i] = k;
    }
  });
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m.row_begin[i] = total;
    total += counts[i];
  }
  m.row_begin[n] = total;
  m.col.resize(total);
  m.val.resize(total);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t base = i * terms.size();
      std::size_t out = m.row_begin[i];
      for (std::size_t k = 0; k < counts[i]; ++k) {
        m.col[out + k] = cols[base + k];
        m.val[out + k] = vals[base + k];
      }
    }
  });
  return m;
}

double scalar_to_double(const Scalar& c) { return c.to_float().value().real(); }
std::complex<double> scalar_to_complex(const Scalar& c) { return c.to_float().value(); }

template <typename T>
void matvec(const Csr<T>& m, const std::vector<T>& x, std::vector<T>& y) {
  std::size_t n = m.row_begin.size() - 1;
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      T acc{};
      for (std::size_t k = m.row_begin[i]; k < m.row_begin[i + 1]; ++k) acc += m.val[k] * x[m.col[k]];
      y[i] = acc;
    }
  });
}

inline double dot_real(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot_real(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  // Re <b, a> for Hermitian quadratic forms.
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s;
}

template <typename T>
double norm2(const std::vector<T>& x) {
  double s = 0.0;
  for (const T& v : x) s += std::norm(std::complex<double>(v));
  return std::sqrt(s);
}

template <typename T>
double run_power_iteration(const Csr<T>& m, std::size_t n, std::size_t noise_prefix, int iterations,
                           std::uint64_t seed) {
  std::vector<T> x(n, T{}), y(n, T{});
  x[0] = T(1);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < std::min(noise_prefix, n); ++i) {
    // Portable uniform in [0, 0.1): distributions vary across standard
    // libraries, raw bits do not.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x[i] += T(0.1 * u);
  }
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    matvec(m, x, y);
    double xx = dot_real(x, x);
    if (xx <= 0.0) break;
    double q = dot_real(x, y) / xx;
    best = std::max(best, q);
    double ny = norm2(y);
    if (ny == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] * (1.0 / ny);
  }
  return best;
}

bool all_real(const AlgebraElement& a) {
  for (const auto& [w, c] : a.terms()) {
    if (!c.is_real()) return false;
  }
  return true;
}

}  // namespace

double lower_bound_power(const AlgebraElement& a, const BoundConfig& cfg) {
  if (a.is_zero()) throw Error("lower_bound_power on the zero element");
  AlgebraElement b = convolve(adjoint(a), a, cfg.support_cap);
  BallIndex bi = make_ball_index(a.descriptor(), cfg.radius, cfg.support_cap);
  std::size_t noise_prefix =
      static_cast<std::size_t>(ball_size(a.descriptor(), std::min(2, cfg.radius)));

  double best;
  if (all_real(b)) {
    Csr<double> m = build_compression<double>(b, bi, &scalar_to_double);
    best = run_power_iteration(m, bi.words.size(), noise_prefix, cfg.max_iterations, cfg.seed);
  } else {
    Csr<std::complex<double>> m = build_compression<std::complex<double>>(b, bi, &scalar_to_complex);
    best = run_power_iteration(m, bi.words.size(), noise_prefix, cfg.max_iterations, cfg.seed);
  }
  if (best <= 0.0) return 0.0;
  return std::max(0.0, std::sqrt(best) - cfg.tolerance);
}

namespace {

// Real part of trace(x y) = sum_w x(w) y(w^-1) without forming x y.
Rational pair_trace(const AlgebraElement& x, const AlgebraElement& y) {
  const AlgebraElement& small = x.support_size() <= y.support_size() ? x : y;
  const AlgebraElement& large = x.support_size() <= y.support_size() ? y : x;
  Scalar total = Scalar::zero(ScalarMode::exact);
  for (const auto& [w, c] : small.terms()) {
    Scalar other = large.coefficient(inv(w));
    if (!other.is_zero()) total = total + c * other;
  }
  return total.re();
}

struct MomentRun {
  Rational best{0};
  int reached = 0;
  bool exceeded = false;
};

// Powers of b = a*a only up to ceil(depth/2): trace(b^m) splits as a
// pairing of half powers.
MomentRun run_moments(const AlgebraElement& a, int depth, std::size_t support_cap) {
  MomentRun out;
  std::vector<AlgebraElement> powers;  // powers[j] = b^(j+1)
  try {
    powers.push_back(convolve(adjoint(a), a, support_cap));
    int need = (depth + 1) / 2;
    for (int j = 1; j < need; ++j) powers.push_back(convolve(powers.back(), powers.front(), support_cap));
  } catch (const BudgetExceeded&) {
    out.exceeded = true;
    if (powers.empty()) return out;
  }
  int max_m = std::min<int>(depth, 2 * static_cast<int>(powers.size()));
  for (int m = 1; m <= max_m; ++m) {
    int i = m / 2, j = m - i;
    Rational t = i == 0 ? trace(powers[j - 1]).re() : pair_trace(powers[i - 1], powers[j - 1]);
    if (t <= 0) continue;  // exactly zero trace carries no information
    Rational root = nth_root_down(t, static_cast<unsigned>(2 * m));
    out.best = std::max(out.best, root);
    out.reached = m;
  }
  return out;
}

}  // namespace

Rational lower_bound_moments(const AlgebraElement& a, int depth, std::size_t support_cap) {
  if (a.mode() != ScalarMode::exact) throw ModeMismatch("lower_bound_moments requires exact mode");
  if (a.is_zero()) return Rational(0);
  if (depth < 1) throw Error("moment depth must be >= 1");
  MomentRun run = run_moments(a, depth, support_cap);
  if (run.reached < depth && run.exceeded)
    throw BudgetExceeded("moment depth " + std::to_string(depth) + " needs supports beyond the cap (reached " +
                         std::to_string(run.reached) + ")");
  return run.best;
}

namespace {

struct L1PowerRun {
  Rational best;
  int reached = -1;
  bool exceeded = false;
};

L1PowerRun run_l1_power(const AlgebraElement& a, int max_k, std::size_t support_cap) {
  L1PowerRun out;
  out.best = l1_norm_upper(a);
  try {
    AlgebraElement c = convolve(adjoint(a), a, support_cap);
    for (int k = 0; k <= max_k; ++k) {
      if (k > 0) c = convolve(c, c, support_cap);
      unsigned root = 1u << (k + 1);
      Rational bound = nth_root_up(l1_norm_upper(c), root);
      if (out.reached < 0 || bound < out.best) out.best = bound;
      out.reached = k;
    }
  } catch (const BudgetExceeded&) {
    out.exceeded = true;
  }
  return out;
}

}  // namespace

Rational upper_bound_l1_power(const AlgebraElement& a, int k, std::size_t support_cap) {
  if (a.mode() != ScalarMode::exact) throw ModeMismatch("upper_bound_l1_power requires exact mode");
  if (k < 0) throw Error("power depth must be >= 0");
  if (a.is_zero()) return Rational(0);
  L1PowerRun run = run_l1_power(a, k, support_cap);
  if (run.reached < k)
    throw BudgetExceeded("l1-power depth " + std::to_string(k) + " needs supports beyond the cap (reached " +
                         std::to_string(run.reached) + ")");
  return run.best;
}

Rational upper_bound_haagerup(const AlgebraElement& a) {
  if (a.descriptor().kind() != GroupKind::free_group)
    throw WrongBackend("Haagerup bound is specific to free groups");
  AlgebraElement e = to_exact(a);
  std::map<std::int64_t, Rational> stratum_l2sq;
  for (const auto& [w, c] : e.terms()) stratum_l2sq[w.length()] += c.abs_squared();
  Rational total(0);
  for (const auto& [d, sq] : stratum_l2sq) total += Rational(d + 1) * sqrt_up(sq);
  return total;
}

// ---------------------------------------------------------------------------
// Geometric-weight Schur test

namespace {

// Common prefix length of two reduced free words.
int common_prefix(const Word& a, const Word& b) {
  auto la = a.letters(), lb = b.letters();
  std::size_t n = std::min(la.size(), lb.size());
  std::size_t i = 0;
  while (i < n && la[i] == lb[i]) ++i;
  return static_cast<int>(i);
}

// Weighted row sup: max over u in ball(D) of
//   sum_w |a(w)| beta^(|w| - 2 cpl(w, u)).
template <typename Num, typename PowFn>
Num schur_row_sup(const std::vector<std::pair<Word, Num>>& pattern, const std::vector<Word>& probe_ball,
                  const PowFn& pow_fn) {
  Num best{};
  bool first = true;
  for (const Word& u : probe_ball) {
    Num row{};
    for (const auto& [w, c] : pattern) {
      int exponent = static_cast<int>(w.length()) - 2 * common_prefix(w, u);
      row += c * pow_fn(exponent);
    }
    if (first || row > best) {
      best = row;
      first = false;
    }
  }
  return best;
}

}  // namespace

std::optional<Rational> upper_bound_schur(const AlgebraElement& a, std::size_t ball_budget) {
  if (a.descriptor().kind() != GroupKind::free_group)
    throw WrongBackend("Schur bound is specific to free groups");
  if (a.is_zero()) return Rational(0);
  AlgebraElement e = to_exact(a);
  int degree = static_cast<int>(e.degree());
  if (ball_size(e.descriptor(), degree) > ball_budget) return std::nullopt;
  std::vector<Word> probe = ball(e.descriptor(), degree, ball_budget);

  std::vector<std::pair<Word, Rational>> row_pattern, col_pattern;
  std::vector<std::pair<Word, double>> row_pattern_f, col_pattern_f;
  for (const auto& [w, c] : e.terms()) {
    Rational m = c.abs_upper();
    row_pattern.emplace_back(w, m);
    col_pattern.emplace_back(inv(w), m);
    row_pattern_f.emplace_back(w, to_double_up(m));
    col_pattern_f.emplace_back(inv(w), to_double_up(m));
  }

  // Tune beta in floats (golden section on a unimodal-ish objective),
  // then certify at a snapped rational beta.
  auto objective = [&](double beta) {
    auto pf = [beta](int exp) { return std::pow(beta, exp); };
    double r = schur_row_sup(row_pattern_f, probe, pf);
    double c = schur_row_sup(col_pattern_f, probe, pf);
    return std::sqrt(r * c);
  };
  double lo = 0.02, hi = 1.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 28; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double beta_star = std::clamp((lo + hi) / 2, 1e-3, 1.0);
  Rational beta = snap_to_rational(beta_star, 1u << 16);
  if (beta <= 0) beta = Rational(1);
  if (beta > 1) beta = Rational(1);

  // Exact verification: rational beta powers over the finite probe set.
  std::vector<Rational> pos_pows(static_cast<std::size_t>(degree) + 1), neg_pows(pos_pows.size());
  pos_pows[0] = neg_pows[0] = Rational(1);
  for (std::size_t i = 1; i < pos_pows.size(); ++i) {
    pos_pows[i] = pos_pows[i - 1] * beta;
    neg_pows[i] = neg_pows[i - 1] / beta;
  }
  auto pow_exact = [&](int exp) { return exp >= 0 ? pos_pows[static_cast<std::size_t>(exp)]
                                                  : neg_pows[static_cast<std::size_t>(-exp)]; };
  Rational row_sup = schur_row_sup(row_pattern, probe, pow_exact);
  Rational col_sup = schur_row_sup(col_pattern, probe, pow_exact);
  return sqrt_up(row_sup * col_sup);
}

// ---------------------------------------------------------------------------
// Free-position edge bounds

namespace {

struct FreePosition {
  bool applicable = false;
  bool two_sided = false;
  bool exact_weights = false;     // |c| rational, not just bracketed above
  std::vector<Rational> weights;  // |coefficients|, one per family word
};

// Decides whether the support is a pure one-sided family or a pure
// inverse-closed two-sided family over a verified free basis.
FreePosition analyze_free_position(const AlgebraElement& e) {
  FreePosition out;
  if (e.descriptor().kind() != GroupKind::free_group) return out;
  if (e.is_zero()) return out;
  if (!trace(e).is_zero()) return out;  // identity term excluded

  std::vector<Word> family;
  std::vector<Rational> weights;
  std::map<Word, Scalar, WordLess> remaining(e.terms().begin(), e.terms().end());
  bool any_pair = false, any_single = false, all_real = true;
  while (!remaining.empty()) {
    auto [w, c] = *remaining.begin();
    remaining.erase(remaining.begin());
    Word wi = inv(w);
    auto it = remaining.find(wi);
    if (it != remaining.end()) {
      // Two-sided pair; magnitudes must match for the arcsine reduction.
      if (!(c.abs_squared() == it->second.abs_squared())) return out;
      remaining.erase(it);
      any_pair = true;
    } else {
      any_single = true;
    }
    family.push_back(w);
    all_real = all_real && c.is_real();
    weights.push_back(c.abs_upper());  // exact for real, certified up for complex
  }
  if (any_pair && any_single) return out;
  if (!is_free_basis(family)) return out;
  out.applicable = true;
  out.two_sided = any_pair;
  out.exact_weights = all_real;
  out.weights = std::move(weights);
  return out;
}

// One-sided objective f(t) = t + sum_k (sqrt(t^2 + 4 c_k^2) - t)/2;
// every t > 0 upper-bounds the norm of sum c_k u_k for free Haar u_k.
double one_sided_objective(const std::vector<double>& c, double t) {
  double s = t;
  for (double ck : c) s += (std::sqrt(t * t + 4 * ck * ck) - t) / 2;
  return s;
}

// Two-sided objective K(z) = (1 - m + sum_k sqrt(1 + 4 c_k^2 z^2)) / z;
// every z > 0 upper-bounds the edge of the free convolution of the
// arcsine laws of c_k (u_k + u_k*).
double two_sided_objective(const std::vector<double>& c, double z) {
  double s = 1.0 - static_cast<double>(c.size());
  for (double ck : c) s += std::sqrt(1 + 4 * ck * ck * z * z);
  return s / z;
}

template <typename F>
double minimize_unimodal(const F& f, double lo, double hi, int iters) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return (lo + hi) / 2;
}

}  // namespace

FreeEdgeBounds free_edge_bounds(const AlgebraElement& a) {
  FreeEdgeBounds out;
  if (a.descriptor().kind() != GroupKind::free_group) return out;
  AlgebraElement e = to_exact(a);
  FreePosition pos = analyze_free_position(e);
  if (!pos.applicable) return out;

  std::size_t n = pos.weights.size();
  std::vector<double> cf;
  cf.reserve(n);
  bool uniform = true;
  for (const Rational& w : pos.weights) {
    cf.push_back(to_double_up(w));
    uniform = uniform && w == pos.weights.front();
  }
  const Rational& c0 = pos.weights.front();

  // Lower bounds quote the exact edge value, so they need |c| exact
  // (real coefficients) on top of uniformity.
  bool lower_ok = uniform && pos.exact_weights;

  if (!pos.two_sided) {
    if (n == 1) {
      out.upper = c0;
      if (pos.exact_weights) out.lower = c0;
      return out;
    }
    double t_star = minimize_unimodal([&](double t) { return one_sided_objective(cf, t); }, 1e-9, 64.0, 120);
    Rational t = snap_to_rational(std::max(t_star, 1e-9), 1u << 20);
    if (t <= 0) t = Rational(1, 1 << 20);
    Rational sum = t;
    for (const Rational& ck : pos.weights) sum += (sqrt_up(t * t + 4 * ck * ck) - t) / 2;
    out.upper = sum;
    if (lower_ok) out.lower = 2 * c0 * sqrt_down(Rational(static_cast<long>(n) - 1));
  } else {
    if (n == 1) {
      out.upper = 2 * c0;
      if (pos.exact_weights) out.lower = 2 * c0;
      return out;
    }
    double z_star = minimize_unimodal([&](double z) { return two_sided_objective(cf, z); }, 1e-6, 1e6, 160);
    Rational z = snap_to_rational(std::max(z_star, 1e-6), 1u << 20);
    if (z <= 0) z = Rational(1, 1 << 20);
    Rational sum = Rational(1) - Rational(static_cast<long>(n));
    for (const Rational& ck : pos.weights) sum += sqrt_up(Rational(1) + 4 * ck * ck * z * z);
    out.upper = sum / z;
    if (lower_ok) out.lower = 2 * c0 * sqrt_down(Rational(2 * static_cast<long>(n) - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combined estimate

CertifiedUpper certified_upper_bound(const AlgebraElement& a, const BoundConfig& cfg) {
  AlgebraElement e = to_exact(a);
  CertifiedUpper out{l1_norm_upper(e), "l1", {}};
  auto consider = [&out](const Rational& v, const char* method) {
    if (v < out.value) {
      out.value = v;
      out.method = method;
    }
  };

  if (!e.is_zero()) {
    L1PowerRun lp = run_l1_power(e, cfg.power_depth, cfg.support_cap);
    if (lp.reached >= 0) consider(lp.best, "l1-power");
    if (lp.reached < 0 && lp.exceeded) out.degraded.push_back("l1-power");

    if (e.descriptor().kind() == GroupKind::free_group) {
      consider(upper_bound_haagerup(e), "haagerup");
      // Schur beta-tuning sweeps ball(degree); keep the assembled path to
      // small degrees (skipping is routine, not a budget failure).
      if (auto schur = upper_bound_schur(e, 2'000)) consider(*schur, "schur");
      FreeEdgeBounds fe = free_edge_bounds(e);
      if (fe.upper) consider(*fe.upper, "free-edge");
    }
  }
  return out;
}

NormEstimate estimate(const AlgebraElement& a, const BoundConfig& cfg) {
  NormEstimate est;
  est.radius = cfg.radius;
  est.iterations = cfg.max_iterations;
  est.moment_depth = cfg.moment_depth;
  est.power_depth = cfg.power_depth;
  if (a.is_zero()) return est;

  AlgebraElement e = to_exact(a);

  CertifiedUpper ub = certified_upper_bound(e, cfg);
  est.upper = to_double_up(ub.value);
  est.upper_method = ub.method;
  est.degraded = ub.degraded;

  // Lower bounds: the l2 vector bound is free, moments and the free-edge
  // value are exact, power iteration is float and pre-shaved.
  Rational best_exact = sqrt_down(l2_squared(e));
  est.lower_method = "l2-vector";

  MomentRun moments = run_moments(e, cfg.moment_depth, cfg.support_cap);
  est.moment_depth = moments.reached;
  if (moments.reached == 0 && moments.exceeded) est.degraded.push_back("moments");
  if (moments.reached > 0 && moments.best > best_exact) {
    best_exact = moments.best;
    est.lower_method = "moments";
  }

  if (e.descriptor().kind() == GroupKind::free_group) {
    FreeEdgeBounds fe = free_edge_bounds(e);
    if (fe.lower && *fe.lower > best_exact) {
      best_exact = *fe.lower;
      est.lower_method = "free-edge";
    }
  }

  est.lower = to_double_down(best_exact);
  try {
    double p = lower_bound_power(e, cfg);
    if (p > est.lower) {
      est.lower = p;
      est.lower_method = "power";
    }
  } catch (const BudgetExceeded&) {
    est.degraded.push_back("power");
  }

  if (est.lower < 0.0) est.lower = 0.0;
  return est;
}

}  // namespace powers
