#include "sobolev/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "sobolev/errors.hpp"

namespace sobolev::cutoff {

void CutoffSpec::validate() const {
  if (dim < 1) throw UsageError("CutoffSpec: dimension must be >= 1");
  if (!(r > 1.0)) throw UsageError("CutoffSpec: r must exceed 1");
  if (!(R > r)) throw UsageError("CutoffSpec: R must exceed r");
  if (kind == CutoffKind::SecondOrderSmooth && !(r > 100.0))
    throw UsageError("CutoffSpec: second-order construction requires r > 100");
}

namespace {

double eta_first_of_f(double r, double R, double f) {
  if (f <= r * r) return 1.0;
  if (f >= R * R) return 0.0;
  const double v = (std::log(R) - 0.5 * std::log(f)) / (std::log(R) - std::log(r));
  return std::clamp(v, 0.0, 1.0);
}

double eta_second_of_f(double r, double R, double f) {
  if (f <= r) return 1.0;
  if (f >= R) return 0.0;
  const double num = std::log1p(-std::pow(1.0 - f / R, 3));
  const double den = std::log1p(-std::pow(1.0 - r / R, 3));
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

double eta_value(const CutoffSpec& spec, double f) {
  return spec.kind == CutoffKind::FirstOrderLog ? eta_first_of_f(spec.r, spec.R, f)
                                                : eta_second_of_f(spec.r, spec.R, f);
}

calculus::GridFunction eta_on_ball(const CutoffSpec& spec, const cayley::BallPtr& ball) {
  spec.validate();
  if (ball->spec().kind != cayley::GroupKind::IntegerLattice ||
      ball->spec().lattice_dim != spec.dim)
    throw UsageError("eta_on_ball: ball group does not match cutoff dimension");
  Eigen::VectorXd v(ball->size());
  for (cayley::VertexIndex i = 0; i < ball->size(); ++i) {
    const auto& x = ball->element(i);
    double f = 0.0;
    for (auto c : x) f += static_cast<double>(c) * static_cast<double>(c);
    v[i] = eta_value(spec, f);
  }
  return calculus::GridFunction(ball, std::move(v));
}

calculus::GridFunction eta_grid(const CutoffSpec& spec, std::int64_t vertex_cap) {
  spec.validate();
  const double euclid = spec.kind == CutoffKind::FirstOrderLog ? spec.R : std::sqrt(spec.R);
  const int radius = static_cast<int>(std::ceil(euclid * std::sqrt(double(spec.dim)))) + 1;
  auto ball = cayley::build_ball(cayley::GroupSpec::lattice(spec.dim), radius, vertex_cap);
  return eta_on_ball(spec, ball);
}

std::vector<std::int64_t> sum_of_squares_counts(std::int64_t F, int dim) {
  std::vector<std::int64_t> r(F + 1, 0);
  const auto sq = static_cast<std::int64_t>(std::sqrt(static_cast<double>(F)));
  r[0] = 1;
  for (std::int64_t a = 1; a * a <= F; ++a) r[a * a] = 2;
  for (int d = 1; d < dim; ++d) {
    std::vector<std::int64_t> out(F + 1, 0);
    for (std::int64_t a = 0; a <= sq; ++a) {
      const std::int64_t a2 = a * a;
      if (a2 > F) break;
      const std::int64_t w = a == 0 ? 1 : 2;
      for (std::int64_t k = a2; k <= F; ++k) out[k] += w * r[k - a2];
    }
    r.swap(out);
  }
  return r;
}

namespace {

std::int64_t isqrt64(std::int64_t v) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return s;
}

// Radial eta table over integer squared distances, padded so lookups up to
// f + 4*sqrt(f) + 4 stay in range.
struct EtaTable {
  std::vector<double> v;
  double operator[](std::int64_t f) const { return v[static_cast<std::size_t>(f)]; }
};

EtaTable make_table(const CutoffSpec& spec, std::int64_t F, std::int64_t pad) {
  EtaTable t;
  t.v.resize(F + pad + 1);
  for (std::int64_t f = 0; f <= F + pad; ++f)
    t.v[f] = eta_value(spec, static_cast<double>(f));
  return t;
}

// ||grad eta||_N^N over the whole lattice Z^N via the single-coordinate
// marginal count r_{N-1}: every x contributes, per signed direction i,
// |eta(f + 2 x_i + 1) - eta(f)|^N, and the count of x with x_1 = a, |x|^2 = f
// is r_{N-1}(f - a^2).
double grad_record(const EtaTable& eta, const std::vector<std::int64_t>& rc1, std::int64_t F,
                   int N) {
  const std::int64_t sq = isqrt64(F);
  double total = 0.0;
  for (std::int64_t a = -sq; a <= sq; ++a) {
    const std::int64_t a2 = a * a;
    double part = 0.0;
    for (std::int64_t f = a2; f <= F; ++f) {
      const std::int64_t c = rc1[f - a2];
      if (c == 0) continue;
      const double d = eta[f + 2 * a + 1] - eta[f];
      if (d != 0.0) part += static_cast<double>(c) * std::pow(std::abs(d), N);
    }
    total += static_cast<double>(N) * part;
  }
  return total;
}

// Exact second-order records for N = 4 (so N/2 = 2 and all sums are
// quadratic, reducible to single- and pair-coordinate marginals).
struct SecondOrderSums {
  double lap_x = 0.0;
  double hess_x = 0.0;
  double lap_collar = 0.0;
  double hess_collar = 0.0;
  double bound_sup = 0.0;  // sup over X of |Delta eta| * f * log(R/r)
};

// g(f, a) = eta(f + 2a + 1) + eta(f - 2a + 1) - 2 eta(f): the two signed
// differences along one coordinate with value a; Delta eta(x) = sum_i g(f, x_i).
inline double g_of(const EtaTable& eta, std::int64_t f, std::int64_t a) {
  return eta[f + 2 * a + 1] + eta[std::abs(f - 2 * a + 1)] - 2.0 * eta[f];
}

// Brute enumeration over all x in Z^4 with f(x) <= fmax: exact per-point X/Y
// tests, Delta eta, and the full Hessian sum. Used for the inner band where
// the conservative radial X test is inconclusive and for the collar.
void brute_band_z4(const CutoffSpec& spec, const EtaTable& eta, std::int64_t fmax,
                   SecondOrderSums& sums) {
  const double r = spec.r;
  const double logRr = std::log(spec.R / spec.r);
  const double sr = std::sqrt(r);
  const double ylo = (sr - 2.0) * (sr - 2.0);
  const double yhi = (sr + 2.0) * (sr + 2.0);
  const std::int64_t M = isqrt64(fmax);
  for (std::int64_t x1 = -M; x1 <= M; ++x1) {
    const std::int64_t c1 = x1 * x1;
    if (c1 > fmax) continue;
    for (std::int64_t x2 = -M; x2 <= M; ++x2) {
      const std::int64_t c2 = c1 + x2 * x2;
      if (c2 > fmax) continue;
      for (std::int64_t x3 = -M; x3 <= M; ++x3) {
        const std::int64_t c3 = c2 + x3 * x3;
        if (c3 > fmax) continue;
        for (std::int64_t x4 = -M; x4 <= M; ++x4) {
          const std::int64_t f = c3 + x4 * x4;
          if (f > fmax) continue;
          const std::int64_t coords[4] = {x1, x2, x3, x4};
          bool in_x = true;
          double lap = 0.0;
          for (std::int64_t a : coords) {
            if (f + 2 * a + 1 <= r || f - 2 * a + 1 <= r) in_x = false;
            lap += g_of(eta, f, a);
          }
          const bool in_y = ylo <= static_cast<double>(f) && static_cast<double>(f) <= yhi;
          if (!in_x && !in_y) continue;
          double hess = 0.0;
          // same-axis pairs: (s, s), (s, -s) for both signs
          for (std::int64_t a : coords) {
            const double dpp = eta[f + 4 * a + 4] - 2.0 * eta[f + 2 * a + 1] + eta[f];
            const double dmm =
                eta[std::abs(f - 4 * a + 4)] - 2.0 * eta[std::abs(f - 2 * a + 1)] + eta[f];
            const double dpm = 2.0 * eta[f] - eta[f + 2 * a + 1] - eta[std::abs(f - 2 * a + 1)];
            hess += dpp * dpp + dmm * dmm + 2.0 * dpm * dpm;
          }
          // distinct-axis ordered pairs, 4 sign combinations each
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
              if (i == j) continue;
              const std::int64_t a = coords[i], b = coords[j];
              for (int sa = -1; sa <= 1; sa += 2)
                for (int sb = -1; sb <= 1; sb += 2) {
                  const std::int64_t fa = f + 2 * sa * a + 1;
                  const std::int64_t fb = f + 2 * sb * b + 1;
                  const std::int64_t fab = f + 2 * sa * a + 2 * sb * b + 2;
                  const double d =
                      eta[std::abs(fab)] - eta[std::abs(fa)] - eta[std::abs(fb)] + eta[f];
                  hess += d * d;
                }
            }
          if (in_x) {
            sums.lap_x += lap * lap;
            sums.hess_x += hess;
            sums.bound_sup =
                std::max(sums.bound_sup, std::abs(lap) * static_cast<double>(f) * logRr);
          }
          if (in_y) {
            sums.lap_collar += lap * lap;
            sums.hess_collar += hess;
          }
        }
      }
    }
  }
}

// Radial reduction for f > f0 (every such point is guaranteed in X and
// outside the collar): single-coordinate terms via r_3, cross terms via r_2.
void reduced_tail_z4(const EtaTable& eta, const std::vector<std::int64_t>& rc1,
                     const std::vector<std::int64_t>& rc2, std::int64_t f0, std::int64_t F,
                     double logRr, SecondOrderSums& sums) {
  const int N = 4;
  const std::int64_t sq = isqrt64(F);
  double lap = 0.0, hess = 0.0, bound = 0.0;

  // diagonal (single-coordinate) parts; also accumulates per-f max |g| for
  // the radial upper bound |Delta eta(x)| <= 4 max_a |g(f, a)| on X.
  std::vector<double> gmax(static_cast<std::size_t>(F - f0), 0.0);
  for (std::int64_t a = -sq; a <= sq; ++a) {
    const std::int64_t a2 = a * a;
    double lap_part = 0.0, hess_part = 0.0;
    for (std::int64_t f = std::max(a2, f0 + 1); f <= F; ++f) {
      const std::int64_t c = rc1[f - a2];
      if (c == 0) continue;
      const double g = g_of(eta, f, a);
      lap_part += static_cast<double>(c) * g * g;
      const double dpp = eta[f + 4 * a + 4] - 2.0 * eta[f + 2 * a + 1] + eta[f];
      const double dmm =
          eta[std::abs(f - 4 * a + 4)] - 2.0 * eta[std::abs(f - 2 * a + 1)] + eta[f];
      const double dpm = 2.0 * eta[f] - eta[f + 2 * a + 1] - eta[std::abs(f - 2 * a + 1)];
      hess_part += static_cast<double>(c) * (dpp * dpp + dmm * dmm + 2.0 * dpm * dpm);
      gmax[f - f0 - 1] = std::max(gmax[f - f0 - 1], std::abs(g));
    }
    lap += N * lap_part;
    hess += N * hess_part;
  }
  for (std::int64_t f = f0 + 1; f <= F; ++f)
    bound = std::max(bound, 4.0 * gmax[f - f0 - 1] * static_cast<double>(f) * logRr);

  // cross (pair-coordinate) parts with folded signs: g(f, a) = g(f, -a)
  double lap_cross = 0.0, hess_cross = 0.0;
  for (std::int64_t a = 0; a <= sq; ++a) {
    const std::int64_t wa = a > 0 ? 2 : 1;
    const std::int64_t a2 = a * a;
    for (std::int64_t b = 0; b <= sq; ++b) {
      const std::int64_t m = a2 + b * b;
      if (m > F) break;
      const double w = static_cast<double>(wa * (b > 0 ? 2 : 1));
      double lp = 0.0, hp = 0.0;
      for (std::int64_t f = std::max(m, f0 + 1); f <= F; ++f) {
        const std::int64_t c = rc2[f - m];
        if (c == 0) continue;
        const double ga = g_of(eta, f, a);
        const double gb = g_of(eta, f, b);
        lp += static_cast<double>(c) * ga * gb;
        double h = 0.0;
        for (int sa = -1; sa <= 1; sa += 2)
          for (int sb = -1; sb <= 1; sb += 2) {
            const std::int64_t fa = f + 2 * sa * a + 1;
            const std::int64_t fb = f + 2 * sb * b + 1;
            const std::int64_t fab = f + 2 * sa * a + 2 * sb * b + 2;
            const double d = eta[std::abs(fab)] - eta[std::abs(fa)] - eta[std::abs(fb)] + eta[f];
            h += d * d;
          }
        hp += static_cast<double>(c) * h;
      }
      lap_cross += w * lp;
      hess_cross += w * hp;
    }
  }
  sums.lap_x += lap + N * (N - 1) * lap_cross;
  sums.hess_x += hess + N * (N - 1) * hess_cross;
  sums.bound_sup = std::max(sums.bound_sup, bound);
}

}  // namespace

DecayTable decay_study(CutoffKind kind, int N, double r, const std::vector<double>& R_list,
                       const DecayOptions& opts) {
  if (R_list.empty()) throw UsageError("decay_study: R_list must be non-empty");
  for (std::size_t i = 0; i + 1 < R_list.size(); ++i)
    if (!(R_list[i] < R_list[i + 1])) throw UsageError("decay_study: R_list must be increasing");
  if (N < 3) throw UsageError("decay_study: need N >= 3");
  if (kind == CutoffKind::SecondOrderSmooth && N != 4)
    throw UsageError("decay_study: the exact second-order reduction is implemented for N = 4");

  DecayTable table;
  table.dim = N;
  table.r = r;
  table.fit_points = opts.fit_last_k;

  for (double R : R_list) {
    CutoffSpec spec{N, r, R, kind};
    spec.validate();
    const double loglog = std::log(std::log(R / r));
    if (kind == CutoffKind::FirstOrderLog) {
      const auto F = static_cast<std::int64_t>((R + 2.0) * (R + 2.0));
      if (F > opts.f_cap)
        throw ResourceCapError("decay_study: squared-radius table " + std::to_string(F) +
                               " exceeds cap " + std::to_string(opts.f_cap));
      EtaTable eta = make_table(spec, F, 4 * isqrt64(F) + 8);
      auto rc1 = sum_of_squares_counts(F, N - 1);
      table.rows.push_back({R, loglog, grad_record(eta, rc1, F, N), "grad"});
    } else {
      const auto F = static_cast<std::int64_t>(R + 4.0 * std::sqrt(R) + 10.0);
      if (F > opts.f_cap)
        throw ResourceCapError("decay_study: squared-radius table " + std::to_string(F) +
                               " exceeds cap " + std::to_string(opts.f_cap));
      EtaTable eta = make_table(spec, F, 8 * isqrt64(F) + 16);
      auto rc1 = sum_of_squares_counts(F, 3);
      auto rc2 = sum_of_squares_counts(F, 2);
      SecondOrderSums sums;
      const auto f0 =
          static_cast<std::int64_t>(std::ceil((std::sqrt(r) + 2.0) * (std::sqrt(r) + 2.0))) + 1;
      brute_band_z4(spec, eta, f0, sums);
      reduced_tail_z4(eta, rc1, rc2, f0, F, std::log(R / r), sums);
      table.rows.push_back({R, loglog, sums.lap_x, "lap_x"});
      table.rows.push_back({R, loglog, sums.hess_x, "hess_x"});
      table.rows.push_back({R, loglog, grad_record(eta, rc1, F, N), "grad"});
      table.rows.push_back({R, loglog, sums.lap_collar, "lap_collar"});
      table.rows.push_back({R, loglog, sums.hess_collar, "hess_collar"});
      table.rows.push_back({R, loglog, sums.bound_sup, "lap_bound"});
    }
  }

  // Per-kind least squares of log(value) vs log log(R/r) on the last k rows.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& row : table.rows)
    if (row.value > 0.0) series[row.kind].push_back({row.loglog_ratio, std::log(row.value)});
  for (auto& [kind_name, pts] : series) {
    const int k = std::min<int>(opts.fit_last_k, static_cast<int>(pts.size()));
    if (k < 2) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = static_cast<int>(pts.size()) - k; i < static_cast<int>(pts.size()); ++i) {
      sx += pts[i].first;
      sy += pts[i].second;
      sxx += pts[i].first * pts[i].first;
      sxy += pts[i].first * pts[i].second;
    }
    table.fitted_slopes[kind_name] = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return table;
}

}  // namespace sobolev::cutoff
