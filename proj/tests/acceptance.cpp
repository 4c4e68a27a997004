// End-to-end acceptance gate. Each numbered check prints one pass/fail line;
// the process exits nonzero if any check fails.

#include "spectv/decomp.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace spectv;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", ok ? "pass" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::mt19937 rng(20240817);

Signal random_pc_1d(Eigen::Index n, int segments) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> cut(1, n - 1);
  std::vector<Eigen::Index> cuts{0, n};
  for (int s = 1; s < segments; ++s) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  Eigen::ArrayXd v(n);
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = val(rng);
    for (Eigen::Index i = cuts[s]; i < cuts[s + 1]; ++i) v[i] = a;
  }
  if ((v == v[0]).all()) v[0] += 1.0;
  return Signal(GridSpec::line(n), std::move(v));
}

/// Raw indicator box (no mean subtraction), for disjoint-support constructions.
Signal indicator_box(Eigen::Index n, Eigen::Index start, Eigen::Index w, double a) {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n);
  v.segment(start, w) = a;
  return Signal(GridSpec::line(n), std::move(v));
}

/// Three-disc test image on a 128 x 128 grid.
Signal three_discs() {
  const Eigen::Index n = 128;
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n * n);
  struct Disc {
    double cy, cx, r, h;
  };
  const Disc discs[] = {{40, 36, 8, 1.0}, {52, 90, 12, 0.9}, {90, 58, 20, 0.8}};
  for (const auto& d : discs)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double dy = double(i) - d.cy, dx = double(j) - d.cx;
        if (dy * dy + dx * dx <= d.r * d.r) v[i * n + j] += d.h;
      }
  return Signal(GridSpec::plane(n, n), std::move(v));
}

/// Exact 1D prox by exhaustive search over segmentations and jump signs;
/// every candidate is an energy upper bound and the optimum is in the set.
double prox_oracle_energy(const Signal& f, double tau) {
  const Eigen::Index n = f.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<Eigen::Index> bounds{0};
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      if (mask & (1u << i)) bounds.push_back(i + 1);
    bounds.push_back(n);
    const int segs = int(bounds.size()) - 1;
    for (unsigned signs = 0; signs < (1u << (segs - 1)); ++signs) {
      double energy = 0;
      double prev = 0;
      std::vector<double> seg_vals(segs);
      for (int s = 0; s < segs; ++s) {
        const double s_left = s == 0 ? 0.0 : ((signs >> (s - 1)) & 1 ? 1.0 : -1.0);
        const double s_right = s == segs - 1 ? 0.0 : ((signs >> s) & 1 ? 1.0 : -1.0);
        const Eigen::Index len = bounds[s + 1] - bounds[s];
        const double m = f.values.segment(bounds[s], len).mean();
        seg_vals[s] = m - tau * (s_right - s_left) / double(len);
      }
      for (int s = 0; s < segs; ++s) {
        const Eigen::Index len = bounds[s + 1] - bounds[s];
        energy +=
            0.5 * (f.values.segment(bounds[s], len) - seg_vals[s]).square().sum();
        if (s > 0) energy += tau * std::abs(seg_vals[s] - prev);
        prev = seg_vals[s];
      }
      best = std::min(best, energy);
    }
  }
  return best;
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  const TvConfig aniso(TvVariant::anisotropic);
  const TvConfig iso(TvVariant::isotropic);

  // ---- 1: flow on an eigenfunction follows (1 - lambda t)^+ f
  Eigenpair box = make_box_1d(256, 20, 1.0);  // lambda = 0.1
  {
    FlowParams fp;
    fp.dt = 0.2;
    fp.horizon = 0.9 / box.lambda;
    fp.stop_eps = 0;
    fp.tv = aniso;
    FlowTrajectory traj = run_flow(box.signal, fp);
    double worst = 0;
    for (size_t k = 0; k < traj.states.size(); ++k) {
      Signal want = eigen_flow_solution(box, traj.times[k]);
      worst = std::max(worst, l2_norm(Signal(want.grid, traj.states[k].values - want.values)) /
                                  l2_norm(box.signal));
    }
    report(1, worst <= 0.02, "eigenfunction flow law", "max rel err " + num(worst));
  }

  // ---- 2: spectrum concentrates at t = 1/lambda
  FlowTrajectory box_traj;
  SpectralDecomposition box_dec;
  {
    FlowParams fp;
    fp.dt = 0.1;
    fp.stop_eps = 1e-5;
    fp.tv = aniso;
    box_traj = run_flow(box.signal, fp);
    box_dec = transform(box_traj);
    Spectrum sp = spectrum(box_traj, box_dec);
    double total = 0, inside = 0;
    for (size_t k = 0; k < sp.s1.size(); ++k) {
      total += sp.s1[k];
      if (sp.times[k] >= 9.0 && sp.times[k] <= 11.0) inside += sp.s1[k];
    }
    const double frac = total > 0 ? inside / total : 0;
    report(2, frac >= 0.90, "spectral mass concentration", "mass in [9,11]: " + num(frac));
  }

  // ---- 3 and 4: reconstruction and the S2 Parseval analogue on a 2D image
  Signal img = three_discs();
  FlowTrajectory img_traj;
  SpectralDecomposition img_dec;
  {
    FlowParams fp;
    fp.dt = 0.12;
    fp.stop_eps = 1e-4;
    // generous iteration budget: second differences of J are noise-sensitive
    fp.tv = TvConfig(TvVariant::isotropic, 1e-6, 20000);
    img_traj = run_flow(img, fp);
    img_dec = transform(img_traj);
    Signal recon = reconstruct(img_dec);
    const double err = l2_norm(Signal(img.grid, recon.values - img.values)) / l2_norm(img);
    report(3, err <= 1e-3, "finite-horizon reconstruction", "rel err " + num(err));

    Spectrum sp = spectrum(img_traj, img_dec);
    double integral = 0;
    for (double s2 : sp.s2) integral += s2 * s2 * img_dec.dt;
    const double energy = l2_norm(split_mean(img).first);
    const double dev = std::abs(integral - energy * energy) / (energy * energy);
    report(4, dev <= 0.05, "Parseval analogue for S2", "rel dev " + num(dev));
  }

  // ---- 5: phi is orthogonal to the evolving state
  {
    const double o1 = check_phi_orthogonality(box_traj, box_dec);
    const double o2 = check_phi_orthogonality(img_traj, img_dec);
    const double worst = std::max(o1, o2);
    report(5, worst <= 0.05, "phi-u orthogonality", "max overlap " + num(worst));
  }

  // ---- 6: semi-inner-product axioms on random pairs
  {
    FunctionalHandle F = make_tv_handle(aniso);
    FunctionalHandle L3 = make_lq_handle(3.0);
    bool ok = true;
    std::string why = "all bounds held";
    for (int k = 0; k < 200 && ok; ++k) {
      Signal u = random_pc_1d(64, 5);
      Signal v = random_pc_1d(64, 5);
      const double ju = F.value(u), jv = F.value(v);
      const double h_uv = hsip(u, v, F);
      if (std::abs(h_uv) * jv > ju * jv * (1.0 + 2e-3)) {
        ok = false;
        why = "CS bound broke";
      }
      if (std::abs(sip(v, v, F) - jv * jv) > 2e-3 * jv * jv) {
        ok = false;
        why = "[v,v] != J(v)^2";
      }
      if (std::abs(sip(u, v, F) - h_uv * jv) > 1e-12 * std::max(1.0, std::abs(h_uv * jv))) {
        ok = false;
        why = "sip != hsip*J(v)";
      }
      // closed-form Lq cross-check
      const double vol = u.grid.cell_volume();
      const double nq = std::pow((v.values.abs().pow(3.0)).sum() * vol, 1.0 / 3.0);
      const double giles =
          std::pow(nq, 2.0 - 3.0) *
          (u.values * v.values.abs().square() * v.values.sign()).sum() * vol;
      if (std::abs(sip(u, v, L3) - giles) > 1e-12 * std::max(1.0, std::abs(giles))) {
        ok = false;
        why = "Lq pairing mismatch";
      }
    }
    report(6, ok, "semi-inner-product axioms", why);
  }

  // ---- 7: Bregman distance equals J(u)(1 - cos angle)
  {
    FunctionalHandle F = make_tv_handle(aniso);
    bool ok = true;
    double worst = 0;
    for (int k = 0; k < 200 && ok; ++k) {
      Signal u = random_pc_1d(48, 4);
      Signal v = random_pc_1d(48, 4);
      MeasureReport r = full_report(u, v, F);
      const double lhs = r.bregman_uv;
      const double rhs = r.j_u * (1.0 - std::cos(r.angle_uv));
      worst = std::max(worst, std::abs(lhs - rhs));
      if (std::abs(lhs - rhs) > 1e-10) ok = false;
      if (lhs < -1e-10 || lhs > 2.0 * r.j_u + 1e-9) ok = false;
    }
    report(7, ok, "Bregman-angle identity", "max dev " + num(worst));
  }

  // ---- 8: correlated degenerate pairs
  {
    FunctionalHandle F = make_tv_handle(aniso);
    double worst_o = 0, worst_l = 0;
    for (int k = 0; k < 20; ++k) {
      Signal u = random_pc_1d(64, 5);
      Signal u2(u.grid, 2.0 * u.values);
      worst_o = std::max(worst_o, orth_measure(u, u2, F));
      worst_l = std::max(worst_l, lis_measure(u, u2, F));
    }
    report(8, worst_o <= 2e-3 && worst_l <= 2e-3, "correlated pair degeneracy",
           "O " + num(worst_o) + ", L " + num(worst_l));
  }

  // ---- 9: disjoint supports give additive J and tiny cross pairings
  {
    FunctionalHandle F = make_tv_handle(aniso);
    const Eigen::Index n = 2048, w = 10;
    Signal u = indicator_box(n, 400, w, 1.0);
    Signal v = indicator_box(n, 1600, w, 1.0);
    Signal sum(u.grid, u.values + v.values);
    const double ju = F.value(u), jv = F.value(v), juv = F.value(sum);
    const double tri = std::abs(juv - ju - jv) / juv;
    const double cross = std::max(std::abs(hsip(u, v, F)), std::abs(hsip(v, u, F)));
    report(9, tri <= 1e-3 && cross <= 1e-2 * std::min(ju, jv), "independence consequences",
           "tri " + num(tri) + ", cross/minJ " + num(cross / std::min(ju, jv)));
  }

  // ---- 10: perfect two-scale decomposition at the geometric-mean cutoff
  {
    const Eigen::Index n = 1024;
    // narrow boxes keep the pedestal cross-talk O(w/n) small
    Eigenpair slow = make_box_1d(n, 8, 5.0, -n / 6);  // lambda = 0.05
    Eigenpair fast = make_box_1d(n, 4, 2.5, n / 4);   // lambda = 0.2
    Signal f(slow.signal.grid, slow.signal.values + fast.signal.values);
    FlowParams fp;
    fp.dt = 0.1;
    fp.horizon = 24.0;
    fp.stop_eps = 0;
    fp.tv = aniso;
    DecompositionResult res =
        separate(f, geometric_cutoff(slow.lambda, fast.lambda), fp, &slow.signal, &fast.signal);
    report(10, res.err_low <= 0.05 && res.err_high <= 0.05, "two-scale separation",
           "err_low " + num(res.err_low) + ", err_high " + num(res.err_high));
  }

  // ---- 11: sweep curves have the documented shape
  {
    FlowParams fp;
    fp.dt = 0.1;
    fp.tv = aniso;
    std::vector<double> ds;
    for (double d = 0; d <= 240; d += 30) ds.push_back(d);
    MeasureCurve c1 = experiment_1d_distance(512, 10, 1.0, 10, 1.0, ds, fp);
    const bool boxes_ok = c1.o_values.front() <= 2e-3 && c1.l_values.front() <= 2e-3 &&
                          c1.o_values.back() >= 0.95 && c1.l_values.back() >= 0.95;

    FlowParams fp2;
    fp2.dt = 0.1;
    fp2.tv = iso;
    std::vector<double> dors;
    for (double d = 0; d <= 4.0 + 1e-9; d += 0.25) dors.push_back(d);
    MeasureCurve c2 = experiment_two_discs(128, 12.0, 1.0, dors, fp2);
    bool discs_ok = c2.o_values.front() <= 0.1 && c2.l_values.front() <= 0.1 &&
                    c2.o_values.back() >= 0.95 && c2.l_values.back() >= 0.95;
    // median-of-3 smoothed monotonicity on d/r in [2,4], with slack
    auto monotone = [&](const std::vector<double>& y) {
      std::vector<double> sm(y.size());
      for (size_t k = 0; k < y.size(); ++k)
        sm[k] = (k == 0 || k + 1 == y.size()) ? y[k] : median3(y[k - 1], y[k], y[k + 1]);
      for (size_t k = 0; k + 1 < y.size(); ++k) {
        if (c2.abscissa[k] < 2.0 - 1e-9 || c2.abscissa[k + 1] > 4.0 + 1e-9) continue;
        if (sm[k + 1] < sm[k] - 0.02) return false;
      }
      return true;
    };
    discs_ok = discs_ok && monotone(c2.o_values) && monotone(c2.l_values);
    report(11, boxes_ok && discs_ok, "sweep curve shapes",
           std::string("boxes ") + (boxes_ok ? "ok" : "bad") + ", discs " +
               (discs_ok ? "ok" : "bad") + ", disc ends " + num(c2.o_values.front()) + "/" +
               num(c2.o_values.back()));
  }

  // ---- 12: blob pair, separated vs overlapping
  {
    const BlobGeometry geo;
    FunctionalHandle F = make_tv_handle(iso);
    Eigenpair u_sep = make_disc_2d(geo.n, geo.r_small, geo.c_small_separated, geo.h_small);
    Eigenpair u_ovl = make_disc_2d(geo.n, geo.r_small, geo.c_small_overlapping, geo.h_small);
    Eigenpair v = make_disc_2d(geo.n, geo.r_big, geo.c_big, geo.h_big);
    MeasureReport sep = full_report(u_sep.signal, v.signal, F);
    MeasureReport ovl = full_report(u_ovl.signal, v.signal, F);
    const bool ok = sep.orth_O >= 0.95 && sep.lis_L >= 0.95 && ovl.orth_O <= 0.85 &&
                    ovl.lis_L <= 0.85 && sep.orth_O > ovl.orth_O && sep.lis_L > ovl.lis_L;
    report(12, ok, "blob separation bands",
           "sep O/L " + num(sep.orth_O) + "/" + num(sep.lis_L) + ", ovl O/L " +
               num(ovl.orth_O) + "/" + num(ovl.lis_L));
  }

  // ---- 13: prox against the exhaustive 1D oracle
  {
    std::uniform_real_distribution<double> taud(0.1, 1.0);
    double worst = -1e300;
    bool ok = true;
    for (int k = 0; k < 100; ++k) {
      Signal f = random_pc_1d(10, 4);
      const double tau = taud(rng);
      ProxResult pr = prox_tv(f, tau, TvConfig(TvVariant::anisotropic, 1e-9, 200000));
      const double got = 0.5 * (pr.u.values - f.values).square().sum() +
                         tau * tv_value(pr.u, aniso);
      const double opt = prox_oracle_energy(f, tau);
      worst = std::max(worst, got - opt);
      if (got > opt + 1e-6) ok = false;
    }
    report(13, ok, "prox oracle equivalence", "max energy excess " + num(worst));
  }

  std::printf("%s: %d of 13 failed, %.1f s\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, elapsed());
  return failures == 0 ? 0 : 1;
}
