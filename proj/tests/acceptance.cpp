// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "thermjump/analytic.hpp"
#include "thermjump/driven.hpp"
#include "thermjump/einstein.hpp"
#include "thermjump/harness/ensemble.hpp"
#include "thermjump/harness/stats.hpp"
#include "thermjump/single_mode.hpp"

using namespace thermjump;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int worker_threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// 1. Balance-system residuals and agreement with direct time integration.
void analytic_closure(Outcome& o) {
  double worst_res = 0.0;
  double worst_rel = 0.0;
  for (double nbar : {0.25, 1.0}) {
    const PhysicalParams p(1.0, nbar);
    for (double dw : {0.0, 2.0}) {
      for (double kappa : {0.001, 0.01, 0.1}) {
        for (int n : {0, 1, 3}) {
          for (auto prep : {Prepared::e, Prepared::g}) {
            const SelectedMode m{kappa, dw, 0.0};
            const auto s = solve_wuv(p, m, n, prep);
            for (double r : wuv_residual(p, m, n, prep, s)) {
              worst_res = std::max(worst_res, std::abs(r));
            }
            const auto ref =
                oracle::ode_wuv(p.gamma_down(), p.gamma_up(), dw, kappa, n, prep == Prepared::e);
            const double scale = std::hypot(std::hypot(ref.w_e, ref.w_g),
                                            std::hypot(ref.u_int, ref.v_int));
            worst_rel = std::max({worst_rel, rel_diff(s.w_e, ref.w_e), rel_diff(s.w_g, ref.w_g),
                                  std::abs(s.u_int - ref.u_int) / scale,
                                  std::abs(s.v_int - ref.v_int) / scale});
          }
        }
      }
    }
  }
  o.detail << "max residual " << worst_res << ", max rel diff vs ODE " << worst_rel;
  o.require(worst_res < 1e-12, "residual < 1e-12");
  o.require(worst_rel < 1e-6, "ODE agreement < 1e-6");
}

// 2. Deviation from the lowest-order probability scales as kappa^2.
void lowest_order_scaling(Outcome& o) {
  const PhysicalParams p(1.0, 1.0);
  double worst = 0.0;
  for (auto prep : {Prepared::e, Prepared::g}) {
    for (double dw : {0.0, 2.0}) {
      std::vector<double> lx, ly;
      for (double kappa : {0.1, 0.01, 0.001}) {
        const SelectedMode m{kappa, dw, 0.0};
        const double lo = lowest_order_probability(p, m, 1, prep);
        const double ex = anomalous_probability(p, m, 1, prep);
        lx.push_back(std::log(kappa));
        ly.push_back(std::log(std::abs(ex - lo) / lo));
      }
      const double mx = (lx[0] + lx[1] + lx[2]) / 3.0;
      const double my = (ly[0] + ly[1] + ly[2]) / 3.0;
      double sxy = 0.0, sxx = 0.0;
      for (int k = 0; k < 3; ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
      }
      const double slope = sxy / sxx;
      o.detail << (prep == Prepared::e ? "e" : "g") << "/dw=" << dw << " exponent " << slope
               << "; ";
      worst = std::max(worst, std::abs(slope - 2.0));
    }
  }
  o.require(worst <= 0.1, "exponent 2.0 +- 0.1");
}

// 3. Detailed balance of the photon-number rates gives the Bose-Einstein pmf.
void equilibrium_consistency(Outcome& o) {
  double worst = 0.0;
  for (double nbar : {0.25, 1.0, 3.0}) {
    const PhysicalParams p(1.0, nbar);
    for (double kappa : {0.001, 0.1, 10.0}) {
      for (double dw : {0.0, 2.0, -7.5}) {
        const auto dist = stationary_from_rates(p, {kappa, dw, 0.0}, 200);
        for (std::size_t n = 0; n < dist.size(); ++n) {
          worst = std::max(worst, std::abs(dist[n] - bose_einstein_pmf(nbar, static_cast<int>(n))));
        }
      }
    }
  }
  o.detail << "max elementwise diff " << worst;
  o.require(worst < 1e-12, "elementwise < 1e-12");
}

// 4. Summing photon rates over modes recovers the Einstein rates.
void mode_sum(Outcome& o) {
  for (double nbar : {0.25, 1.0}) {
    const auto r = mode_sum_check(PhysicalParams(1.0, nbar), {200.0, 4096, true});
    o.detail << "nbar=" << nbar << " rel err up " << r.rel_err_up << " down " << r.rel_err_down
             << "; ";
    o.require(r.rel_err_up < 1e-6 && r.rel_err_down < 1e-6, "relative error < 1e-6");
  }
}

// 5. Einstein process: occupation fraction and residence times.
void einstein_statistics(Outcome& o) {
  const PhysicalParams p(1.0, 1.0);
  const double t_max = 1e5;
  const auto rec = simulate_einstein(p, AtomState::Ground, t_max, 2024);

  // Batch means for the excited fraction.
  const int batches = 100;
  const double width = t_max / batches;
  std::vector<double> excited(batches, 0.0);
  AtomState state = rec.initial;
  double t_prev = 0.0;
  auto credit = [&](double t0, double t1) {
    while (t0 < t1) {
      const int b = std::min(batches - 1, static_cast<int>(t0 / width));
      const double edge = std::min(t1, (b + 1) * width);
      excited[static_cast<std::size_t>(b)] += edge - t0;
      t0 = edge;
    }
  };
  for (const auto& e : rec.events) {
    if (state == AtomState::Excited) credit(t_prev, e.time);
    state = e.kind == JumpKind::Up ? AtomState::Excited : AtomState::Ground;
    t_prev = e.time;
  }
  if (state == AtomState::Excited) credit(t_prev, t_max);
  RunningStats frac;
  for (double x : excited) frac.add(x / width);
  const double total = excited_time(rec, t_max) / t_max;

  RunningStats up_res, down_res;
  const auto res = residence_times(rec);
  for (double t : res.excited) down_res.add(t);
  for (double t : res.ground) up_res.add(t);

  const double z_frac = (total - 1.0 / 3.0) / frac.std_error();
  const double z_e = (down_res.mean - 0.5) / down_res.std_error();
  const double z_g = (up_res.mean - 1.0) / up_res.std_error();
  o.detail << "excited fraction " << total << " (z=" << z_frac << "), residence e "
           << down_res.mean << " (z=" << z_e << "), g " << up_res.mean << " (z=" << z_g << ")";
  o.require(std::abs(z_frac) <= 3.0, "excited fraction within 3 SE");
  o.require(std::abs(z_e) <= 3.0, "excited residence within 3 SE");
  o.require(std::abs(z_g) <= 3.0, "ground residence within 3 SE");
}

// 6. Driven atom: Rabi cycle without decay, projective values at every jump.
void driven_atom(Outcome& o) {
  const auto rabi = simulate_driven(DrivenModel{{0.0, 0.0}, 1.5}, 20.0, 0.001, 1);
  double worst = 0.0;
  for (const auto& pt : rabi.series) {
    const double s = std::sin(1.5 * pt.t);
    worst = std::max(worst, std::abs(pt.p_e - s * s));
  }
  o.detail << "Rabi max error " << worst;
  o.require(rabi.record.events.empty() && worst < 1e-9, "sin^2 to 1e-9");

  std::size_t events = 0;
  bool exact = true;
  for (double drive : {0.1, 1.5}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto traj = simulate_driven(PhysicalParams(1.0, 0.25, drive), 500.0, 0.25, seed);
      std::size_t k = 0;
      for (const auto& pt : traj.series) {
        if (k < traj.record.events.size() && pt.t == traj.record.events[k].time) {
          const double want = traj.record.events[k].kind == JumpKind::Down ? 0.0 : 1.0;
          exact = exact && pt.p_e == want && pt.coh_re == 0.0 && pt.coh_im == 0.0;
          ++k;
        }
      }
      exact = exact && k == traj.record.events.size();
      events += k;
    }
  }
  o.detail << ", " << events << " post-jump points checked";
  o.require(exact && events > 0, "post-jump p_e exactly 0 or 1");
}

// 7. Strong coupling: vacuum-Rabi frequency between jumps.
void strong_coupling(Outcome& o) {
  const double kappa = 10.0;
  const PhysicalParams p(1.0, 1.0);
  const double dt = 1e-3;
  int segments = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto traj = simulate_single_mode(p, {kappa, 0.0, 0.0}, 100.0, dt, seed);
    // Split the series into jump-free runs on a fixed manifold.
    std::vector<std::vector<ModeTrajectoryPoint>> runs(1);
    std::size_t ev = 0;
    for (const auto& pt : traj.series) {
      if (ev < traj.events.size() && pt.t >= traj.events[ev].event.time) {
        runs.emplace_back();
        ++ev;
      }
      runs.back().push_back(pt);
    }
    for (const auto& run : runs) {
      if (run.size() < 3 || run.front().n_index < 0) continue;
      const int n = run.front().n_index;
      const double period = std::numbers::pi / (kappa * std::sqrt(n + 1.0));
      if (run.back().t - run.front().t < 6.0 * period) continue;
      std::vector<double> peaks;
      for (std::size_t k = 1; k + 1 < run.size(); ++k) {
        const double a = run[k - 1].p_e, b = run[k].p_e, c = run[k + 1].p_e;
        if (b > a && b >= c && b > 0.5) {
          const double shift = 0.5 * (a - c) / (a - 2.0 * b + c);
          peaks.push_back(run[k].t + shift * (run[k + 1].t - run[k].t));
        }
      }
      if (peaks.size() < 6) continue;
      const double m = static_cast<double>(peaks.size());
      double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
      for (std::size_t k = 0; k < peaks.size(); ++k) {
        const double x = static_cast<double>(k);
        sx += x;
        sy += peaks[k];
        sxy += x * peaks[k];
        sxx += x * x;
      }
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      const double omega = 2.0 * std::numbers::pi / slope;
      const double expected = 2.0 * kappa * std::sqrt(n + 1.0);
      worst = std::max(worst, std::abs(omega / expected - 1.0));
      ++segments;
    }
  }
  o.detail << segments << " segments with >= 5 periods, max rel freq error " << worst;
  o.require(segments >= 3, "at least 3 qualifying segments");
  o.require(worst < 0.01, "frequency within 1%");
}

EnsembleSummary mode_ensemble(double kappa, double detuning, int n_traj, double t_max,
                              std::uint64_t seed) {
  RunConfig cfg;
  cfg.model = Model::Mode;
  cfg.nbar = 1.0;
  cfg.kappa = kappa;
  cfg.detuning = detuning;
  cfg.t_max = t_max;
  cfg.dt_out = 50.0;
  cfg.n_traj = n_traj;
  cfg.seed = seed;
  cfg.threads = worker_threads();
  cfg.budget = 1e12;
  return ensemble_run(cfg);
}

double total_rate(const EnsembleSummary& s) {
  return s.gamma_up_emp.rate + s.gamma_down_emp.rate;
}

// Standard error of the total anomalous rate from the spread of
// per-trajectory rates. This includes the slow wandering of the photon number,
// which plain Poisson counting misses.
double total_rate_se(const RunConfig& cfg) {
  RunningStats per_traj;
  for (int k = 0; k < cfg.n_traj; ++k) {
    const auto s = run_trajectory(cfg, k);
    per_traj.add(static_cast<double>(s.anomalous_up + s.anomalous_down) / s.total_time);
  }
  return per_traj.std_error();
}

// 8. Weak coupling: photon statistics and anomalous rates.
void weak_coupling(Outcome& o, const EnsembleSummary& strong, const EnsembleSummary& weak) {
  const double tv = *strong.tv_distance;
  o.detail << "(a) TV " << tv << " over T=" << strong.totals.total_time;
  o.require(strong.totals.total_time >= 1e6 && tv <= 0.05, "(a) TV <= 0.05");

  o.detail << "; (b) T=" << weak.totals.total_time;
  int checked = 0;
  for (const auto& r : weak.n_resolved) {
    for (int dir = 0; dir < 2; ++dir) {
      const double analytic = dir == 0 ? r.up_analytic : r.down_analytic;
      const auto& emp = dir == 0 ? r.up : r.down;
      // Only bins where at least ten events are expected.
      if (analytic * r.time < 10.0) continue;
      const double sigma = std::sqrt(analytic * r.time) / r.time;
      const double z = (emp.rate - analytic) / sigma;
      o.detail << " N=" << r.n << (dir == 0 ? " up " : " down ") << emp.rate << " vs "
               << analytic << " (z=" << z << ")";
      o.require(std::abs(z) <= 3.0, "(b) N-resolved rate within 3 sigma");
      ++checked;
    }
  }
  o.require(checked >= 4 && weak.totals.total_time >= 1e7, "(b) enough resolved bins");

  const double ratio = total_rate(strong) / total_rate(weak);
  o.detail << "; (c) rate ratio " << ratio;
  o.require(std::abs(ratio / 100.0 - 1.0) <= 0.25, "(c) ratio 100 within 25%");
}

// 9. Detuning suppression by the Lorentzian factor.
void detuning_suppression(Outcome& o, const EnsembleSummary& resonant,
                          const EnsembleSummary& detuned) {
  const double r0 = total_rate(resonant), r2 = total_rate(detuned);
  const double ratio = r2 / r0;
  const double sigma = ratio * std::hypot(total_rate_se(resonant.config) / r0,
                                          total_rate_se(detuned.config) / r2);
  const double z = (ratio - 0.36) / sigma;
  o.detail << "ratio " << ratio << " +- " << sigma << " vs 0.36 (z=" << z << ")";
  o.require(std::abs(z) <= 3.0, "within 3 sigma of 0.36");
}

// 10. Exact structural invariants.
void structural(Outcome& o) {
  const PhysicalParams p(1.0, 1.0);
  std::size_t events = 0, mismatches = 0;
  for (double kappa : {10.0, 1.0, 0.1, 0.01}) {
    for (double dw : {0.0, 2.0}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto traj = simulate_single_mode(p, {kappa, dw, 0.0}, 500.0, 1.0, seed);
        int count = field_count(traj.initial);
        JumpKind prev =
            traj.initial.last_jump == Preparation::InitialE ? JumpKind::Up : JumpKind::Down;
        for (const auto& e : traj.events) {
          const int dn = e.n_after - e.n_before;
          const int want = e.event.kind != prev ? 0 : (e.event.kind == JumpKind::Up ? 1 : -1);
          if (e.n_before != count || dn != want || e.anomalous != (want != 0) || e.n_after < 0) {
            ++mismatches;
          }
          prev = e.event.kind;
          count = e.n_after;
          ++events;
        }
      }
    }
  }
  o.detail << events << " events, " << mismatches << " mapping mismatches";
  o.require(events > 0 && mismatches == 0, "field-count mapping");

  // Norm-decay law on manifold generators against a centered difference.
  double worst = 0.0;
  Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    const double kappa = 0.01 + 10.0 * rng.uniform_open();
    const double dw = 4.0 * rng.uniform_open() - 2.0;
    const int n = static_cast<int>(rng.next_u64() % 5);
    const auto gen = manifold_generator(p, {kappa, dw, 0.0}, n);
    const double ang = 2.0 * std::numbers::pi * rng.uniform_open();
    const ConditionalState2 c0{cplx{std::cos(ang), 0.0}, std::polar(std::sin(ang), 1.0)};
    const double t = 0.05 + 3.0 * rng.uniform_open();
    const double h = 1e-5;
    const double fd = -(std::log(survival_probability(c0, gen, t + h)) -
                        std::log(survival_probability(c0, gen, t - h))) /
                      (2.0 * h);
    const auto c = closed_form_propagator(gen, t).apply(c0);
    const double law = jump_weight(c, gen.gamma_down, gen.gamma_up) / c.norm_sq();
    worst = std::max(worst, std::abs(fd - law) / law);
  }
  o.detail << ", norm-decay max rel err " << worst;
  o.require(worst < 1e-6, "norm-decay law < 1e-6");

  bool identical = true;
  for (Model m : {Model::Einstein, Model::Driven, Model::Mode}) {
    RunConfig cfg;
    cfg.model = m;
    cfg.kappa = 0.5;
    cfg.drive = m == Model::Driven ? 1.5 : 0.0;
    cfg.nbar = m == Model::Driven ? 0.25 : 1.0;
    cfg.t_max = 300.0;
    cfg.n_traj = 16;
    cfg.seed = 7;
    std::string reference;
    for (int threads : {1, 2, 5, 16}) {
      cfg.threads = threads;
      const auto dump = to_json(ensemble_run(cfg)).dump();
      if (reference.empty()) reference = dump;
      identical = identical && dump == reference;
    }
  }
  o.detail << ", reruns at 1/2/5/16 threads " << (identical ? "identical" : "differ");
  o.require(identical, "bit-identical reruns");
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria;
  criteria.emplace_back("analytic closure", analytic_closure);
  criteria.emplace_back("lowest-order kappa^2 scaling", lowest_order_scaling);
  criteria.emplace_back("equilibrium self-consistency", equilibrium_consistency);
  criteria.emplace_back("mode-sum self-consistency", mode_sum);
  criteria.emplace_back("Einstein process statistics", einstein_statistics);
  criteria.emplace_back("driven atom", driven_atom);
  criteria.emplace_back("strong-coupling Rabi frequency", strong_coupling);

  // Ensembles shared by the weak-coupling and detuning criteria.
  EnsembleSummary resonant, detuned, weak;
  bool have_ensembles = false;
  std::string ensemble_error;
  auto ensure = [&] {
    if (have_ensembles || !ensemble_error.empty()) return;
    try {
      resonant = mode_ensemble(0.1, 0.0, 100, 1e4, 101);
      detuned = mode_ensemble(0.1, 2.0, 100, 1e4, 202);
      weak = mode_ensemble(0.01, 0.0, 100, 1e5, 303);
      have_ensembles = true;
    } catch (const std::exception& e) {
      ensemble_error = e.what();
    }
  };
  criteria.emplace_back("weak-coupling photon statistics", [&](Outcome& o) {
    ensure();
    if (!have_ensembles) throw std::runtime_error(ensemble_error);
    weak_coupling(o, resonant, weak);
  });
  criteria.emplace_back("detuning suppression", [&](Outcome& o) {
    ensure();
    if (!have_ensembles) throw std::runtime_error(ensemble_error);
    detuning_suppression(o, resonant, detuned);
  });
  criteria.emplace_back("structural invariants", structural);

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    o.detail.precision(4);
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s: %s (%.1fs) %s\n", k + 1, o.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
