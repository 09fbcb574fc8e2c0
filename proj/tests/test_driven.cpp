#include <doctest.h>

#include <cmath>

#include "thermjump/driven.hpp"
#include "thermjump/einstein.hpp"
#include "thermjump/harness/stats.hpp"

using namespace thermjump;
using doctest::Approx;

TEST_CASE("drive-only evolution is a Rabi cycle") {
  const DrivenModel model{{0.0, 0.0}, 1.5};
  const auto traj = simulate_driven(model, 20.0, 0.01, 1);
  CHECK(traj.record.events.empty());
  REQUIRE(traj.series.size() == 2001);
  double worst = 0.0;
  for (const auto& p : traj.series) {
    const double s = std::sin(1.5 * p.t);
    worst = std::max(worst, std::abs(p.p_e - s * s));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("undriven generator equals the thermal one") {
  const PhysicalParams p(1.0, 0.25);
  const auto g = driven_generator(p);
  const auto t = Generator2::thermal(p.rates(), 0.0, 0.0);
  CHECK(g.decay_upper == t.decay_upper);
  CHECK(g.decay_lower == t.decay_lower);
  CHECK(std::abs(g.coupling_upper) == 0.0);
  CHECK(std::abs(g.coupling_lower) == 0.0);

  const DrivenModel decay{{1.0, 0.0}, 0.0};
  const auto gd = driven_generator(decay);
  for (double tt : {0.5, 2.0}) {
    CHECK(survival_probability({1.0, 0.0}, gd, tt) == Approx(std::exp(-tt)).epsilon(1e-14));
  }
}

TEST_CASE("projective atom jumps") {
  auto s = apply_atom_jump({cplx{1.0}, cplx{}}, JumpKind::Down);
  CHECK(s.amp_upper == cplx{});
  CHECK(std::abs(s.amp_lower) == Approx(1.0));

  const cplx alpha{0.3, -0.4};
  s = apply_atom_jump({alpha, cplx{0.2, 0.1}}, JumpKind::Down);
  CHECK(s.amp_upper == cplx{});
  CHECK(std::abs(s.amp_lower - alpha / std::abs(alpha)) < 1e-15);

  s = apply_atom_jump({cplx{0.2}, cplx{0.0, -0.7}}, JumpKind::Up);
  CHECK(s.amp_lower == cplx{});
  CHECK(std::abs(s.amp_upper - cplx{0.0, -1.0}) < 1e-15);

  CHECK_THROWS_AS(apply_atom_jump({cplx{}, cplx{0.5}}, JumpKind::Down), std::domain_error);
  CHECK_THROWS_AS(apply_atom_jump({cplx{0.5}, cplx{}}, JumpKind::Up), std::domain_error);
}

TEST_CASE("thermal jumps with drive: projective values and coherence bound") {
  for (double drive : {0.1, 1.5}) {
    const PhysicalParams p(1.0, 0.25, drive);
    const auto traj = simulate_driven(p, 300.0, 0.1, 11);
    CHECK(times_increasing(traj.record));
    REQUIRE_FALSE(traj.record.events.empty());
    std::size_t next_event = 0;
    bool coherent = false;
    for (const auto& pt : traj.series) {
      CHECK(pt.p_e >= 0.0);
      CHECK(pt.p_e <= 1.0);
      CHECK(pt.coh_re * pt.coh_re + pt.coh_im * pt.coh_im <= pt.p_e * (1 - pt.p_e) + 1e-9);
      if (std::hypot(pt.coh_re, pt.coh_im) > 1e-3) coherent = true;
      if (next_event < traj.record.events.size() &&
          pt.t == traj.record.events[next_event].time) {
        const auto kind = traj.record.events[next_event].kind;
        CHECK(pt.p_e == (kind == JumpKind::Down ? 0.0 : 1.0));
        ++next_event;
      }
    }
    CHECK(next_event == traj.record.events.size());
    CHECK(coherent);
  }
}

TEST_CASE("strong drive oscillates with period pi/drive between jumps") {
  // With weak decay the excited population between jumps follows sin^2 or
  // cos^2 of drive*t closely; collect spacings of minima within each
  // jump-free segment.
  const DrivenModel model{{0.01, 0.002}, 1.5};
  const auto traj = simulate_driven(model, 200.0, 0.001, 4);
  const auto& s = traj.series;
  const auto& ev = traj.record.events;
  std::size_t seg = 0;
  double last_min = -1.0;
  RunningStats spacing;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    while (seg < ev.size() && s[k].t >= ev[seg].time) {
      ++seg;
      last_min = -1.0;
    }
    if (s[k].p_e < s[k - 1].p_e && s[k].p_e <= s[k + 1].p_e && s[k].p_e < 0.01) {
      if (last_min >= 0.0) spacing.add(s[k].t - last_min);
      last_min = s[k].t;
    }
  }
  REQUIRE(spacing.n >= 20);
  CHECK(spacing.mean == Approx(std::acos(-1.0) / 1.5).epsilon(1e-3));
}

TEST_CASE("zero drive reduces to the Einstein process") {
  const PhysicalParams p(1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto init = seed % 2 ? AtomState::Excited : AtomState::Ground;
    const auto traj = simulate_driven(p, 100.0, 1.0, seed, init);
    CHECK(kinds_alternate(traj.record));
  }

  RunningStats ex, gr;
  double excited = 0.0;
  const double t_max = 2e4;
  const auto traj = simulate_driven(p, t_max, 1.0, 77);
  const auto res = residence_times(traj.record);
  for (double t : res.excited) ex.add(t);
  for (double t : res.ground) gr.add(t);
  excited = excited_time(traj.record, t_max) / t_max;
  CHECK(std::abs(ex.mean - 0.5) < 4.0 * ex.std_error());
  CHECK(std::abs(gr.mean - 1.0) < 4.0 * gr.std_error());
  CHECK(excited == Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("driven runs are deterministic in the seed") {
  const PhysicalParams p(1.0, 0.25, 1.5);
  const auto a = simulate_driven(p, 100.0, 0.05, 9);
  const auto b = simulate_driven(p, 100.0, 0.05, 9);
  CHECK(a.series == b.series);
  CHECK(a.record == b.record);
  CHECK_THROWS_AS(simulate_driven(p, 10.0, 0.0, 9), std::invalid_argument);
}
