// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgst/channels.hpp"
#include "qgst/lgst.hpp"
#include "qgst/simulator.hpp"
#include "support/oracle.hpp"

#include <cmath>

using namespace qgst;
namespace ot = qgst::testing;

namespace {

// Small generic CPTP perturbation of the ideal set.
GateSet noisy_true_set(double scale) {
  ErrorModel em;
  em.gate_post.assign(4, {});
  em.gate_post[1] = {ChannelSpec::depolarizing(2.0 * scale)};
  em.gate_post[2] = {ChannelSpec::rotation({0, 1, 0}, 4.0 * scale)};
  em.gate_post[3] = {ChannelSpec::amplitude_damping(scale)};
  em.rho_errors = {ChannelSpec::depolarizing(scale)};
  return build_true_gateset(ideal_gateset(), em);
}

double max_gate_diff(const GateSet& a, const GateSet& b) {
  double worst = 0.0;
  for (int k = 0; k < a.num_gates(); ++k) {
    worst =
        std::max(worst, (a.gates[k].m - b.gates[k].m).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("assemble_gram") {
  const GateSet ideal = ideal_gateset();

  SUBCASE("exact data reproduces the analytic Gram matrix") {
    const Dataset d = run_protocol(ideal, 0, 0);
    const GramData gd = assemble_gram(d);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(gd.g(i, j) ==
              doctest::Approx(circuit_probability(ideal, Circuit{i, j, -1}))
                  .epsilon(1e-13));
      }
    }
    // first row of g above the single-fiducial vector (F_0 is the null string)
    for (int j = 0; j < 4; ++j)
      CHECK(gd.g(0, j) == doctest::Approx(gd.rho_tilde[j]).epsilon(1e-13));
    CHECK((gd.rho_tilde - gd.e_tilde).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("g equals the k = 0 slice exactly, even at finite shots") {
    const Dataset d = run_protocol(ideal, 800, 3);
    const GramData gd = assemble_gram(d);
    CHECK((gd.g - gd.gtilde[0]).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& r : d.records) {
      if (r.k == 0) CHECK(gd.g(r.i, r.j) == r.mean);
      if (r.k > 0) CHECK(gd.gtilde[r.k](r.i, r.j) == r.mean);
    }
  }

  SUBCASE("a missing record is reported") {
    Dataset d = run_protocol(ideal, 0, 0);
    d.records.pop_back();
    CHECK_THROWS_AS(assemble_gram(d), DataError);
  }
}

TEST_CASE("gram_diagnostics") {
  const GateSet ideal = ideal_gateset();

  SUBCASE("the standard fiducials pass the 0.1 floor") {
    const Dataset d = run_protocol(ideal, 0, 0);
    const GramDiagnostics gd = gram_diagnostics(assemble_gram(d).g);
    CHECK(gd.invertible);
    CHECK(gd.min_abs_eigenvalue >= 0.1);
  }

  SUBCASE("all-null fiducials are rank one and fail") {
    GateSet degenerate = ideal;
    degenerate.fiducials.seqs = {{}, {}, {}, {}};
    const Dataset d = run_protocol(degenerate, 0, 0);
    const GramDiagnostics gd = gram_diagnostics(assemble_gram(d).g);
    CHECK_FALSE(gd.invertible);
    CHECK(gd.min_abs_eigenvalue < 1e-12);
  }

  SUBCASE("the threshold is configurable") {
    Mat4 g = 0.05 * Mat4::Identity();
    CHECK_FALSE(gram_diagnostics(g, 0.1).invertible);
    CHECK(gram_diagnostics(g, 0.01).invertible);
  }
}

TEST_CASE("linear_inversion") {
  const GateSet ideal = ideal_gateset();

  SUBCASE("exact data gives gates conjugated by the analytic B") {
    const GateSet truth = noisy_true_set(0.01);
    const Dataset d = run_protocol(truth, 0, 0);
    const GateSet raw =
        linear_inversion(assemble_gram(d), truth.fiducials, truth.labels);

    Mat4 b;
    for (int j = 0; j < 4; ++j) b.col(j) = fiducial_ptm(truth, j).m * truth.rho.c;
    const Mat4 binv = b.inverse();
    for (int k = 1; k < 4; ++k) {
      const Mat4 want = binv * truth.gates[k].m * b;
      CHECK((raw.gates[k].m - want).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK((raw.rho.c - binv * truth.rho.c).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((raw.effect.c - b.transpose() * truth.effect.c).cwiseAbs().maxCoeff() <
          1e-10);
  }

  SUBCASE("the null-gate estimate is exactly the identity") {
    const Dataset d = run_protocol(ideal, 400, 11);
    const GateSet raw =
        linear_inversion(assemble_gram(d), ideal.fiducials, ideal.labels);
    CHECK((raw.gates[0].m - Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("noisy data typically yields an unphysical raw estimate") {
    const Dataset d = run_protocol(ideal, 300, 21);
    const GateSet raw =
        linear_inversion(assemble_gram(d), ideal.fiducials, ideal.labels);
    bool any_violation = false;
    for (int k = 1; k < 4; ++k) {
      const auto diag = is_cptp(raw.gates[k], 1e-9);
      if (!diag.cp_ok || !diag.tp_ok) any_violation = true;
    }
    CHECK(any_violation);
  }

  SUBCASE("a singular Gram matrix raises GramError") {
    GateSet degenerate = ideal;
    degenerate.fiducials.seqs = {{}, {}, {}, {}};
    const Dataset d = run_protocol(degenerate, 0, 0);
    CHECK_THROWS_AS(
        linear_inversion(assemble_gram(d), degenerate.fiducials,
                         degenerate.labels),
        GramError);
  }
}

TEST_CASE("gauge_optimize") {
  const GateSet target = ideal_gateset();

  SUBCASE("target data in the inversion gauge starts at objective zero") {
    // raw as linear inversion would deliver it: conjugated by the target
    // gauge matrix, which is also the optimizer start
    Mat4 b0;
    for (int j = 0; j < 4; ++j) b0.col(j) = fiducial_ptm(target, j).m * target.rho.c;
    const GateSet raw = gauge_transform(target, GaugeMatrix{b0});
    const GaugeOptResult res = gauge_optimize(raw, target);
    CHECK(res.initial_objective < 1e-20);
    CHECK(res.final_objective < 1e-20);
    CHECK(max_gate_diff(res.estimate, target) < 1e-10);
  }

  SUBCASE("a known gauge transform of the target is recovered") {
    // the search is local from the canonical start, so the planted gauge
    // is drawn from its neighborhood
    Mat4 b0;
    for (int j = 0; j < 4; ++j) b0.col(j) = fiducial_ptm(target, j).m * target.rho.c;
    ot::Rng rng(606);
    for (double scale : {0.02, 0.1, 0.25}) {
      Mat4 g;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g(r, c) = scale * rng.gauss();
      const GaugeMatrix b{b0 * (Mat4::Identity() + g)};
      const GateSet raw = gauge_transform(target, b);
      const GaugeOptResult res = gauge_optimize(raw, target);
      CHECK(res.final_objective < 1e-16);
      CHECK(max_gate_diff(res.estimate, target) < 1e-8);
      // rho and E carry a reciprocal scale freedom (det B is not pinned);
      // only their outer product is identified
      const Mat4 product = res.estimate.rho.c * res.estimate.effect.c.transpose();
      const Mat4 want = target.rho.c * target.effect.c.transpose();
      CHECK((product - want).cwiseAbs().maxCoeff() < 1e-8);
      const double c = res.estimate.rho.c.dot(target.rho.c) /
                       target.rho.c.squaredNorm();
      CHECK((res.estimate.rho.c - c * target.rho.c).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((res.estimate.effect.c - target.effect.c / c).cwiseAbs().maxCoeff() <
            1e-8);
    }
  }

  SUBCASE("objective never increases and ends at or below the start") {
    const GateSet truth = noisy_true_set(0.02);
    const Dataset d = run_protocol(truth, 2000, 5);
    const GateSet raw =
        linear_inversion(assemble_gram(d), target.fiducials, target.labels);
    const GaugeOptResult res = gauge_optimize(raw, target);
    CHECK(res.final_objective <= res.initial_objective);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] <= res.objective_trace[i - 1]);
  }

  SUBCASE("objective is invariant under gauges commuting with the targets") {
    // a z-rotation-only target set: z rotations fix rho and E as well
    GateSet ztarget = ideal_gateset();
    ztarget.gates = {Ptm{}, make_channel(ChannelSpec::rotation({0, 0, 1}, M_PI / 2)),
                     make_channel(ChannelSpec::rotation({0, 0, 1}, M_PI / 4)),
                     make_channel(ChannelSpec::rotation({0, 0, 1}, M_PI))};
    ztarget.labels = {"null", "Z90", "Z45", "Z180"};

    ot::Rng rng(707);
    const GaugeMatrix b{ot::random_invertible(rng)};
    const GateSet raw = gauge_transform(ztarget, b);

    auto objective_at = [&](const Mat4& bm) {
      double total = 0.0;
      const Mat4 binv = bm.inverse();
      for (int k = 1; k < 4; ++k) {
        total += (raw.gates[k].m - binv * ztarget.gates[k].m * bm).squaredNorm();
      }
      const Mat4 pseudo_raw = raw.rho.c * raw.effect.c.transpose();
      const Mat4 pseudo_t = ztarget.rho.c * ztarget.effect.c.transpose();
      total += (pseudo_raw - binv * pseudo_t * bm).squaredNorm();
      return total;
    };

    const Mat4 q = make_channel(ChannelSpec::rotation({0, 0, 1}, 0.3)).m;
    for (const Mat4& probe :
         {b.b, Mat4(1.7 * b.b), Mat4(q * b.b), Mat4(-b.b)}) {
      CHECK(objective_at(probe) ==
            doctest::Approx(objective_at(b.b)).epsilon(1e-9));
    }
  }
}

TEST_CASE("project_physical") {
  SUBCASE("an already physical set is returned unchanged") {
    const GateSet truth = noisy_true_set(0.05);
    const GateSet out = project_physical(truth);
    CHECK(max_gate_diff(out, truth) == 0.0);
    CHECK((out.rho.c - truth.rho.c).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("diag(1, 1.01, 1, 1) gets its chi eigenvalue clipped") {
    GateSet gs = ideal_gateset();
    gs.gates[1] = Ptm{};
    gs.gates[1].m(1, 1) = 1.01;
    const GateSet out = project_physical(gs);
    const auto diag = is_cptp(out.gates[1], 1e-6);
    CHECK(diag.cp_ok);
    CHECK(diag.tp_ok);

    // eigenvalue-truncation oracle: clip the chi spectrum directly, then
    // renormalize the Kraus sum back to the identity
    const ChiMatrix repaired =
        tp_normalize_chi(clip_psd(ptm_to_chi(gs.gates[1])));
    CHECK((out.gates[1].m - chi_to_ptm(repaired).m).cwiseAbs().maxCoeff() <
          1e-12);
    // the repair stays close to the input
    CHECK(spectral_distance(out.gates[1], gs.gates[1]) < 0.02);
  }

  SUBCASE("raw noisy LGST becomes a physical starting point") {
    const GateSet ideal = ideal_gateset();
    const Dataset d = run_protocol(ideal, 300, 21);
    const GateSet raw =
        linear_inversion(assemble_gram(d), ideal.fiducials, ideal.labels);
    const GateSet out = project_physical(raw);
    for (int k = 0; k < 4; ++k) {
      const auto diag = is_cptp(out.gates[k], 1e-6);
      CHECK(diag.cp_ok);
      CHECK(diag.tp_ok);
    }
    CHECK(out.rho.is_valid(1e-9));
    CHECK(out.effect.is_valid(1e-9));
  }
}

TEST_CASE("closure: exact data, gauge target = truth, estimate = truth") {
  SUBCASE("ideal true set") {
    const GateSet truth = ideal_gateset();
    const Dataset d = run_protocol(truth, 0, 0);
    const LgstResult res = run_lgst(d, truth);
    CHECK(max_gate_diff(res.gauge.estimate, truth) < 1e-8);
    CHECK((res.gauge.estimate.rho.c - truth.rho.c).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((res.gauge.estimate.effect.c - truth.effect.c).cwiseAbs().maxCoeff() <
          1e-8);
  }

  SUBCASE("generic noisy CPTP true sets") {
    for (double scale : {0.003, 0.02, 0.08}) {
      const GateSet truth = noisy_true_set(scale);
      const Dataset d = run_protocol(truth, 0, 0);
      const LgstResult res = run_lgst(d, truth);
      CHECK(max_gate_diff(res.gauge.estimate, truth) < 1e-8);
    }
  }
}

TEST_CASE("g^-1 gtilde_0 is the identity by construction") {
  const GateSet ideal = ideal_gateset();
  const Dataset d = run_protocol(ideal, 250, 9);
  const GramData gd = assemble_gram(d);
  const GateSet raw = linear_inversion(gd, ideal.fiducials, ideal.labels);
  CHECK((raw.gates[0].m - Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
}
