// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgst/channels.hpp"
#include "qgst/gateset.hpp"
#include "support/oracle.hpp"

#include <cmath>

using namespace qgst;
namespace ot = qgst::testing;

TEST_CASE("make_channel matches the closed forms") {
  SUBCASE("depolarizing(lambda) -> diag(1, 1-l, 1-l, 1-l)") {
    for (double l : {0.0, 0.1, 0.5, 1.0, 4.0 / 3.0}) {
      const Ptm r = make_channel(ChannelSpec::depolarizing(l));
      Mat4 want = Mat4::Identity();
      want(1, 1) = want(2, 2) = want(3, 3) = 1.0 - l;
      CHECK((r.m - want).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("rotation about z has the cos/sin core") {
    for (double th : {0.0, 0.3, M_PI / 2, 2.0, M_PI}) {
      const Ptm r = make_channel(ChannelSpec::rotation({0, 0, 1}, th));
      Mat4 want = Mat4::Identity();
      want(1, 1) = want(2, 2) = std::cos(th);
      want(1, 2) = -std::sin(th);
      want(2, 1) = std::sin(th);
      CHECK((r.m - want).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("null is the 4x4 identity") {
    CHECK((make_channel(ChannelSpec::null()).m - Mat4::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  SUBCASE("out-of-range parameters are rejected") {
    CHECK_THROWS_AS(make_channel(ChannelSpec::depolarizing(1.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_channel(ChannelSpec::dephasing(-0.1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_channel(ChannelSpec::amplitude_damping(1.2)),
                    std::invalid_argument);
    ChannelSpec bad = ChannelSpec::rotation({0, 0, 1}, 1.0);
    bad.axis = {0.0, 0.0, 2.0};
    CHECK_THROWS_AS(make_channel(bad), std::invalid_argument);
  }
}

TEST_CASE("depol_gate_error") {
  CHECK(depol_gate_error(0.0) == 0.0);
  CHECK(depol_gate_error(4.25e-4) == doctest::Approx(8.5e-4).epsilon(1e-12));

  SUBCASE("cross-check against the average-fidelity metric") {
    const double p = 0.005;
    CHECK(depol_gate_error(p) == doctest::Approx(0.01).epsilon(1e-12));
    const Ptm dep = make_channel(ChannelSpec::depolarizing(4.0 * p));
    CHECK(1.0 - avg_fidelity(Ptm{}, dep) ==
          doctest::Approx(depol_gate_error(p)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(depol_gate_error(0.3), std::invalid_argument);
}

TEST_CASE("overrotation_gate_error") {
  CHECK(overrotation_gate_error(0.0) == 0.0);

  SUBCASE("4 degrees lands near 8.1e-4, inside the 8.5e-4 +/- 10% band") {
    const double e = overrotation_gate_error(4.0 * M_PI / 180.0);
    CHECK(e == doctest::Approx(8.119e-4).epsilon(1e-3));
    CHECK(e >= 7.6e-4);
    CHECK(e <= 9.4e-4);
  }

  SUBCASE("matches the fidelity of over-rotated vs ideal Y90") {
    const double eps = 0.2;
    const Ptm ideal = make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2));
    const Ptm over =
        make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2 + eps));
    CHECK(overrotation_gate_error(eps) ==
          doctest::Approx(1.0 - avg_fidelity(over, ideal)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(overrotation_gate_error(-0.1), std::invalid_argument);
}

TEST_CASE("the gate-error depolarizing map is depolarizing(4p)") {
  ot::Rng rng(321);
  const double p = 0.03;
  const Ptm lhs = make_channel(ChannelSpec::depolarizing(4.0 * p));
  // PTM of rho -> (1-3p) rho + p sum s rho s, column by column via the oracle
  for (int t = 0; t < 20; ++t) {
    const Mat2c rho = ot::random_density(rng);
    const HSVector in = HSVector::from_state(rho);
    const HSVector via_ptm = apply_channel(lhs, in);
    const HSVector via_map = HSVector::from_state(ot::depol_gate_map(p, rho));
    CHECK((via_ptm.c - via_map.c).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("constructed channels are CPTP at 1e-12") {
  const std::vector<ChannelSpec> zoo = {
      ChannelSpec::depolarizing(0.0), ChannelSpec::depolarizing(0.7),
      ChannelSpec::depolarizing(4.0 / 3.0), ChannelSpec::dephasing(0.25),
      ChannelSpec::dephasing(1.0), ChannelSpec::amplitude_damping(0.5),
      ChannelSpec::amplitude_damping(1.0),
      ChannelSpec::rotation({1, 0, 0}, M_PI / 2),
      ChannelSpec::rotation({0.6, 0.0, 0.8}, 2.5), ChannelSpec::null()};
  for (const auto& spec : zoo) {
    const auto d = is_cptp(make_channel(spec), 1e-12);
    CHECK(d.cp_ok);
    CHECK(d.tp_ok);
  }
}

TEST_CASE("depolarizing channels compose multiplicatively on the diagonal") {
  ot::Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const double l1 = rng.uniform(0.0, 1.0), l2 = rng.uniform(0.0, 1.0);
    const Ptm c = compose(make_channel(ChannelSpec::depolarizing(l1)),
                          make_channel(ChannelSpec::depolarizing(l2)));
    const double want = (1.0 - l1) * (1.0 - l2);
    Mat4 expect = Mat4::Identity();
    expect(1, 1) = expect(2, 2) = expect(3, 3) = want;
    CHECK((c.m - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}
