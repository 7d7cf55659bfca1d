// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgst/channels.hpp"
#include "qgst/gateset.hpp"
#include "qgst/simulator.hpp"
#include "support/oracle.hpp"

#include <cmath>

using namespace qgst;
namespace ot = qgst::testing;

TEST_CASE("fiducial_ptm") {
  SUBCASE("empty sequence gives the identity") {
    const GateSet gs = ideal_gateset();
    CHECK((fiducial_ptm(gs, 0).m - Mat4::Identity()).cwiseAbs().maxCoeff() ==
          0.0);
  }

  SUBCASE("standard set: F4 is the X180 member itself") {
    const GateSet gs = ideal_gateset();
    CHECK((fiducial_ptm(gs, 3).m - gs.gates[3].m).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("minimal set: F4 = X90 twice equals X180") {
    const GateSet gs = ideal_gateset_minimal();
    const Ptm x180 = make_channel(ChannelSpec::rotation({1, 0, 0}, M_PI));
    CHECK((fiducial_ptm(gs, 3).m - x180.m).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((fiducial_ptm(gs, 3).m - gs.gates[1].m * gs.gates[1].m)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }

  SUBCASE("bad index") {
    const GateSet gs = ideal_gateset();
    CHECK_THROWS_AS(fiducial_ptm(gs, 7), std::out_of_range);
  }
}

TEST_CASE("circuit_probability on the ideal set") {
  const GateSet gs = ideal_gateset();

  // null circuit: orthogonal state and effect
  CHECK(std::abs(circuit_probability(gs, Circuit{0, 0, 0})) < 1e-14);
  // X180 in the middle: full flip
  CHECK(circuit_probability(gs, Circuit{0, 0, 3}) ==
        doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("Y90 in the middle gives one half, against the oracle") {
    CHECK(circuit_probability(gs, Circuit{0, 0, 2}) ==
          doctest::Approx(0.5).epsilon(1e-13));
    Mat2c rho = Mat2c::Zero();
    rho(0, 0) = 1.0;
    Mat2c e1 = Mat2c::Zero();
    e1(1, 1) = 1.0;
    const double want = ot::oracle_probability(
        rho, e1, {ot::oracle_rotation(0, 1, 0, M_PI / 2)});
    CHECK(circuit_probability(gs, Circuit{0, 0, 2}) ==
          doctest::Approx(want).epsilon(1e-13));
  }

  SUBCASE("sentinel forms drop the middle gate and second fiducial") {
    CHECK(circuit_probability(gs, Circuit{3, 0, -1}) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(circuit_probability(gs, Circuit{3, -1, -1}) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("gauge_transform") {
  const GateSet gs = ideal_gateset();
  const auto circuits = standard_circuits(4, 4);

  SUBCASE("identity gauge is a no-op") {
    const GateSet out = gauge_transform(gs, GaugeMatrix{});
    for (int k = 0; k < 4; ++k)
      CHECK((out.gates[k].m - gs.gates[k].m).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((out.rho.c - gs.rho.c).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((out.effect.c - gs.effect.c).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("random invertible gauges preserve every circuit probability") {
    ot::Rng rng(2024);
    for (int t = 0; t < 25; ++t) {
      const GaugeMatrix b{ot::random_invertible(rng)};
      const GateSet out = gauge_transform(gs, b);
      for (const auto& c : circuits) {
        CHECK(std::abs(circuit_probability(out, c) -
                       circuit_probability(gs, c)) < 1e-12);
      }
    }
  }

  SUBCASE("the target gauge matrix preserves probabilities too") {
    Mat4 b0;
    for (int j = 0; j < 4; ++j) b0.col(j) = fiducial_ptm(gs, j).m * gs.rho.c;
    const GateSet out = gauge_transform(gs, GaugeMatrix{b0});
    for (const auto& c : circuits) {
      CHECK(std::abs(circuit_probability(out, c) - circuit_probability(gs, c)) <
            1e-12);
    }
  }

  SUBCASE("singular gauge is rejected") {
    GaugeMatrix b;
    b.b = Mat4::Zero();
    CHECK_THROWS_AS(gauge_transform(gs, b), std::invalid_argument);
  }
}

TEST_CASE("avg_fidelity") {
  const GateSet gs = ideal_gateset();

  SUBCASE("self fidelity is one") {
    for (const auto& g : gs.gates)
      CHECK(avg_fidelity(g, g) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("depolarizing composition gives 1 - 2p") {
    const double p = 0.004;
    const Ptm noisy = compose(make_channel(ChannelSpec::depolarizing(4.0 * p)),
                              gs.gates[1]);
    CHECK(1.0 - avg_fidelity(gs.gates[1], noisy) ==
          doctest::Approx(2.0 * p).epsilon(1e-10));
  }

  SUBCASE("over-rotation closed form") {
    const double eps = 0.11;
    const Ptm over =
        make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2 + eps));
    const Ptm ideal = make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2));
    CHECK(1.0 - avg_fidelity(over, ideal) ==
          doctest::Approx((2.0 - 2.0 * std::cos(eps)) / 6.0).epsilon(1e-12));
  }

  SUBCASE("gauge invariance via trace cyclicity") {
    ot::Rng rng(5150);
    KrausSet ka, kc;
    ka.ops = ot::random_cptp(rng).kraus;
    kc.ops = ot::random_cptp(rng).kraus;
    const Ptm a = kraus_to_ptm(ka), c = kraus_to_ptm(kc);
    for (int t = 0; t < 10; ++t) {
      const Mat4 b = ot::random_invertible(rng);
      const Ptm a2{b.inverse() * a.m * b}, c2{b.inverse() * c.m * b};
      CHECK(avg_fidelity(a2, c2) ==
            doctest::Approx(avg_fidelity(a, c)).epsilon(1e-10));
    }
  }

  SUBCASE("singular reference is rejected") {
    Ptm dead;
    dead.m = Mat4::Zero();
    CHECK_THROWS_AS(avg_fidelity(dead, Ptm{}), std::domain_error);
  }
}

TEST_CASE("spectral_distance") {
  CHECK(spectral_distance(Ptm{}, Ptm{}) == 0.0);

  SUBCASE("diagonal difference") {
    const double l = 0.23;
    const Ptm dep = make_channel(ChannelSpec::depolarizing(l));
    CHECK(spectral_distance(Ptm{}, dep) == doctest::Approx(l).epsilon(1e-13));
  }

  SUBCASE("over-rotation distance is 2 sin(eps/2), by the SVD") {
    for (double eps : {0.01, 0.07, 0.3}) {
      const Ptm over =
          make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2 + eps));
      const Ptm ideal = make_channel(ChannelSpec::rotation({0, 1, 0}, M_PI / 2));
      CHECK(spectral_distance(over, ideal) ==
            doctest::Approx(2.0 * std::sin(0.5 * eps)).epsilon(1e-12));
    }
  }
}

TEST_CASE("physical gate sets keep all 84 circuit probabilities in [0, 1]") {
  GateSet gs = ideal_gateset();
  // attach generic noise to make the check non-trivial
  gs.gates[1] = compose(make_channel(ChannelSpec::depolarizing(0.05)), gs.gates[1]);
  gs.gates[2] = compose(make_channel(ChannelSpec::amplitude_damping(0.08)),
                        gs.gates[2]);
  gs.gates[3] = compose(make_channel(ChannelSpec::dephasing(0.1)), gs.gates[3]);
  const auto circuits = standard_circuits(4, 4);
  CHECK(circuits.size() == 84);
  for (const auto& c : circuits) {
    const double p = circuit_probability(gs, c);
    CHECK(p >= -1e-9);
    CHECK(p <= 1.0 + 1e-9);
  }
}

TEST_CASE("gate set validation") {
  GateSet gs = ideal_gateset();
  gs.gates[0].m(1, 1) = 0.999;
  CHECK_THROWS_AS(gs.validate(), std::invalid_argument);

  GateSet gs2 = ideal_gateset();
  gs2.fiducials.seqs[0] = {1};
  CHECK_THROWS_AS(gs2.validate(), std::invalid_argument);

  GateSet gs3 = ideal_gateset();
  gs3.fiducials.seqs[2] = {9};
  CHECK_THROWS_AS(gs3.validate(), std::out_of_range);
}
