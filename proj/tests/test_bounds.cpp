#include "doctest.h"

#include "cpnlab/bounds.hpp"

using namespace cpnlab;

TEST_CASE("bound values") {
  CHECK(eval_bound(BoundSpec::cpn_p(2, 2.0, kPi)).value() == doctest::Approx(kPi * kPi));
  CHECK(eval_bound(BoundSpec::cpn_p(1, 2.0, kPi)).value() == doctest::Approx(kPi));
  CHECK(eval_bound(BoundSpec::cpn_p(2, 4.0, kPi)).value() == doctest::Approx(4 * kPi * kPi));
  CHECK(eval_bound(BoundSpec::cpn_p(2, 4.0, kPi)).strict);
  CHECK_FALSE(eval_bound(BoundSpec::cpn_p(2, 2.0, kPi)).strict);
  CHECK(eval_bound(BoundSpec::rpn_p(3, 2.0, kPi)).value() == doctest::Approx(1.5 * kPi * kPi));
  CHECK(eval_bound(BoundSpec::rpn_p(2, 1.0, kPi)).value() == doctest::Approx(std::sqrt(2.0) * kPi));
  CHECK(eval_bound(BoundSpec::rpn_p(2, 2.0, kPi)).value() == doctest::Approx(2 * kPi));
  const BoundValue iv = eval_bound(BoundSpec::rp3_interval(2 * kPi));
  CHECK(iv.interval);
  CHECK(iv.lo == doctest::Approx(1.5 * kPi * kPi));
  CHECK(iv.hi == doctest::Approx(2 * kPi * kPi));
  CHECK(eval_bound(BoundSpec::pu(2 * kPi, kPi)).value() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eval_bound(BoundSpec::elementary(4.0, 2, 4 * kPi, 4 * kPi)).value() == doctest::Approx(8 * kPi));
}

TEST_CASE("complex bound at p = 2 equals the infimum formula") {
  for (int N = 1; N <= 5; ++N) {
    const double a = eval_bound(BoundSpec::cpn_p(N, 2.0, 1.7)).value();
    const double b = eval_bound(BoundSpec::infimum(N, 1.7)).value();
    CHECK(std::abs(a - b) <= 1e-12 * b);
  }
  CHECK(c_n(1) == doctest::Approx(1.0));
  CHECK(c_n(3) == doctest::Approx(kPi * kPi / 2));
}

TEST_CASE("bound domains") {
  CHECK_THROWS_AS(eval_bound(BoundSpec::cpn_p(2, 1.5, kPi)), DomainError);
  CHECK_THROWS_AS(eval_bound(BoundSpec::rpn_p(3, 0.5, kPi)), DomainError);
  CHECK_THROWS_AS(eval_bound(BoundSpec::cpn_p(2, 2.0, -1.0)), DomainError);
  CHECK_THROWS_AS(eval_bound(BoundSpec::rp3_interval(0.0)), DomainError);
  CHECK_THROWS_AS(eval_bound(BoundSpec::elementary(1.0, 2, 1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(c_n(0), DomainError);
}

TEST_CASE("bound parsing") {
  const BoundSpec s = parse_bound("CPN_P(2,4,pi)");
  CHECK(s.kind == BoundKind::CpnP);
  CHECK(s.N == 2);
  CHECK(s.p == 4.0);
  CHECK(s.Astar == doctest::Approx(kPi));
  CHECK(parse_bound("RP3_INTERVAL(2pi)").Bstar == doctest::Approx(2 * kPi));
  CHECK(parse_bound("RP3_INTERVAL(2*pi)").Bstar == doctest::Approx(2 * kPi));
  CHECK(parse_bound("RPN_P(3, 2, 3.5)").Lstar == 3.5);
  CHECK(to_string(parse_bound("PU(7,3)").kind) == "PU");
  CHECK_THROWS_AS(parse_bound("CPN_P(2,4)"), DomainError);
  CHECK_THROWS_AS(parse_bound("FOO(1)"), DomainError);
  CHECK_THROWS_AS(parse_bound("CPN_P"), DomainError);
}

TEST_CASE("graph systole of round and scaled RP^2") {
  const ConformalFactor one = [](const Eigen::Vector3d&) { return 1.0; };
  const ConformalFactor four = [](const Eigen::Vector3d&) { return 4.0; };
  CHECK(graph_systole(one, 2) == doctest::Approx(kPi).epsilon(2e-2));
  CHECK(graph_systole(four, 2) == doctest::Approx(2 * graph_systole(one, 2)).epsilon(1e-12));
  // Graph paths are never shorter than geodesics.
  CHECK(graph_systole(one, 2, 1) >= kPi - 1e-12);
  CHECK(graph_systole(one, 2, 1) >= graph_systole(one, 2, 3));
  CHECK_THROWS_AS(graph_systole(one, 0), DomainError);
  const ConformalFactor bad = [](const Eigen::Vector3d& x) { return x[0]; };
  CHECK_THROWS_AS(graph_systole(bad, 1), DomainError);
}

TEST_CASE("Pu slack of a non-constant factor") {
  // Area 2 pi + pi / 3 exactly; systole pi along x_0 = 0.
  const ConformalFactor mu = [](const Eigen::Vector3d& x) { return 1.0 + 0.5 * x[0] * x[0]; };
  const SystoleResult r = systole_rp2(mu, 2);
  CHECK(r.area == doctest::Approx(7 * kPi / 3).epsilon(1e-2));
  CHECK(r.refined == doctest::Approx(kPi).epsilon(2e-2));
  CHECK(r.slack > 3 * r.slack_uncertainty);
  CHECK(r.level == 2);
  CHECK(r.ring == 3);
}
