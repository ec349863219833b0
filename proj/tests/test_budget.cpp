#include "ikrylov/budget.hpp"

#include <cmath>

#include "doctest.h"
#include "ikrylov/errors.hpp"

using namespace ikrylov;

TEST_CASE("k_max_spectral against direct evaluation") {
  // kappa = 1e2: rho = 9/11, ceil(log(1e-3)/log(rho)) = ceil(34.42) = 35
  CHECK(k_max_spectral(1e-3, {1e-2, 1.0, 1.0, 10}) == 35);
  // kappa = 1e4: rho = 99/101, ceil(345.38) = 346
  CHECK(k_max_spectral(1e-3, {1e-4, 1.0, 1.0, 10}) == 346);
  // near-unit conditioning converges instantly
  CHECK(k_max_spectral(1e-3, {1.0, 1.0, 1.0, 10}) == 1);
  CHECK(k_max_spectral(1e-3, {1.0, 1.0 + 1e-13, 1.0, 10}) == 1);
}

TEST_CASE("k_max_spectral input validation") {
  CHECK_THROWS_AS(k_max_spectral(0.0, {1e-2, 1.0, 1.0, 10}), InvalidAccuracy);
  CHECK_THROWS_AS(k_max_spectral(1.0, {1e-2, 1.0, 1.0, 10}), InvalidAccuracy);
  CHECK_THROWS_AS(k_max_spectral(1e-3, {0.0, 1.0, 1.0, 10}), InvalidSpec);
}

TEST_CASE("k_max_spectral monotonicity") {
  double last = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-5, 1e-7}) {
    double v = k_max_spectral(eps, {1e-3, 1.0, 1.0, 10});
    CHECK(v >= last);  // non-increasing in eps means larger for smaller eps
    last = v;
  }
  last = 0.0;
  for (double kappa : {1e1, 1e2, 1e3, 1e4}) {
    double v = k_max_spectral(1e-3, {1.0 / kappa, 1.0, 1.0, 10});
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("budget_init") {
  BudgetState s = budget_init(3000, 35);
  CHECK(s.k_max == 35);
  CHECK(s.phi_current == 35.0);
  CHECK(s.Phi_remaining == 1.0);
  CHECK(s.iterations_used == 0);
  CHECK(budget_init(1, 100).k_max == 1);
  CHECK(budget_init(10, 10).k_max == 10);
  CHECK_THROWS_AS(budget_init(0, 10), InvalidSpec);
}

TEST_CASE("phi_hat_fom formula") {
  CHECK(phi_hat_fom(1, 1, 1, 1, 1, 1) == 1.0);
  // halving omega_hat doubles phi_hat
  CHECK(phi_hat_fom(1, 1, 0.5, 1, 1, 1) == 2.0);
  CHECK(phi_hat_fom(0.0158, 1.0, 1e-3, 1.0, 10.0, 0.1) ==
        doctest::Approx(15.8).epsilon(1e-12));
  CHECK_THROWS_AS(phi_hat_fom(1, 1, 1, 1, 1, 0.0), DegenerateResidual);
}

TEST_CASE("phi_hat_cg formula") {
  CHECK(phi_hat_cg(0.0158, 1.0, 0.5, 1.0, 0.1) ==
        doctest::Approx(1.58).epsilon(1e-12));
  // omega_hat -> 1 collapses the weight
  CHECK(phi_hat_cg(1.0, 1.0, 1.0 - 1e-12, 1.0, 1.0) ==
        doctest::Approx(1e-12).epsilon(1e-3));
  // doubling ||r|| quarters phi_hat
  double base = phi_hat_cg(0.01, 2.0, 0.3, 1.5, 0.2);
  CHECK(phi_hat_cg(0.01, 2.0, 0.3, 1.5, 0.4) ==
        doctest::Approx(base / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(phi_hat_cg(1, 1, 0.5, 1, 0.0), DegenerateResidual);
}

TEST_CASE("budget_update keeps phi constant under uniform spending") {
  BudgetState s = budget_init(10, 10);
  for (int k = 0; k < 9; ++k) {
    double phi = s.phi_current;
    s = budget_update(s, phi);
    CHECK(s.phi_current == doctest::Approx(10.0).epsilon(1e-12));
  }
  CHECK(s.Phi_remaining == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("budget_update with a near-infinite phi_hat spends nothing") {
  BudgetState s = budget_init(10, 10);
  s = budget_update(s, 1e300);
  CHECK(s.Phi_remaining == 1.0);
  CHECK(s.phi_current == doctest::Approx(9.0).epsilon(1e-12));
  // the per-step allowance 1/phi grew
  CHECK(1.0 / s.phi_current > 1.0 / 10.0);
}

TEST_CASE("budget_update freezes phi once exhausted") {
  BudgetState s = budget_init(3, 3);
  s = budget_update(s, 1.0);  // spends the whole budget at once
  CHECK(s.Phi_remaining <= 0.0);
  double frozen = s.phi_current;
  s = budget_update(s, 5.0);
  CHECK(s.phi_current == frozen);
  s = budget_update(s, 5.0);  // past k_max as well
  CHECK(s.phi_current == frozen);
  CHECK(s.phi_current > 0.0);
}

TEST_CASE("spend sums stay within the budget while phi is managed") {
  // spending at most the current allowance keeps sum(1/phi_hat) <= 1
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    int k_max = 2 + static_cast<int>(rng.uniform() * 40);
    BudgetState s = budget_init(k_max, k_max);
    double spent = 0.0;
    for (int k = 0; k < k_max; ++k) {
      double phi_hat = s.phi_current * (1.0 + 3.0 * rng.uniform());
      spent += 1.0 / phi_hat;
      s = budget_update(s, phi_hat);
    }
    CHECK(spent <= 1.0 + 1e-12);
  }
}
