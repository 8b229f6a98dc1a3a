#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "archk/metric.hpp"
#include "archk/space.hpp"
#include "support/generators.hpp"

using namespace archk;
using archk::testing::code_of;

namespace {

DimMetricParams params(double omega, double rho) {
  DimMetricParams p;
  p.gamma = 1.0;
  p.rho = rho;
  p.omega = omega;
  return p;
}

const RealBounded kUnit{0.0, 1.0};

RealPoint active_at(double x) { return RealPoint{true, x}; }
const RealPoint kInactiveReal{false, std::nullopt};

CatPoint holds(std::size_t j) { return CatPoint{true, j}; }
const CatPoint kInactiveCat{false, std::nullopt};

}  // namespace

TEST_CASE("dist_real activity cases") {
  CHECK(dist_real(params(0.7, 0.5), kUnit, kInactiveReal, kInactiveReal) == 0.0);
  CHECK(dist_real(params(0.7, 0.5), kUnit, active_at(0.3), kInactiveReal) == 0.7);
  CHECK(dist_real(params(0.7, 0.5), kUnit, kInactiveReal, active_at(0.3)) == 0.7);
}

TEST_CASE("dist_real both-active values") {
  // half the unit interval at rho=1: 2 sin(pi/4) = sqrt(2)
  const double d = dist_real(params(1.0, 1.0), kUnit, active_at(0.0), active_at(0.5));
  CHECK(std::abs(d - std::numbers::sqrt2) <= 1e-15);

  // the stable form agrees with omega*sqrt(2)*sqrt(1-cos(...))
  const double delta = 0.37;
  const double rho = 0.8;
  const double naive = std::sqrt(2.0 * (1.0 - std::cos(std::numbers::pi * rho * delta)));
  const double stable = dist_real(params(1.0, rho), kUnit, active_at(0.1), active_at(0.47));
  CHECK(std::abs(stable - naive) <= 1e-13);

  CHECK(dist_real(params(1.0, 1.0), kUnit, active_at(0.25), active_at(0.25)) == 0.0);
}

TEST_CASE("rho=1/3 makes a full-span pair exactly as far as an activity flip") {
  const RealBounded bounds{-2.0, 5.0};
  const double rho_third = 1.0 / 3.0;
  const double at = dist_real(params(1.0, rho_third), bounds, active_at(-2.0), active_at(5.0));
  CHECK(std::abs(at - 1.0) <= 1e-12);

  const double above =
      dist_real(params(1.0, rho_third + 0.05), bounds, active_at(-2.0), active_at(5.0));
  const double below =
      dist_real(params(1.0, rho_third - 0.05), bounds, active_at(-2.0), active_at(5.0));
  CHECK(above > 1.0);
  CHECK(below < 1.0);
}

TEST_CASE("dist_real is strictly increasing in the gap for rho <= 1") {
  for (const double rho : {0.2, 0.7, 1.0}) {
    double previous = -1.0;
    for (int step = 0; step <= 20; ++step) {
      const double x = static_cast<double>(step) / 20.0;
      const double d = dist_real(params(1.0, rho), kUnit, active_at(0.0), active_at(x));
      CHECK(d > previous);
      previous = d;
    }
  }
}

TEST_CASE("dist_real symmetry and omega scaling are exact") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double rho = rng.uniform();
    const double w = rng.uniform();
    const RealPoint a = rng.bernoulli(0.8) ? active_at(rng.uniform()) : kInactiveReal;
    const RealPoint b = rng.bernoulli(0.8) ? active_at(rng.uniform()) : kInactiveReal;
    const double ab = dist_real(params(w, rho), kUnit, a, b);
    CHECK(ab == dist_real(params(w, rho), kUnit, b, a));
    CHECK(ab >= 0.0);
    CHECK(ab == w * dist_real(params(1.0, rho), kUnit, a, b));
  }
}

TEST_CASE("dist_real input validation") {
  CHECK(code_of([] {
          dist_real(params(1.0, 1.0), kUnit, RealPoint{true, std::nullopt}, active_at(0.5));
        }) == Errc::MissingValue);
  CHECK(code_of([] {
          dist_real(params(1.0, 1.0), kUnit, active_at(1.5), active_at(0.5));
        }) == Errc::ValueOutOfBounds);
  CHECK(code_of([] {
          dist_real(params(1.0, 1.0), kUnit, active_at(std::nan("")), active_at(0.5));
        }) == Errc::ValueOutOfBounds);
  CHECK(code_of([] {
          dist_real(params(1.0, 1.5), kUnit, active_at(0.1), active_at(0.5));
        }) == Errc::InvalidHyperparameter);
  CHECK(code_of([] {
          dist_real(params(-0.1, 1.0), kUnit, active_at(0.1), active_at(0.5));
        }) == Errc::InvalidHyperparameter);
  // inactive points may omit values without complaint
  CHECK_NOTHROW(dist_real(params(1.0, 1.0), kUnit, kInactiveReal, active_at(0.5)));
}

TEST_CASE("embed_real") {
  SUBCASE("inactive is the origin") {
    const Eigen::VectorXd v = embed_real(params(0.9, 0.5), kUnit, kInactiveReal);
    CHECK(v.size() == 2);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("lower bound maps to [0, omega]") {
    const Eigen::VectorXd v = embed_real(params(1.0, 0.8), kUnit, active_at(0.0));
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 1.0);
  }
  SUBCASE("midpoint at rho=1 maps to [omega, ~0]") {
    const Eigen::VectorXd v = embed_real(params(0.5, 1.0), kUnit, active_at(0.5));
    CHECK(v[0] == 0.5);
    CHECK(std::abs(v[1]) < 1e-16);
  }
  SUBCASE("norm equals omega when active") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const double w = rng.uniform();
      const Eigen::VectorXd v =
          embed_real(params(w, rng.uniform()), kUnit, active_at(rng.uniform()));
      CHECK(std::abs(v.norm() - w) <= 1e-15);
    }
  }
  SUBCASE("negative lower bound keeps the angle in range") {
    const RealBounded shifted{-10.0, -4.0};
    const Eigen::VectorXd at_lower = embed_real(params(1.0, 1.0), shifted, active_at(-10.0));
    CHECK(at_lower[0] == 0.0);
    CHECK(at_lower[1] == 1.0);
  }
}

TEST_CASE("embedding distance reproduces dist_real") {
  Rng rng(37);
  const RealBounded bounds{-1.5, 4.0};
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const DimMetricParams p = params(rng.uniform(), rng.uniform());
    const RealPoint a =
        rng.bernoulli(0.75) ? active_at(rng.uniform(-1.5, 4.0)) : kInactiveReal;
    const RealPoint b =
        rng.bernoulli(0.75) ? active_at(rng.uniform(-1.5, 4.0)) : kInactiveReal;
    const double direct = dist_real(p, bounds, a, b);
    const double through =
        (embed_real(p, bounds, a) - embed_real(p, bounds, b)).norm();
    worst = std::max(worst, std::abs(direct - through));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("dist_cat activity and symbol cases") {
  CHECK(dist_cat(params(0.6, 0.5), 3, kInactiveCat, kInactiveCat) == 0.0);
  CHECK(dist_cat(params(0.6, 0.5), 3, holds(1), kInactiveCat) == 0.6);
  CHECK(dist_cat(params(0.6, 0.5), 3, kInactiveCat, holds(2)) == 0.6);
  CHECK(dist_cat(params(0.6, 0.5), 3, holds(1), holds(1)) == 0.0);
}

TEST_CASE("dist_cat differing-symbol values") {
  // m=2, rho=1: denominator is 1, so the distance is omega*sqrt(2)
  const double top = dist_cat(params(1.0, 1.0), 2, holds(0), holds(1));
  CHECK(std::abs(top - std::numbers::sqrt2) <= 1e-15);

  // m=3, rho=0.5: sqrt(2)*0.5/sqrt(1.5) = 1/sqrt(3)
  const double mid = dist_cat(params(1.0, 0.5), 3, holds(0), holds(2));
  CHECK(std::abs(mid - 0.57735026918962576) <= 1e-15);

  // rho=0 erases category differences entirely
  CHECK(dist_cat(params(1.0, 0.0), 4, holds(0), holds(3)) == 0.0);
}

TEST_CASE("dist_cat symmetry and omega scaling are exact") {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    const std::size_t m = 2 + rng.uniform_int(9);
    const double rho = rng.uniform();
    const double w = rng.uniform();
    const CatPoint a = rng.bernoulli(0.8) ? holds(rng.uniform_int(m)) : kInactiveCat;
    const CatPoint b = rng.bernoulli(0.8) ? holds(rng.uniform_int(m)) : kInactiveCat;
    const double ab = dist_cat(params(w, rho), m, a, b);
    CHECK(ab == dist_cat(params(w, rho), m, b, a));
    CHECK(ab >= 0.0);
    CHECK(ab == w * dist_cat(params(1.0, rho), m, a, b));
  }
}

TEST_CASE("dist_cat input validation") {
  CHECK(code_of([] {
          dist_cat(params(1.0, 1.0), 3, CatPoint{true, std::nullopt}, holds(1));
        }) == Errc::MissingValue);
  CHECK(code_of([] { dist_cat(params(1.0, 1.0), 3, holds(3), holds(1)); }) ==
        Errc::UnknownCategory);
  CHECK(code_of([] { dist_cat(params(1.0, -0.5), 3, holds(0), holds(1)); }) ==
        Errc::InvalidHyperparameter);
}

TEST_CASE("embed_cat") {
  SUBCASE("inactive is the zero vector") {
    const Eigen::VectorXd v = embed_cat(params(1.0, 0.5), 3, kInactiveCat);
    CHECK(v.size() == 3);
    CHECK(v.norm() == 0.0);
  }
  SUBCASE("rho=1 collapses to a scaled corner") {
    const Eigen::VectorXd v = embed_cat(params(1.0, 1.0), 2, holds(0));
    CHECK(std::abs(v[0] - 1.0) <= 1e-15);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("m=2, rho=0.5 matches the normalized corner vector") {
    const Eigen::VectorXd v = embed_cat(params(1.0, 0.5), 2, holds(0));
    CHECK(std::abs(v[0] - 0.89442719099991588) <= 1e-15);
    CHECK(std::abs(v[1] - 0.44721359549995794) <= 1e-15);
  }
  SUBCASE("norm equals omega when active") {
    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
      const std::size_t m = 2 + rng.uniform_int(9);
      const double w = rng.uniform();
      const Eigen::VectorXd v =
          embed_cat(params(w, rng.uniform()), m, holds(rng.uniform_int(m)));
      CHECK(std::abs(v.norm() - w) <= 1e-15);
    }
  }
}

TEST_CASE("embedding distance reproduces dist_cat") {
  Rng rng(41);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t m = 2 + rng.uniform_int(9);
    const DimMetricParams p = params(rng.uniform(), rng.uniform());
    const CatPoint a = rng.bernoulli(0.75) ? holds(rng.uniform_int(m)) : kInactiveCat;
    const CatPoint b = rng.bernoulli(0.75) ? holds(rng.uniform_int(m)) : kInactiveCat;
    const double direct = dist_cat(p, m, a, b);
    const double through = (embed_cat(p, m, a) - embed_cat(p, m, b)).norm();
    worst = std::max(worst, std::abs(direct - through));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("triangle inequality on dense grids") {
  SUBCASE("real, including the extreme rho=1 span") {
    for (const double rho : {0.3, 1.0}) {
      for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
          for (int k = 0; k <= 10; ++k) {
            const RealPoint x = active_at(i / 10.0);
            const RealPoint y = active_at(j / 10.0);
            const RealPoint z = active_at(k / 10.0);
            const DimMetricParams p = params(1.0, rho);
            const double violation = dist_real(p, kUnit, x, y) -
                                     dist_real(p, kUnit, x, z) -
                                     dist_real(p, kUnit, y, z);
            CHECK(violation <= 1e-12);
          }
        }
      }
    }
  }
  SUBCASE("mixed activity never violates") {
    const DimMetricParams p = params(0.8, 0.9);
    const double d_xy = dist_real(p, kUnit, active_at(0.1), active_at(0.9));
    const double d_xz = dist_real(p, kUnit, active_at(0.1), kInactiveReal);
    const double d_yz = dist_real(p, kUnit, active_at(0.9), kInactiveReal);
    CHECK(d_xy <= d_xz + d_yz + 1e-12);
  }
}

TEST_CASE("omega is the gamma product over the ancestor closure") {
  SpaceDescription desc;
  Dimension a;
  a.id = "A";
  a.domain = Categorical{{"on", "off"}};
  Dimension b;
  b.id = "B";
  b.domain = Categorical{{"on", "off"}};
  Dimension c;
  c.id = "C";
  c.domain = RealBounded{0.0, 1.0};
  desc.dimensions = {a, b, c};
  desc.conditions.push_back({"B", "A", {"on"}});
  desc.conditions.push_back({"C", "B", {"on"}});
  const SpacePtr space = ParamSpace::validate(desc);

  GammaMap gammas{{"A", 0.5}, {"B", 0.8}, {"C", 0.25}};
  CHECK(omega(*space, gammas, "A") == 0.5);
  CHECK(omega(*space, gammas, "B") == 0.4);
  CHECK(omega(*space, gammas, "C") == 0.1);

  GammaMap ones{{"A", 1.0}, {"B", 1.0}, {"C", 1.0}};
  CHECK(omega(*space, ones, "C") == 1.0);

  GammaMap missing{{"A", 0.5}};
  CHECK(code_of([&] { omega(*space, missing, "B"); }) == Errc::MissingGamma);
  GammaMap out_of_range{{"A", 1.5}, {"B", 0.8}, {"C", 0.25}};
  CHECK(code_of([&] { omega(*space, out_of_range, "B"); }) == Errc::GammaOutOfRange);
}

TEST_CASE("rho_star_squared_norm") {
  SUBCASE("m=2 reference value") {
    CHECK(std::abs(rho_star_squared_norm(2) - 0.75096162360162567) <= 1e-15);
  }
  SUBCASE("solves sqrt(2)rho = 1+(m-1)(1-rho)^2") {
    for (std::size_t m = 2; m <= 20; ++m) {
      const double rho = rho_star_squared_norm(m);
      const double md = static_cast<double>(m);
      const double residual =
          std::numbers::sqrt2 * rho - (1.0 + (md - 1.0) * (1.0 - rho) * (1.0 - rho));
      CHECK(std::abs(residual) <= 1e-10);
      CHECK(rho > 0.0);
      CHECK(rho < 1.0);
    }
  }
  SUBCASE("strictly increasing in the category count") {
    double previous = rho_star_squared_norm(2);
    for (std::size_t m = 3; m <= 50; ++m) {
      const double current = rho_star_squared_norm(m);
      CHECK(current > previous);
      previous = current;
    }
  }
  SUBCASE("rejects m < 2") {
    CHECK(code_of([] { rho_star_squared_norm(1); }) == Errc::InvalidCategoryCount);
    CHECK(code_of([] { rho_star_squared_norm(0); }) == Errc::InvalidCategoryCount);
  }
}

TEST_CASE("rho_star_crossover") {
  SUBCASE("m=2 is sqrt(3)-1") {
    CHECK(std::abs(rho_star_crossover(2) - (std::sqrt(3.0) - 1.0)) <= 1e-15);
  }
  SUBCASE("m=3 is 3/4, the degenerate linear case") {
    CHECK(std::abs(rho_star_crossover(3) - 0.75) <= 1e-15);
  }
  SUBCASE("differing categories sit exactly at the activity-flip distance") {
    for (std::size_t m = 2; m <= 20; ++m) {
      const double rho = rho_star_crossover(m);
      const double d = dist_cat(params(1.0, rho), m, holds(0), holds(1));
      CHECK(std::abs(d - 1.0) <= 1e-12);
    }
  }
  SUBCASE("strictly increasing in the category count") {
    double previous = rho_star_crossover(2);
    for (std::size_t m = 3; m <= 50; ++m) {
      const double current = rho_star_crossover(m);
      CHECK(current > previous);
      previous = current;
    }
  }
  SUBCASE("sits below the squared-norm balance point") {
    for (std::size_t m = 2; m <= 20; ++m) {
      CHECK(rho_star_crossover(m) < rho_star_squared_norm(m));
    }
  }
  SUBCASE("rejects m < 2") {
    CHECK(code_of([] { rho_star_crossover(1); }) == Errc::InvalidCategoryCount);
  }
}
