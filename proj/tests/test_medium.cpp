#include <doctest.h>

#include <cmath>

#include "floq/medium.hpp"
#include "floq/verify.hpp"

using namespace floq;

namespace {

layer_profile bragg_cell() {
  layer_profile p;
  p.layers = {{0.5, 4.0}, {0.5, 1.0}};
  return p;
}

}  // namespace

TEST_CASE("profile width sums layer thicknesses") {
  CHECK(bragg_cell().width() == doctest::Approx(1.0).epsilon(1e-15));
  layer_profile empty;
  CHECK(empty.width() == 0.0);
}

TEST_CASE("derivative scaling q per polarization") {
  CHECK(q_of(polarization::e_par, 4.0) == 1.0);
  CHECK(q_of(polarization::h_par, 4.0) == 4.0);
}

TEST_CASE("incidence evaluates alpha at k") {
  const auto fixed = incidence::at_alpha(0.7);
  CHECK(fixed.alpha_at(2.0) == 0.7);
  CHECK(fixed.alpha_at(100.0) == 0.7);
  const auto tilted = incidence::at_theta(0.3);
  CHECK(tilted.alpha_at(2.0) == doctest::Approx(2.0 * std::sin(0.3)).epsilon(1e-15));
  CHECK(incidence::at_theta(0.0).alpha_at(5.0) == 0.0);
}

TEST_CASE("validate_crystal accepts the golden structure") {
  const auto spec = golden_crystal();
  CHECK(spec.cell.layers.size() == 2);
  REQUIRE(spec.defect.has_value());
  CHECK(spec.defect->width == doctest::Approx(0.8));
  CHECK(spec.require_defect().profile.layers.size() == 1);
}

TEST_CASE("validating an already validated spec changes nothing") {
  const auto once = golden_crystal();
  const auto twice = validate_crystal(once.cell, once.defect);
  REQUIRE(twice.cell.layers.size() == once.cell.layers.size());
  for (std::size_t i = 0; i < once.cell.layers.size(); ++i) {
    CHECK(twice.cell.layers[i].thickness == once.cell.layers[i].thickness);
    CHECK(twice.cell.layers[i].eps == once.cell.layers[i].eps);
  }
  REQUIRE(twice.defect.has_value());
  CHECK(twice.defect->width == once.defect->width);
  CHECK(twice.defect->profile.layers.size() == once.defect->profile.layers.size());
}

TEST_CASE("validate_crystal rejects a cell of the wrong period") {
  layer_profile p;
  p.layers = {{0.5, 4.0}, {0.6, 1.0}};
  CHECK_THROWS_AS(validate_crystal(p, std::nullopt), error);
  try {
    validate_crystal(p, std::nullopt);
  } catch (const error& e) {
    CHECK(e.code() == errc::non_unit_period);
  }
}

TEST_CASE("validate_crystal rejects degenerate layers") {
  layer_profile bad_thickness;
  bad_thickness.layers = {{-0.5, 4.0}, {1.5, 1.0}};
  try {
    validate_crystal(bad_thickness, std::nullopt);
    FAIL("expected a thickness error");
  } catch (const error& e) {
    CHECK(e.code() == errc::non_positive_thickness);
    CHECK(std::string(e.what()).find("thickness") != std::string::npos);
  }

  layer_profile bad_eps;
  bad_eps.layers = {{0.5, 0.0}, {0.5, 1.0}};
  try {
    validate_crystal(bad_eps, std::nullopt);
    FAIL("expected a permittivity error");
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_permittivity);
  }

  layer_profile empty;
  CHECK_THROWS_AS(validate_crystal(empty, std::nullopt), error);
}

TEST_CASE("validate_crystal checks the declared defect width") {
  defect_spec d;
  d.width = 0.8;
  d.profile.layers = {{0.5, 2.25}};  // sums to 0.5, not 0.8
  try {
    validate_crystal(bragg_cell(), d);
    FAIL("expected a width mismatch error");
  } catch (const error& e) {
    CHECK(e.code() == errc::config_error);
  }
}

TEST_CASE("require_defect throws without a defect") {
  const auto spec = validate_crystal(bragg_cell(), std::nullopt);
  try {
    spec.require_defect();
    FAIL("expected a config error");
  } catch (const error& e) {
    CHECK(e.code() == errc::config_error);
  }
}

TEST_CASE("epsilon_at is right-continuous with a closed right endpoint") {
  const auto p = bragg_cell();
  CHECK(epsilon_at(p, 0.0) == 4.0);
  CHECK(epsilon_at(p, 0.25) == 4.0);
  CHECK(epsilon_at(p, 0.5) == 1.0);  // jump point takes the right layer
  CHECK(epsilon_at(p, 0.75) == 1.0);
  CHECK(epsilon_at(p, 1.0) == 1.0);  // right endpoint belongs to the last layer
  CHECK_THROWS_AS(epsilon_at(p, -0.1), error);
  CHECK_THROWS_AS(epsilon_at(p, 1.1), error);
}
