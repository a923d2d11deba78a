#include <doctest.h>

#include <cmath>
#include <random>

#include "floq/defect.hpp"
#include "floq/verify.hpp"

using namespace floq;

namespace {

constexpr double k0 = 1.8417976682289354;

dispersion_point golden_at(double k) {
  return dispersion(golden_crystal(), k, 0.0, polarization::e_par);
}

}  // namespace

TEST_CASE("defect coefficients of the golden structure at the mode") {
  const auto dp = golden_at(k0);
  CHECK(std::abs(dp.coeffs.a0 - cplx(-1.1933653600773404)) < 1e-9);
  CHECK(std::abs(dp.coeffs.b0 - cplx(-0.9053043362773667)) < 1e-9);
  CHECK(std::abs(dp.coeffs.c0 - cplx(1.1046009169822606)) < 1e-9);
  CHECK(std::abs(dp.coeffs.d0) < 1e-9);  // a mode is exactly a zero of d0
  CHECK(std::abs(dp.d0 - dp.coeffs.d0) == 0.0);
}

TEST_CASE("coefficient matrix inherits det T0 = 1") {
  for (double k : {1.75, k0, 2.3}) {
    const auto c = golden_at(k).coeffs;
    CHECK(std::abs(c.a0 * c.d0 - c.b0 * c.c0 - 1.0) < 1e-10);
  }
}

TEST_CASE("d0 is real inside the gap") {
  for (double k : {1.7, 1.9, 2.2, 2.4}) {
    const auto dp = golden_at(k);
    CHECK(std::abs(dp.d0.imag()) < 1e-10 * std::max(1.0, std::abs(dp.d0)));
  }
}

TEST_CASE("cross-identity between the two off-diagonal determinants") {
  for (double k : {1.7, k0, 2.35}) {
    const auto dp = golden_at(k);
    const cplx cross = det2(dp.T0 * dp.basis.w, dp.basis.v);
    CHECK(std::abs(cross + dp.coeffs.d0) < 1e-10);
  }
}

TEST_CASE("coefficients transform correctly under the eigenbasis gauge") {
  // (v, w) -> (s v, w / s) leaves a0 and d0 alone, scales b0 by s^2 and
  // c0 by 1/s^2, so b0 c0 and a0 d0 stay put
  std::mt19937_64 rng(0xbead5ca1eULL);
  const auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  const auto dp = golden_at(2.1);
  for (int trial = 0; trial < 12; ++trial) {
    const cplx s = std::polar(std::exp(2.0 * u01() - 1.0), 6.283185307179586 * u01());
    eigen_basis scaled = dp.basis;
    scaled.v = {s * scaled.v.x, s * scaled.v.y};
    scaled.w = {scaled.w.x / s, scaled.w.y / s};
    const auto c2 = to_floquet_basis(dp.T0, scaled);
    const auto& c1 = dp.coeffs;
    CHECK(std::abs(c2.a0 - c1.a0) < 1e-12 * std::max(1.0, std::abs(c1.a0)));
    CHECK(std::abs(c2.d0 - c1.d0) < 1e-12);
    CHECK(std::abs(c2.b0 - s * s * c1.b0) < 1e-12 * std::max(1.0, std::abs(c1.b0)));
    CHECK(std::abs(c2.c0 - c1.c0 / (s * s)) < 1e-12 * std::max(1.0, std::abs(c1.c0)));
    CHECK(std::abs(c2.b0 * c2.c0 - c1.b0 * c1.c0) < 1e-12);
    CHECK(std::abs(c2.a0 * c2.d0 - c1.a0 * c1.d0) < 1e-12);
  }
}

TEST_CASE("d0 changes sign across the golden mode") {
  const double d_lo = golden_at(k0 - 0.05).d0.real();
  const double d_hi = golden_at(k0 + 0.05).d0.real();
  CHECK(d_lo * d_hi < 0.0);
}

TEST_CASE("floquet-basis round trip recovers the defect matrix") {
  const auto dp = golden_at(2.0);
  const mat2 back = from_floquet_basis(dp.coeffs, dp.basis);
  const double scale = std::max(1.0, norm_max(dp.T0));
  CHECK(std::abs(back.a11 - dp.T0.a11) < 1e-12 * scale);
  CHECK(std::abs(back.a12 - dp.T0.a12) < 1e-12 * scale);
  CHECK(std::abs(back.a21 - dp.T0.a21) < 1e-12 * scale);
  CHECK(std::abs(back.a22 - dp.T0.a22) < 1e-12 * scale);
}

TEST_CASE("dispersion refuses points outside a gap") {
  try {
    golden_at(1.0);
    FAIL("expected a gap-domain error");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_in_gap);
  }
}

TEST_CASE("d0 slope at the mode matches a finite difference of the anchor") {
  const double h = 1e-6;
  const double slope =
      (golden_at(k0 + h).d0.real() - golden_at(k0 - h).d0.real()) / (2.0 * h);
  CHECK(slope == doctest::Approx(-5.351435228659329).epsilon(1e-5));
}

TEST_CASE("find_defect_modes locates the golden mode") {
  const auto modes = find_defect_modes(golden_crystal(), polarization::e_par,
                                       incidence::at_theta(0.0), 0.05, 3.5);
  REQUIRE(modes.size() == 1);
  const auto& m = modes.front();
  CHECK(m.k0 == doctest::Approx(k0).epsilon(1e-9));
  CHECK(m.alpha0 == 0.0);
  REQUIRE(m.theta0.has_value());
  CHECK(*m.theta0 == 0.0);
  CHECK(m.gap_index == 1);
  CHECK(m.residual < 1e-9);
}

TEST_CASE("a window without gaps reports no modes") {
  // [2.5, 3.8] sits inside the second band of the golden structure
  const auto modes = find_defect_modes(golden_crystal(), polarization::e_par,
                                       incidence::at_theta(0.0), 2.5, 3.8);
  CHECK(modes.empty());
}

TEST_CASE("fixed-alpha mode search keeps alpha and derives theta") {
  const auto modes = find_defect_modes(golden_crystal(), polarization::e_par,
                                       incidence::at_alpha(0.0), 0.05, 3.5);
  REQUIRE(modes.size() == 1);
  CHECK(modes.front().alpha0 == 0.0);
  REQUIRE(modes.front().theta0.has_value());
  CHECK(*modes.front().theta0 == doctest::Approx(0.0));
}
