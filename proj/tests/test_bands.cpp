#include <doctest.h>

#include <cmath>
#include <random>

#include "floq/bands.hpp"
#include "floq/verify.hpp"

using namespace floq;

namespace {

constexpr double k0 = 1.8417976682289354;
constexpr double gap1_lo = 1.6821373411358618, gap1_hi = 2.461918834681552;
constexpr double gap2_lo = 3.821266472498036, gap2_hi = 4.601047966043728;

mat2 golden_cell_at(double k) {
  return cell_monodromy(golden_crystal(), spectral_point::at(k, 0.0, polarization::e_par));
}

double resid(const vec2& a, const vec2& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

}  // namespace

TEST_CASE("classify separates band, gap, edge and complex traces") {
  CHECK(classify({3.0, 0.0, 0.0, 1.0 / 3.0}).cls == band_class::gap);
  CHECK(classify({-3.0, 0.0, 0.0, -1.0 / 3.0}).cls == band_class::gap);
  const double c = std::cos(0.8), s = std::sin(0.8);
  CHECK(classify({c, s, -s, c}).cls == band_class::band);
  CHECK(classify(mat2::identity()).cls == band_class::edge);
  CHECK(classify({1.0 + 5e-10, 1.0, 0.0, 1.0}).cls == band_class::edge);
  CHECK(classify({cplx(1.0, 0.5), 0.0, 0.0, 1.0}).cls == band_class::non_real_trace);
  CHECK(classify({3.0, 0.0, 0.0, 1.0 / 3.0}).discriminant ==
        doctest::Approx(std::pow(3.0 + 1.0 / 3.0, 2) / 4.0 - 1.0));
}

TEST_CASE("band class names") {
  CHECK(std::string(band_class_name(band_class::band)) == "Band");
  CHECK(std::string(band_class_name(band_class::gap)) == "Gap");
  CHECK(std::string(band_class_name(band_class::edge)) == "Edge");
}

TEST_CASE("classification is a similarity invariant") {
  std::mt19937_64 rng(0x5eed5eed5eedULL);
  const auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  const mat2 gap_T{3.0, 0.0, 0.0, 1.0 / 3.0};
  const double c = std::cos(0.8), s = std::sin(0.8);
  const mat2 band_T{c, s, -s, c};
  for (int trial = 0; trial < 8; ++trial) {
    // random unimodular P = [[a, b], [g, (1 + b g)/a]]
    const double a = 0.5 + u01(), b = 2.0 * u01() - 1.0, g = 2.0 * u01() - 1.0;
    const mat2 P{a, b, g, (1.0 + b * g) / a};
    const mat2 Pinv{P.a22, -P.a12, -P.a21, P.a11};
    for (const mat2* T : {&gap_T, &band_T}) {
      const mat2 sim = P * (*T) * Pinv;
      CHECK(classify(sim).cls == classify(*T).cls);
      CHECK(classify(sim).discriminant ==
            doctest::Approx(classify(*T).discriminant).epsilon(1e-9));
    }
  }
}

TEST_CASE("gap eigenbasis diagonalizes the golden cell at the defect mode") {
  const mat2 T = golden_cell_at(k0);
  const auto basis = eigenbasis(T, classify(T));
  CHECK(std::abs(basis.mu - cplx(-0.6145896343154686)) < 1e-9);
  CHECK(std::abs(basis.mu) < 1.0);  // the contracting branch

  const vec2 Tv = T * basis.v;
  CHECK(resid(Tv, {basis.mu * basis.v.x, basis.mu * basis.v.y}) < 1e-12);
  const vec2 Tw = T * basis.w;
  const cplx inv = 1.0 / basis.mu;
  CHECK(resid(Tw, {inv * basis.w.x, inv * basis.w.y}) < 1e-11);
  CHECK(std::abs(det2(basis.v, basis.w) - 1.0) < 1e-12);
}

TEST_CASE("eigenvector gauge is deterministic") {
  const mat2 T = golden_cell_at(k0);
  const auto basis = eigenbasis(T, classify(T));
  const cplx lead =
      std::abs(basis.v.x) >= std::abs(basis.v.y) ? basis.v.x : basis.v.y;
  CHECK(lead.imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lead.real() > 0.0);
}

TEST_CASE("gap eigenvectors of a real matrix come out real") {
  const mat2 T = golden_cell_at(k0);
  const auto basis = eigenbasis(T, classify(T));
  for (cplx e : {basis.v.x, basis.v.y, basis.w.x, basis.w.y})
    CHECK(std::abs(e.imag()) < 1e-12);
  CHECK(std::abs(basis.mu.imag()) < 1e-12);
}

TEST_CASE("band eigenbasis carries a unit-modulus multiplier") {
  const mat2 T = golden_cell_at(1.0);
  const auto cls = classify(T);
  REQUIRE(cls.cls == band_class::band);
  const auto basis = eigenbasis(T, cls);
  CHECK(std::abs(std::abs(basis.mu) - 1.0) < 1e-12);
  CHECK(basis.mu.imag() >= 0.0);
  const vec2 Tv = T * basis.v;
  CHECK(resid(Tv, {basis.mu * basis.v.x, basis.mu * basis.v.y}) < 1e-12);
  CHECK(std::abs(det2(basis.v, basis.w) - 1.0) < 1e-12);
}

TEST_CASE("eigenbasis refuses band edges") {
  CHECK_THROWS_AS(eigenbasis(mat2::identity(), classify(mat2::identity())), error);
}

TEST_CASE("basis_from_mu reproduces the gap construction") {
  const mat2 T = golden_cell_at(2.0);
  const auto cls = classify(T);
  REQUIRE(cls.cls == band_class::gap);
  const auto ref = eigenbasis(T, cls);
  const auto rebuilt = basis_from_mu(T, ref.mu);
  CHECK(resid(ref.v, rebuilt.v) < 1e-13);
  CHECK(resid(ref.w, rebuilt.w) < 1e-13);
}

TEST_CASE("band_map runs k-major with alpha inner and is jobs-invariant") {
  const auto spec = golden_crystal();
  const axis ka{0.5, 3.0, 7};
  const axis aa{0.0, 1.0, 5};
  const auto rows = band_map(spec, polarization::e_par, ka, aa, 1);
  REQUIRE(rows.size() == 35);
  CHECK(rows[0].k == 0.5);
  CHECK(rows[0].alpha == 0.0);
  CHECK(rows[4].k == 0.5);
  CHECK(rows[4].alpha == 1.0);
  CHECK(rows[5].k == doctest::Approx(0.5 + 2.5 / 6.0));
  CHECK(rows.back().k == 3.0);

  const auto rows4 = band_map(spec, polarization::e_par, ka, aa, 4);
  REQUIRE(rows4.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].trace == rows4[i].trace);  // identical, not merely close
    CHECK(rows[i].cls == rows4[i].cls);
  }
}

TEST_CASE("band_map_theta classifies the golden gap window") {
  const auto spec = golden_crystal();
  const auto rows = band_map_theta(spec, polarization::e_par, {1.9, 2.1, 3}, 0.0, 1);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.cls == band_class::gap);
    CHECK(r.alpha == 0.0);
  }
}

TEST_CASE("find_gaps pins both golden gaps") {
  const auto spec = golden_crystal();
  const auto gaps =
      find_gaps(spec, polarization::e_par, incidence::at_theta(0.0), 0.05, 5.0);
  REQUIRE(gaps.size() >= 2);
  CHECK(gaps[0].index == 1);
  CHECK(gaps[0].k_lo == doctest::Approx(gap1_lo).epsilon(1e-9));
  CHECK(gaps[0].k_hi == doctest::Approx(gap1_hi).epsilon(1e-9));
  CHECK(gaps[1].index == 2);
  CHECK(gaps[1].k_lo == doctest::Approx(gap2_lo).epsilon(1e-9));
  CHECK(gaps[1].k_hi == doctest::Approx(gap2_hi).epsilon(1e-9));
}

TEST_CASE("vacuum has no gaps") {
  layer_profile cell;
  cell.layers = {{1.0, 1.0}};
  const auto spec = validate_crystal(cell, std::nullopt);
  CHECK(find_gaps(spec, polarization::e_par, incidence::at_theta(0.0), 0.1, 3.0).empty());
}

TEST_CASE("find_gaps validates its window") {
  const auto spec = golden_crystal();
  CHECK_THROWS_AS(find_gaps(spec, polarization::e_par, incidence::at_theta(0.0), -1.0, 3.0),
                  error);
  CHECK_THROWS_AS(find_gaps(spec, polarization::e_par, incidence::at_theta(0.0), 3.0, 1.0),
                  error);
}
