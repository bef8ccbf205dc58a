#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "pqed/config.hpp"
#include "pqed/mode_profile.hpp"
#include "pqed/sweep.hpp"
#include "pqed/system.hpp"
#include "pqed/units.hpp"

using namespace pqed;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("built-in defaults carry the frozen values") {
  const NanocavityParams cav = default_cavity();
  CHECK(rel_err(cav.omega_cav, 338.9 * units::mev_per_thz) <= 1e-15);
  CHECK(rel_err(cav.kappa_out, 9.8 * units::mev_per_thz) <= 1e-15);
  CHECK(cav.mode_volume_re == 60.01);
  CHECK(cav.mode_volume_im == 0.0);
  CHECK(cav.epsilon == 6.25);
  CHECK(cav.sigma_ext_classical == 5000.0);

  const EmitterSpec em = default_emitter(cav);
  CHECK(em.omega_qe == cav.omega_cav);
  CHECK(em.kappa_vib == 25.0);
  CHECK(em.dipole == 10.1);
  CHECK(em.x == 0.0);
  CHECK(em.y == 0.0);
}

TEST_CASE("central coupling reproduces the SI evaluation") {
  const NanocavityParams cav = default_cavity();
  CHECK(rel_err(central_coupling(cav, 10.1), 38.66454389685773) <= 1e-9);

  // g scales linearly in the dipole and as 1/sqrt(permittivity * volume)
  const double g0 = central_coupling(cav, 10.1);
  CHECK(rel_err(central_coupling(cav, 20.2), 2.0 * g0) <= 1e-12);

  NanocavityParams big = cav;
  big.mode_volume_re *= 4.0;
  CHECK(rel_err(central_coupling(big, 10.1), 0.5 * g0) <= 1e-12);

  NanocavityParams dense_host = cav;
  dense_host.epsilon *= 4.0;
  CHECK(rel_err(central_coupling(dense_host, 10.1), 0.5 * g0) <= 1e-12);
}

TEST_CASE("analytic profile is a unit-peak Gaussian that hits the frozen 6 nm mark") {
  const ModeProfile p = ModeProfile::analytic(default_profile_width_nm);
  CHECK(p.at(0.0) == 1.0);
  CHECK(rel_err(p.at(3.0), std::exp(-9.0 / (2.0 * default_profile_width_nm * default_profile_width_nm))) <= 1e-14);
  CHECK(p.at_xy(3.0, 4.0) == p.at(5.0));

  double prev = p.at(0.0);
  for (int k = 1; k <= 20; ++k) {
    const double cur = p.at(0.5 * k);
    CHECK(cur < prev);
    prev = cur;
  }

  // the default width is pinned by g(6 nm) = 25 meV for the default emitter
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.x = 6.0;
  CHECK(rel_err(coupling_strength(cav, em, p), 25.0) <= 1e-9);
  em.x = 0.0;
  CHECK(rel_err(coupling_strength(cav, em, p), central_coupling(cav, em.dipole)) <= 1e-14);
}

TEST_CASE("tabulated profile loads, interpolates, and rejects bad files") {
  const std::string good = "profile_good.txt";
  write_text(good,
             "# mode-profile v1\n"
             "# radius_nm  u\n"
             "0 1\n"
             "2 0.9\n"
             "5 0.5\n"
             "10 0.1\n");
  const ModeProfile p = ModeProfile::load(good);
  CHECK(p.kind() == ProfileKind::tabulated);
  CHECK(p.max_radius() == 10.0);
  CHECK(p.at(0.0) == 1.0);
  CHECK(p.at(2.0) == 0.9);
  CHECK(rel_err(p.at(3.5), 0.7) <= 1e-14);
  CHECK_THROWS_AS((void)p.at(10.5), std::out_of_range);

  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.x = 10.0;
  CHECK(rel_err(coupling_strength(cav, em, p), 0.1 * central_coupling(cav, em.dipole)) <= 1e-12);

  CHECK_THROWS_AS((void)ModeProfile::load("does_not_exist.txt"), std::runtime_error);

  const std::string no_header = "profile_no_header.txt";
  write_text(no_header, "0 1\n1 0.5\n");
  CHECK_THROWS_AS((void)ModeProfile::load(no_header), std::runtime_error);

  const std::string not_increasing = "profile_not_increasing.txt";
  write_text(not_increasing, "# mode-profile v1\n0 1\n2 0.9\n2 0.8\n");
  CHECK_THROWS_AS((void)ModeProfile::load(not_increasing), std::runtime_error);

  const std::string one_column = "profile_one_column.txt";
  write_text(one_column, "# mode-profile v1\n0 1\n2\n");
  CHECK_THROWS_AS((void)ModeProfile::load(one_column), std::runtime_error);

  std::remove(good.c_str());
  std::remove(no_header.c_str());
  std::remove(not_increasing.c_str());
  std::remove(one_column.c_str());
}

TEST_CASE("in-coupling is linear in the classical cross-section") {
  NanocavityParams cav = default_cavity();
  CHECK(rel_err(in_coupling(cav), cav.kappa_out * units::c0_nm_fs * cav.sigma_ext_classical / 2.0) <= 1e-15);
  const double base = in_coupling(cav);
  cav.sigma_ext_classical *= 2.0;
  CHECK(rel_err(in_coupling(cav), 2.0 * base) <= 1e-15);
  cav.sigma_ext_classical = 0.0;
  CHECK(in_coupling(cav) == 0.0);
}

TEST_CASE("collective enhancement follows the placement geometry") {
  const NanocavityParams cav = default_cavity();
  const EmitterSpec em = default_emitter(cav);
  const ModeProfile p = ModeProfile::analytic(default_profile_width_nm);
  const double w2 = default_profile_width_nm * default_profile_width_nm;
  auto u = [&](double r) { return std::exp(-r * r / (2.0 * w2)); };

  const std::vector<EmitterSpec> pair{em, em};
  CHECK(rel_err(effective_coupling(pair, p), std::sqrt(2.0)) <= 1e-14);

  for (double x : {1.0, 3.0, 6.0}) {
    const auto placed = place_emitters(pair, Placement::symmetric_pair, x);
    CHECK(placed[0].x == x);
    CHECK(placed[1].x == -x);
    CHECK(rel_err(effective_coupling(placed, p), std::sqrt(2.0) * u(x)) <= 1e-12);
  }

  // moving one emitter of an asymmetric pair away approaches the single-emitter limit
  const auto asym10 = place_emitters(pair, Placement::asymmetric_pair, 10.0);
  const auto asym20 = place_emitters(pair, Placement::asymmetric_pair, 20.0);
  const double e10 = effective_coupling(asym10, p);
  const double e20 = effective_coupling(asym20, p);
  CHECK(rel_err(e10, std::sqrt(1.0 + u(10.0) * u(10.0))) <= 1e-12);
  CHECK(e10 < 1.05);
  CHECK(e20 < e10);
  CHECK(std::abs(e20 - 1.0) <= 1e-4);

  const std::vector<EmitterSpec> eight(8, em);
  const auto ring3 = place_emitters(eight, Placement::ring, 3.0);
  CHECK(rel_err(effective_coupling(ring3, p), std::sqrt(8.0) * u(3.0)) <= 1e-12);
  const auto ring0 = place_emitters(eight, Placement::ring, 0.0);
  CHECK(rel_err(effective_coupling(ring0, p), std::sqrt(8.0)) <= 1e-12);

  const std::vector<EmitterSpec> three(3, em);
  const auto enc = place_emitters(three, Placement::encircled, 4.0);
  CHECK(enc[0].x == 0.0);
  CHECK(rel_err(effective_coupling(enc, p), std::sqrt(1.0 + 2.0 * u(4.0) * u(4.0))) <= 1e-12);

  // order of the emitter list is irrelevant
  auto shuffled = ring3;
  std::swap(shuffled[0], shuffled[5]);
  std::swap(shuffled[2], shuffled[7]);
  CHECK(effective_coupling(shuffled, p) == effective_coupling(ring3, p));
}

TEST_CASE("drive calibration inverts the empty-cavity photon number") {
  const NanocavityParams cav = default_cavity();
  const double kin = in_coupling(cav);
  for (double delta : {0.0, 13.0, -27.5}) {
    for (double nph : {1e-6, 1e-3}) {
      const double alpha = drive_for_photon_number(cav, delta, nph);
      const double back = kin * alpha * alpha / (cav.kappa_out * cav.kappa_out + delta * delta);
      CHECK(rel_err(back, nph) <= 1e-12);
    }
  }
}

TEST_CASE("rotating-frame reference prefers drive, then first emitter, then cavity") {
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.omega_qe += 11.0;
  const std::vector<EmitterSpec> ems{em};

  CHECK(frame_reference(cav, ems, DriveSpec{cav.omega_cav - 5.0, 0.1}) == cav.omega_cav - 5.0);
  CHECK(frame_reference(cav, ems, std::nullopt) == em.omega_qe);
  CHECK(frame_reference(cav, {}, std::nullopt) == cav.omega_cav);
}
