#include <doctest.h>

#include <cmath>

#include "nreit/qubit.hpp"

using namespace nreit;

namespace {

const AtomSpec kAtom;
const TransitionTable kFw = make_table(kAtom, Direction::Forward);
const TransitionTable kBw = make_table(kAtom, Direction::Backward);
const CouplingParams kCoupling{2.5, 0.0};

}  // namespace

TEST_CASE("named states are physical and correctly oriented") {
  for (const auto& s : {state_h(), state_v(), state_d(), state_r()}) CHECK(s.is_physical());
  CHECK(state_h().rho(0, 0).real() == doctest::Approx(1.0));
  CHECK(state_v().rho(1, 1).real() == doctest::Approx(1.0));
  // |R> = (|H> - i|V>)/sqrt(2): rho_HV = i/2
  CHECK(state_r().rho(0, 1).imag() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fidelity: identity, orthogonality, |<H|D>|^2") {
  CHECK(fidelity(state_d(), state_d()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(state_h(), state_v()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(state_h(), state_d()) == doctest::Approx(0.5).epsilon(1e-12));
  QubitState mixed;  // I/2
  CHECK(fidelity(mixed, state_h()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fidelity rejects unphysical inputs") {
  QubitState bad;
  bad.rho(0, 0) = 1.4;
  bad.rho(1, 1) = -0.4;
  CHECK_THROWS_AS(fidelity(bad, state_h()), std::domain_error);
}

TEST_CASE("identity channel: chi = 0, phase 0") {
  auto out = nraq_apply_amplitude(state_d(), complexd(1.0, 0.0));
  CHECK(out.transmission == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(out.rho_out, state_d()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward channel preserves every pure state under common-mode loss") {
  const double ggs = calibrate_gamma_gs(0.929, 19.0, 2.5, kFw);
  MediumParams medium{19.0, 0.5, ggs, 1.0};
  for (double theta : {0.0, 0.7, M_PI / 2, 2.4, M_PI}) {
    for (double phi : {0.0, 1.0, -M_PI / 2}) {
      QubitState in = make_pure(theta, phi);
      auto out = nraq_apply(in, Direction::Forward, kCoupling, medium, kFw);
      CHECK(fidelity(out.rho_out, in) >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("forward |D> at calibrated od=19 keeps fidelity >= 0.99") {
  const double ggs = calibrate_gamma_gs(0.929, 19.0, 2.5, kFw);
  MediumParams medium{19.0, 0.5, ggs, 1.0};
  auto out = nraq_apply(state_d(), Direction::Forward, kCoupling, medium, kFw);
  CHECK(fidelity(out.rho_out, state_d()) >= 0.99);
  CHECK(out.transmission == doctest::Approx(0.929).epsilon(1e-6));
}

TEST_CASE("backward channel transmission is state independent and <= 0.04") {
  const double ggs = calibrate_gamma_gs(0.929, 19.0, 2.5, kFw);
  MediumParams medium{19.0, 0.5, ggs, 1.0};
  double t_first = -1.0;
  for (const auto& in : {state_h(), state_v(), state_d(), state_r(), make_pure(1.1, 0.3)}) {
    auto out = nraq_apply(in, Direction::Backward, kCoupling, medium, kBw);
    CHECK(out.transmission <= 0.04);
    if (t_first < 0.0) t_first = out.transmission;
    CHECK(out.transmission == doctest::Approx(t_first).epsilon(1e-10));
  }
}

TEST_CASE("channel is linear at the unnormalized level") {
  const complexd t(0.6, 0.2);
  const double alpha = 0.3;
  QubitState a = state_h(), b = state_d();
  QubitState mix;
  mix.rho = alpha * a.rho + (1.0 - alpha) * b.rho;
  auto out_mix = nraq_apply_amplitude(mix, t, 0.4);
  auto out_a = nraq_apply_amplitude(a, t, 0.4);
  auto out_b = nraq_apply_amplitude(b, t, 0.4);
  Eigen::Matrix2cd lhs = out_mix.transmission * out_mix.rho_out.rho;
  Eigen::Matrix2cd rhs = alpha * out_a.transmission * out_a.rho_out.rho +
                         (1.0 - alpha) * out_b.transmission * out_b.rho_out.rho;
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("relative rail phase rotates |D> but leaves |H> alone") {
  auto d_out = nraq_apply_amplitude(state_d(), complexd(0.9, 0.0), 0.5);
  CHECK(fidelity(d_out.rho_out, state_d()) < 1.0 - 1e-4);
  auto h_out = nraq_apply_amplitude(state_h(), complexd(0.9, 0.0), 0.5);
  CHECK(fidelity(h_out.rho_out, state_h()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("total absorption reports isolated") {
  auto out = nraq_apply_amplitude(state_d(), complexd(0.0, 0.0));
  CHECK(out.isolated);
  CHECK(out.transmission == doctest::Approx(0.0));
}

TEST_CASE("transmission_rate examples") {
  CHECK(transmission_rate(929.0, 1000.0).value == doctest::Approx(0.929));
  CHECK(transmission_rate(0.0, 500.0).value == 0.0);
  CHECK(transmission_rate(500.0, 500.0).value == 1.0);
  auto clipped = transmission_rate(1010.0, 1000.0);
  CHECK(clipped.clipped);
  CHECK(clipped.value == 1.0);
  CHECK_THROWS_AS(transmission_rate(1.0, 0.0), std::domain_error);
}
