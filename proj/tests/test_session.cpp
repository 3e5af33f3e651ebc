#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "seqkd/io.hpp"
#include "seqkd/session.hpp"

#include "oracles.hpp"

using namespace seqkd;

TEST_CASE("honest sessions deliver the full agreed key") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    SessionConfig cfg;
    cfg.n = 400;
    cfg.bits = 20;
    cfg.seed = seed;
    SessionOutput out = run_session(cfg);
    CHECK(!out.result.aborted_at);
    REQUIRE(out.result.alice_key.size() == 20);
    CHECK(out.result.alice_key == out.result.bob_key);
    CHECK(out.result.stats.contradictions == 0);
    CHECK(out.result.stats.verification_failures == 0);
    CHECK(out.result.stats.feedback_checks == 20 * 400);
  }
}

TEST_CASE("sessions are deterministic down to the transcript") {
  SessionConfig cfg;
  cfg.n = 200;
  cfg.bits = 10;
  cfg.seed = 77;
  cfg.eve = EveStrategy::random_da();
  SessionOutput a = run_session(cfg);
  SessionOutput b = run_session(cfg);
  CHECK(transcript_to_jsonl(a.transcript) == transcript_to_jsonl(b.transcript));
  CHECK(a.result.alice_key == b.result.alice_key);
  CHECK(a.result.aborted_at == b.result.aborted_at);
}

TEST_CASE("eve strategy names round trip") {
  for (const char* name : {"none", "random-da", "fixed:22.5", "density"}) {
    EveStrategy s = eve_strategy_from_name(name);
    CHECK(eve_strategy_from_name(eve_strategy_name(s)).kind == s.kind);
  }
  CHECK(eve_strategy_from_name("fixed:22.5").fixed_basis == Angle(22.5));
  CHECK_THROWS_AS(eve_strategy_from_name("bogus"), Error);
}

TEST_CASE("eve_tap basics") {
  Rng rng(5);
  PhotonState a = prepare_letter(StateLetter::A, VariantId::V1);

  // no strategy: the wire state is untouched
  auto [same, note0] = eve_tap(a, EveStrategy::none(), VariantId::V1, rng);
  CHECK(overlap_probability(same, a) == 1.0);

  // matched fixed basis on a single-path photon: resend is identical
  PhotonState v2a = prepare_letter(StateLetter::A, VariantId::V2);
  for (int i = 0; i < 50; ++i) {
    auto [resent, note] = eve_tap(v2a, EveStrategy::fixed_basis_at(Angle(0.0)), VariantId::V2, rng);
    CHECK(overlap_probability(resent, v2a) == 1.0);
    CHECK(note.clicked_primary);
  }

  // intercept-resend always collapses the superposition to a single path
  std::size_t disturbed = 0;
  const int taps = 4000;
  for (int i = 0; i < taps; ++i) {
    auto [resent, note] = eve_tap(a, EveStrategy::random_da(), VariantId::V1, rng);
    REQUIRE(resent.branches().size() == 1);
    if (overlap_probability(resent, a) < 1.0 - 1e-12) ++disturbed;
  }
  CHECK(disturbed == taps);  // a single-path state never matches the superposition
}

TEST_CASE("alice_verify_feedback") {
  Rng rng(6);
  std::vector<PhotonState> train;
  for (int i = 0; i < 200; ++i)
    train.push_back(prepare_letter(i % 2 ? StateLetter::B : StateLetter::A, VariantId::V1));

  VerifyResult undisturbed = alice_verify_feedback(train, train, rng);
  CHECK(undisturbed.pass);
  CHECK(undisturbed.failures == 0);

  VerifyResult empty = alice_verify_feedback({}, {}, rng);
  CHECK(empty.pass);

  std::vector<PhotonState> shorter(train.begin(), train.begin() + 100);
  CHECK_THROWS_AS(alice_verify_feedback(train, shorter, rng), Error);

  // orthogonal feedback fails every position; a tolerance admits that many
  std::vector<PhotonState> flipped;
  for (const auto& p : train) flipped.push_back(p.rotated("s", Angle(90.0)).rotated("r", Angle(90.0)));
  VerifyResult wrong = alice_verify_feedback(train, flipped, rng);
  CHECK(!wrong.pass);
  CHECK(wrong.failures > 150);  // overlap of each pair is 0 on one branch
  VerifyResult tolerant = alice_verify_feedback(train, flipped, rng, 200);
  CHECK(tolerant.pass);
}

TEST_CASE("per-photon disturbance matches the enumeration oracle") {
  const std::size_t photons = 200000;
  double rate = feedback_failure_experiment(VariantId::V1, EveStrategy::random_da(), photons, 11);
  double expected = oracle::intercept_resend_failure_rate();
  CHECK(std::abs(rate - expected) < oracle::sigma3(expected, photons));

  // V2 with the matched basis on the lucky alphabet is invisible
  double lucky = feedback_failure_experiment(VariantId::V2, EveStrategy::fixed_basis_at(Angle(0.0)),
                                             50000, 12, true,
                                             {StateLetter::A, StateLetter::B});
  CHECK(lucky == 0.0);

  // and measurably disturbing on the other alphabet
  double wrong = feedback_failure_experiment(VariantId::V2, EveStrategy::fixed_basis_at(Angle(0.0)),
                                             200000, 13, true,
                                             {StateLetter::C, StateLetter::D});
  double wrong_expected = 0.5 * (oracle::fixed_basis_failure_rate(45.0, 0.0) +
                                 oracle::fixed_basis_failure_rate(135.0, 0.0));
  CHECK(std::abs(wrong - wrong_expected) < oracle::sigma3(wrong_expected, 200000));
}

TEST_CASE("detection experiment: honest runs never abort, intercept-resend dies fast") {
  SessionConfig honest;
  honest.n = 400;
  honest.bits = 10;
  honest.seed = 3;
  DetectionSummary clean = detection_experiment(honest, 50);
  CHECK(clean.aborts == 0);
  CHECK(clean.abort_rate == 0.0);
  CHECK(clean.completed_bits == 500);

  SessionConfig tapped = honest;
  tapped.eve = EveStrategy::random_da();
  DetectionSummary noisy = detection_experiment(tapped, 200);
  CHECK(noisy.aborts == 200);
  CHECK(noisy.aborted_by_index_5 >= 198);  // per-bit escape prob ~ (1 - 0.36)^400

  // identical results regardless of the runner
  DetectionSummary serial = detection_experiment(tapped, 200, false);
  CHECK(serial.aborts == noisy.aborts);
  CHECK(serial.mean_abort_index == noisy.mean_abort_index);
}

TEST_CASE("eve learns nothing about V1 bits") {
  EveAccuracy acc =
      eve_accuracy_experiment(VariantId::V1, EveStrategy::random_da(), 4000, 200, 8);
  CHECK(acc.bits == 4000);
  CHECK(std::abs(acc.bit_accuracy - 0.5) < oracle::sigma3(0.5, 4000));
  CHECK(std::isnan(acc.alphabet_accuracy));

  EveGuess guess = eve_guess_bits({}, {}, VariantId::V1, EveStrategy::random_da());
  CHECK(guess.confidence == 0.5);
}

TEST_CASE("density discrimination angle for the unequal-density variant") {
  // the eigenbasis of rho0 - rho1 is {22.5, 112.5}; either axis works for the
  // likelihood guess, so only the axis direction mod 90 is pinned
  Angle theta = density_discrimination_angle(VariantId::V3);
  CHECK(std::fmod(theta.degrees(), 90.0) == doctest::Approx(22.5).epsilon(1e-9));
  // the equal-density variants give no preferred direction; the convention is 0
  CHECK(density_discrimination_angle(VariantId::V1).degrees() == doctest::Approx(0.0));
}

TEST_CASE("invalid configuration is rejected") {
  SessionConfig cfg;
  cfg.n = 0;
  CHECK_THROWS_AS(run_session(cfg), Error);
}
