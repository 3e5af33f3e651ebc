#include "seqkd/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqkd/parallel.hpp"

namespace seqkd {
namespace {

// Which-path collapse followed by a theta vs theta+90 polarization
// measurement on the surviving path; returns the projected single-path state.
std::pair<PhotonState, bool> project_in_basis(const PhotonState& photon, Angle theta, Rng& rng) {
  const auto& branches = photon.branches();
  std::size_t chosen = 0;
  if (branches.size() > 1) {
    double total = 0.0;
    for (const auto& b : branches) total += std::norm(b.amplitude);
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      acc += std::norm(branches[i].amplitude);
      if (u < acc) {
        chosen = i;
        break;
      }
      chosen = i;
    }
  }
  const Branch& b = branches[chosen];
  bool clicked = rng.bernoulli(cos2_between(b.polarization, theta));
  PhotonState resent =
      PhotonState::make({{b.path, clicked ? theta : theta.orthogonal(), 1.0}});
  return {resent, clicked};
}

// Average outcome probability over one bit's two letters for a DA setting;
// this is all Eve knows without the shared pair.
double class_probability(int bit, DASetting setting, const Outcome& outcome) {
  StateLetter first = bit ? StateLetter::C : StateLetter::A;
  StateLetter second = bit ? StateLetter::D : StateLetter::B;
  AnalyzerBank bank = analyzer_bank(setting);
  double p = 0.0;
  p += outcome_distribution(prepare_letter(first, VariantId::V1), bank).prob(outcome);
  p += outcome_distribution(prepare_letter(second, VariantId::V1), bank).prob(outcome);
  return 0.5 * p;
}

int alphabet_of_basis(Angle basis) {
  // {0, 90} is the S0 alphabet's basis, {45, 135} the S1 alphabet's
  return cos2_between(basis, Angle(0.0)) == 0.5 ? 1 : 0;
}

struct BitTrialResult {
  bool guessed_bit_correct = false;
  bool guessed_alphabet_correct = false;
  bool has_alphabet = false;
};

}  // namespace

std::string eve_strategy_name(const EveStrategy& s) {
  switch (s.kind) {
    case EveStrategy::Kind::None: return "none";
    case EveStrategy::Kind::InterceptResendRandomDA: return "random-da";
    case EveStrategy::Kind::InterceptResendFixedBasis:
      return "fixed:" + std::to_string(s.fixed_basis.degrees());
    case EveStrategy::Kind::DistinguishDensity: return "density";
  }
  return "?";
}

EveStrategy eve_strategy_from_name(const std::string& name) {
  if (name.empty() || name == "none") return EveStrategy::none();
  if (name == "random-da") return EveStrategy::random_da();
  if (name == "density") return EveStrategy::distinguish_density();
  if (name.rfind("fixed:", 0) == 0)
    return EveStrategy::fixed_basis_at(Angle(std::stod(name.substr(6))));
  throw Error(Errc::ConfigInvalid, "unknown eve strategy '" + name + "'");
}

std::pair<PhotonState, EveNote> eve_tap(const PhotonState& photon, const EveStrategy& strategy,
                                        VariantId variant, Rng& rng, int leg,
                                        std::size_t position) {
  EveNote note;
  note.leg = leg;
  note.position = position;
  switch (strategy.kind) {
    case EveStrategy::Kind::None:
      return {photon, note};
    case EveStrategy::Kind::InterceptResendRandomDA: {
      note.setting = rng.coin() ? DASetting::DA1 : DASetting::DA0;
      AnalyzerBank bank = analyzer_bank(note.setting);
      note.outcome = sample_outcome(photon, bank, rng);
      if (note.outcome.clicked) {
        Angle orientation = *bank.find(note.outcome.path);
        return {PhotonState::make({{note.outcome.path, orientation, 1.0}}), note};
      }
      // no click: resend on a random analyzed path, orthogonal to her analyzer
      const auto& entries = bank.entries();
      const auto& [path, orientation] = entries[rng.below(entries.size())];
      return {PhotonState::make({{path, orientation.orthogonal(), 1.0}}), note};
    }
    case EveStrategy::Kind::InterceptResendFixedBasis: {
      auto [resent, clicked] = project_in_basis(photon, strategy.fixed_basis, rng);
      note.clicked_primary = clicked;
      return {resent, note};
    }
    case EveStrategy::Kind::DistinguishDensity: {
      auto [resent, clicked] = project_in_basis(photon, density_discrimination_angle(variant), rng);
      note.clicked_primary = clicked;
      return {resent, note};
    }
  }
  return {photon, note};
}

VerifyResult alice_verify_feedback(const std::vector<PhotonState>& expected,
                                   const std::vector<PhotonState>& received, Rng& rng,
                                   std::size_t tolerance) {
  if (expected.size() != received.size())
    throw Error(Errc::LengthMismatch, "feedback length differs from expected sequence");
  std::size_t failures = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    double p = overlap_probability(received[i], expected[i]);
    if (!(rng.uniform() < p)) ++failures;
  }
  return VerifyResult{failures <= tolerance, failures};
}

Angle density_discrimination_angle(VariantId variant) {
  BasisSpec basis({{"s", Angle(0.0)}, {"s", Angle(90.0)}});
  std::vector<std::pair<PhotonState, double>> e0, e1;
  e0.emplace_back(prepare_letter(StateLetter::A, variant == VariantId::V1 ? VariantId::V2 : variant), 0.5);
  e0.emplace_back(prepare_letter(StateLetter::B, variant == VariantId::V1 ? VariantId::V2 : variant), 0.5);
  e1.emplace_back(prepare_letter(StateLetter::C, variant == VariantId::V1 ? VariantId::V2 : variant), 0.5);
  e1.emplace_back(prepare_letter(StateLetter::D, variant == VariantId::V1 ? VariantId::V2 : variant), 0.5);
  DensityMatrix r0 = density_of(e0, basis, false);
  DensityMatrix r1 = density_of(e1, basis, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r0.mat - r1.mat);
  Eigen::Index top;
  if (solver.eigenvalues().cwiseAbs().maxCoeff(&top) < 1e-12) return Angle(0.0);
  Eigen::VectorXcd v = solver.eigenvectors().col(top);
  double deg = std::atan2(v[1].real(), v[0].real()) * 180.0 / 3.14159265358979323846;
  return Angle(deg);
}

EveGuess eve_guess_bits(const std::vector<EveNote>& leg1, const std::vector<EveNote>& leg2,
                        VariantId variant, const EveStrategy& strategy) {
  EveGuess guess{0, 0.5, std::nullopt};
  switch (strategy.kind) {
    case EveStrategy::Kind::None:
      return guess;
    case EveStrategy::Kind::InterceptResendRandomDA: {
      double ll0 = 0.0, ll1 = 0.0;
      for (const auto& note : leg1) {
        ll0 += std::log(class_probability(0, note.setting, note.outcome));
        ll1 += std::log(class_probability(1, note.setting, note.outcome));
      }
      guess.bit = ll1 > ll0 ? 1 : 0;
      double hi = std::max(ll0, ll1);
      guess.confidence = std::exp((guess.bit ? ll1 : ll0) - hi) /
                         (std::exp(ll0 - hi) + std::exp(ll1 - hi));
      return guess;
    }
    case EveStrategy::Kind::InterceptResendFixedBasis: {
      // two passes of the same sequence agree everywhere iff her basis is the
      // sequence's preparation basis; that identifies the alphabet, not the bit
      if (leg2.empty()) return guess;
      bool all_agree = true;
      for (const auto& n2 : leg2) {
        for (const auto& n1 : leg1) {
          if (n1.position != n2.position) continue;
          if (n1.clicked_primary != n2.clicked_primary) all_agree = false;
          break;
        }
      }
      int basis_alphabet = alphabet_of_basis(strategy.fixed_basis);
      guess.alphabet = all_agree ? basis_alphabet : 1 - basis_alphabet;
      return guess;
    }
    case EveStrategy::Kind::DistinguishDensity: {
      Angle theta = density_discrimination_angle(variant);
      double ll0 = 0.0, ll1 = 0.0;
      for (const auto& note : leg1) {
        double p0 = 0.5 * (cos2_between(letter_polarization(StateLetter::A, variant), theta) +
                           cos2_between(letter_polarization(StateLetter::B, variant), theta));
        double p1 = 0.5 * (cos2_between(letter_polarization(StateLetter::C, variant), theta) +
                           cos2_between(letter_polarization(StateLetter::D, variant), theta));
        ll0 += std::log(note.clicked_primary ? p0 : 1.0 - p0);
        ll1 += std::log(note.clicked_primary ? p1 : 1.0 - p1);
      }
      guess.bit = ll1 > ll0 ? 1 : 0;
      double hi = std::max(ll0, ll1);
      guess.confidence = std::exp((guess.bit ? ll1 : ll0) - hi) /
                         (std::exp(ll0 - hi) + std::exp(ll1 - hi));
      return guess;
    }
  }
  return guess;
}

SessionOutput run_session(const SessionConfig& cfg) {
  if (cfg.n < 1 || cfg.bits < 1)
    throw Error(Errc::ConfigInvalid, "session needs n >= 1 and bits >= 1");
  Rng rng(cfg.seed);
  SessionOutput out;
  auto& result = out.result;
  auto& transcript = out.transcript;

  OperatingSequencePair pair = generate_pair(cfg.n, rng);

  for (std::size_t idx = 0; idx < cfg.bits; ++idx) {
    int bit = rng.coin() ? 1 : 0;
    transcript.push_back({TranscriptEvent::Type::BitSent, idx, bit});

    std::vector<PhotonState> photons = encode_bit(bit, pair, cfg.variant, &rng);
    if (cfg.eve.active() && cfg.eve_leg1) {
      for (std::size_t i = 0; i < photons.size(); ++i)
        photons[i] = eve_tap(photons[i], cfg.eve, cfg.variant, rng, 1, i).first;
      TranscriptEvent ev{TranscriptEvent::Type::EveTapped, idx};
      ev.leg = 1;
      transcript.push_back(ev);
    }

    BitDecision decision;
    if (cfg.variant == VariantId::V1) {
      auto records = measure_sequence(photons, MeasurePolicy::random_settings(), rng);
      result.stats.records += records.size();
      for (const auto& r : reduce(records)) {
        if (r.setting == DASetting::DA0)
          ++result.stats.beta_da0;
        else
          ++result.stats.beta_da1;
      }
      decision = recover_bit(records, pair);
      if (decision == BitDecision::Contradiction) ++result.stats.contradictions;
    } else if (cfg.variant == VariantId::V0) {
      decision = v0_decide(photons, rng);
    } else {
      decision = recover_predetermined(photons, pair, cfg.variant, rng);
    }
    TranscriptEvent rec{TranscriptEvent::Type::BitRecovered, idx};
    rec.decision = decision;
    transcript.push_back(rec);

    if (decision != BitDecision::Zero && decision != BitDecision::One) {
      result.aborted_at = idx;
      result.abort_reason = decision_name(decision);
      TranscriptEvent ab{TranscriptEvent::Type::Aborted, idx};
      ab.reason = result.abort_reason;
      transcript.push_back(ab);
      return out;
    }
    int bob_bit = decision == BitDecision::One ? 1 : 0;

    // Bob cannot return the measured photons; he re-prepares the recovered
    // bit's sequence with canonical phases so Alice knows the exact state.
    int fb_bit = cfg.feedback_other ? 1 - bob_bit : bob_bit;
    std::vector<PhotonState> feedback = encode_bit(fb_bit, pair, cfg.variant, nullptr);
    transcript.push_back({TranscriptEvent::Type::FeedbackSent, idx});
    if (cfg.eve.active() && cfg.eve_leg2) {
      for (std::size_t i = 0; i < feedback.size(); ++i)
        feedback[i] = eve_tap(feedback[i], cfg.eve, cfg.variant, rng, 2, i).first;
      TranscriptEvent ev{TranscriptEvent::Type::EveTapped, idx};
      ev.leg = 2;
      transcript.push_back(ev);
    }

    int expected_bit = cfg.feedback_other ? 1 - bit : bit;
    std::vector<PhotonState> expected = encode_bit(expected_bit, pair, cfg.variant, nullptr);
    VerifyResult vr = alice_verify_feedback(expected, feedback, rng, cfg.failure_tolerance);
    result.stats.verification_failures += vr.failures;
    result.stats.feedback_checks += expected.size();
    TranscriptEvent fv{TranscriptEvent::Type::FeedbackVerified, idx};
    fv.pass = vr.pass;
    transcript.push_back(fv);

    if (!vr.pass) {
      result.aborted_at = idx;
      result.abort_reason = "feedback";
      TranscriptEvent ab{TranscriptEvent::Type::Aborted, idx};
      ab.reason = result.abort_reason;
      transcript.push_back(ab);
      return out;
    }
    result.alice_key.push_back(bit);
    result.bob_key.push_back(bob_bit);
  }
  return out;
}

DetectionSummary detection_experiment(const SessionConfig& base, std::size_t trials,
                                      bool parallel) {
  if (trials < 1) throw Error(Errc::ConfigInvalid, "detection experiment needs trials >= 1");
  std::vector<SessionResult> results(trials);
  run_indexed(trials, parallel, [&](std::size_t i) {
    SessionConfig cfg = base;
    cfg.seed = Rng::mix(base.seed, i);
    results[i] = run_session(cfg).result;
  });

  DetectionSummary summary;
  summary.trials = trials;
  double abort_index_sum = 0.0;
  std::size_t failures = 0, checks = 0;
  for (const auto& r : results) {
    summary.completed_bits += r.alice_key.size();
    failures += r.stats.verification_failures;
    checks += r.stats.feedback_checks;
    if (r.aborted_at) {
      ++summary.aborts;
      abort_index_sum += static_cast<double>(*r.aborted_at);
      if (*r.aborted_at <= 5) ++summary.aborted_by_index_5;
    }
  }
  summary.abort_rate = static_cast<double>(summary.aborts) / static_cast<double>(trials);
  summary.mean_abort_index =
      summary.aborts ? abort_index_sum / static_cast<double>(summary.aborts) : 0.0;
  summary.verification_failure_rate =
      checks ? static_cast<double>(failures) / static_cast<double>(checks) : 0.0;
  return summary;
}

EveAccuracy eve_accuracy_experiment(VariantId variant, const EveStrategy& strategy,
                                    std::size_t bits, std::size_t n, std::uint64_t seed,
                                    bool parallel) {
  std::vector<BitTrialResult> trials(bits);
  run_indexed(bits, parallel, [&](std::size_t t) {
    Rng rng(Rng::mix(seed, t));
    OperatingSequencePair pair = generate_pair(n, rng);
    int bit = rng.coin() ? 1 : 0;

    std::vector<PhotonState> photons = encode_bit(bit, pair, variant, &rng);
    std::vector<EveNote> notes1, notes2;
    notes1.reserve(n);
    for (std::size_t i = 0; i < photons.size(); ++i) {
      auto [resent, note] = eve_tap(photons[i], strategy, variant, rng, 1, i);
      photons[i] = resent;
      notes1.push_back(note);
    }

    BitDecision decision = variant == VariantId::V1
                               ? recover_bit(measure_sequence(photons, MeasurePolicy::random_settings(), rng), pair)
                               : recover_predetermined(photons, pair, variant, rng);
    if (decision == BitDecision::Zero || decision == BitDecision::One) {
      int bob_bit = decision == BitDecision::One ? 1 : 0;
      std::vector<PhotonState> feedback = encode_bit(bob_bit, pair, variant, nullptr);
      notes2.reserve(n);
      for (std::size_t i = 0; i < feedback.size(); ++i)
        notes2.push_back(eve_tap(feedback[i], strategy, variant, rng, 2, i).second);
    }

    EveGuess guess = eve_guess_bits(notes1, notes2, variant, strategy);
    BitTrialResult r;
    r.guessed_bit_correct = guess.bit == bit;
    if (guess.alphabet) {
      r.has_alphabet = true;
      r.guessed_alphabet_correct = *guess.alphabet == bit;
    }
    trials[t] = r;
  });

  EveAccuracy acc;
  acc.bits = bits;
  std::size_t bit_hits = 0, alpha_hits = 0, alpha_total = 0;
  for (const auto& r : trials) {
    if (r.guessed_bit_correct) ++bit_hits;
    if (r.has_alphabet) {
      ++alpha_total;
      if (r.guessed_alphabet_correct) ++alpha_hits;
    }
  }
  acc.bit_accuracy = static_cast<double>(bit_hits) / static_cast<double>(bits);
  acc.alphabet_accuracy = alpha_total ? static_cast<double>(alpha_hits) /
                                            static_cast<double>(alpha_total)
                                      : std::numeric_limits<double>::quiet_NaN();
  return acc;
}

double feedback_failure_experiment(VariantId variant, const EveStrategy& strategy,
                                   std::size_t photons, std::uint64_t seed, bool parallel,
                                   const std::vector<StateLetter>& letters) {
  if (letters.empty()) throw Error(Errc::ConfigInvalid, "letter set must not be empty");
  std::vector<unsigned char> failed(photons, 0);
  run_indexed(photons, parallel, [&](std::size_t i) {
    Rng rng(Rng::mix(seed, i));
    StateLetter letter = letters[rng.below(letters.size())];
    PhotonState state = prepare_letter(letter, variant, &rng);
    PhotonState resent = eve_tap(state, strategy, variant, rng, 2, i).first;
    PhotonState expected = prepare_letter(letter, variant, nullptr);
    double p = overlap_probability(resent, expected);
    failed[i] = rng.uniform() < p ? 0 : 1;
  });
  std::size_t count = 0;
  for (auto f : failed) count += f;
  return static_cast<double>(count) / static_cast<double>(photons);
}

}  // namespace seqkd
