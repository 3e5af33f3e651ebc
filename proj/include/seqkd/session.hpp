#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqkd/codec.hpp"

namespace seqkd {

struct EveStrategy {
  enum class Kind { None, InterceptResendRandomDA, InterceptResendFixedBasis, DistinguishDensity };

  Kind kind = Kind::None;
  Angle fixed_basis{0.0};  // InterceptResendFixedBasis only

  static EveStrategy none() { return {}; }
  static EveStrategy random_da() { return {Kind::InterceptResendRandomDA, Angle(0.0)}; }
  static EveStrategy fixed_basis_at(Angle a) { return {Kind::InterceptResendFixedBasis, a}; }
  static EveStrategy distinguish_density() { return {Kind::DistinguishDensity, Angle(0.0)}; }

  bool active() const { return kind != Kind::None; }
};

std::string eve_strategy_name(const EveStrategy& s);
EveStrategy eve_strategy_from_name(const std::string& name);

struct SessionConfig {
  std::size_t n = 400;   // photons per sequence
  std::size_t bits = 1;  // key bits to attempt (N)
  VariantId variant = VariantId::V1;
  EveStrategy eve;
  bool eve_leg1 = true;  // tap Alice -> Bob
  bool eve_leg2 = true;  // tap Bob -> Alice feedback
  std::uint64_t seed = 0;
  std::size_t failure_tolerance = 0;  // verification failures Alice tolerates per feedback
  bool feedback_other = false;        // Bob returns the other sequence instead of the same one
};

struct TranscriptEvent {
  enum class Type { BitSent, BitRecovered, FeedbackSent, FeedbackVerified, Aborted, EveTapped };

  Type type;
  std::size_t index = 0;
  int bit = -1;                    // BitSent
  BitDecision decision = BitDecision::Ambiguous;  // BitRecovered
  bool pass = false;               // FeedbackVerified
  int leg = 0;                     // EveTapped
  std::string reason;              // Aborted
};

struct SessionStats {
  std::size_t beta_da0 = 0;
  std::size_t beta_da1 = 0;
  std::size_t records = 0;
  std::size_t contradictions = 0;
  std::size_t verification_failures = 0;
  std::size_t feedback_checks = 0;  // positions Alice has checked
};

struct SessionResult {
  std::vector<int> alice_key;  // bits confirmed by both sides
  std::vector<int> bob_key;
  std::optional<std::size_t> aborted_at;
  std::string abort_reason;
  SessionStats stats;
};

struct SessionOutput {
  SessionResult result;
  std::vector<TranscriptEvent> transcript;
};

/// One deterministic multi-bit QKD session: encode, optional Eve tap on both
/// legs, Bob recovery, quantum-authentication feedback, abort on the first
/// contradiction or failed verification.
SessionOutput run_session(const SessionConfig& config);

/// Eve's per-photon observation. Fields are meaningful per strategy.
struct EveNote {
  DASetting setting = DASetting::DA0;  // InterceptResendRandomDA
  Outcome outcome;                     // InterceptResendRandomDA
  bool clicked_primary = false;        // fixed-basis / density strategies
  int leg = 1;
  std::size_t position = 0;
};

/// Intercept-resend tap. Returns the state Eve puts back on the wire plus
/// her observation.
std::pair<PhotonState, EveNote> eve_tap(const PhotonState& photon, const EveStrategy& strategy,
                                        VariantId variant, Rng& rng, int leg = 1,
                                        std::size_t position = 0);

struct VerifyResult {
  bool pass;
  std::size_t failures;
};

/// Per-position projective check of the feedback against the expected state:
/// each position passes with probability |<expected_i|received_i>|^2.
VerifyResult alice_verify_feedback(const std::vector<PhotonState>& expected,
                                   const std::vector<PhotonState>& received, Rng& rng,
                                   std::size_t tolerance = 0);

struct EveGuess {
  int bit;            // maximum-likelihood bit guess (ties break to 0)
  double confidence;  // posterior of the guessed bit under uniform prior
  std::optional<int> alphabet;  // V2: which preparation alphabet the taps indicate
};

/// Maximum-likelihood guess from Eve's notes, without the shared pair.
/// leg2 notes are only consulted by the fixed-basis (V2) strategy, which
/// compares the two passes of the same sequence.
EveGuess eve_guess_bits(const std::vector<EveNote>& leg1, const std::vector<EveNote>& leg2,
                        VariantId variant, const EveStrategy& strategy);

/// Measurement angle of the DistinguishDensity strategy: principal
/// eigenvector of rho0 - rho1 for the variant's single-photon ensembles.
Angle density_discrimination_angle(VariantId variant);

struct DetectionSummary {
  std::size_t trials = 0;
  std::size_t aborts = 0;
  double abort_rate = 0.0;
  double mean_abort_index = 0.0;       // over aborted trials
  std::size_t aborted_by_index_5 = 0;  // trials aborted at bit index <= 5
  double verification_failure_rate = 0.0;  // failures per checked feedback position
  std::size_t completed_bits = 0;
};

/// Independent seeded sessions (trial i uses Rng::mix(seed, i)); trial results
/// are identical whether run serially or in parallel.
DetectionSummary detection_experiment(const SessionConfig& base, std::size_t trials,
                                      bool parallel = true);

struct EveAccuracy {
  double bit_accuracy = 0.0;
  double alphabet_accuracy = 0.0;  // V2 only; NaN otherwise
  std::size_t bits = 0;
};

/// Eve's guessing accuracy over independently prepared bits (fresh pair per
/// bit, honest receiver behavior on the feedback leg).
EveAccuracy eve_accuracy_experiment(VariantId variant, const EveStrategy& strategy,
                                    std::size_t bits, std::size_t n, std::uint64_t seed,
                                    bool parallel = true);

/// Per-photon probability that an intercept-resent photon fails Alice's
/// projective check, estimated by Monte Carlo over letters drawn uniformly
/// from the given set (all four letters by default).
double feedback_failure_experiment(VariantId variant, const EveStrategy& strategy,
                                   std::size_t photons, std::uint64_t seed, bool parallel = true,
                                   const std::vector<StateLetter>& letters = {
                                       StateLetter::A, StateLetter::B, StateLetter::C,
                                       StateLetter::D});

}  // namespace seqkd
