#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "seqkd/photon.hpp"
#include "seqkd/rng.hpp"

namespace seqkd {

enum class StateLetter { A, B, C, D };

char letter_char(StateLetter l);
StateLetter letter_from_char(char c);

/// The shared secret: two length-n letter sequences, S0 over {A,B} and S1
/// over {C,D}, standing for bit 0 and bit 1.
struct OperatingSequencePair {
  std::vector<StateLetter> s0;
  std::vector<StateLetter> s1;

  std::size_t length() const { return s0.size(); }
  const std::vector<StateLetter>& seq(int bit) const { return bit ? s1 : s0; }

  /// Compact fixture form: one letter per position, two lines.
  std::string to_text() const;
  static OperatingSequencePair from_text(const std::string& text);
};

OperatingSequencePair generate_pair(std::size_t n, Rng& rng);

/// Deterministic even/odd pair used in documentation tests only: A at even
/// events and C at odd events (events are 1-indexed).
OperatingSequencePair regular_pair(std::size_t n);

enum class VariantId { V0, V1, V2, V3 };

std::string variant_name(VariantId v);
VariantId variant_from_name(const std::string& name);

/// Polarization of a letter's bit-carrying branch for a variant.
///   V1 (superposition) and V2 (orthogonal pairs): A,B,C,D -> 0,90,45,135
///   V3 (unequal densities):                       A,B,C,D -> 0,45,90,135
Angle letter_polarization(StateLetter l, VariantId variant = VariantId::V1);

/// The two canonical dual-analyzer settings.
enum class DASetting { DA0, DA1 };

AnalyzerBank analyzer_bank(DASetting setting);

enum class ResultClass { Alpha, Beta, Gamma };

ResultClass classify_outcome(const Outcome& outcome, const PathLabel& carrying_path);

struct MeasurementRecord {
  std::size_t position;
  DASetting setting;
  ResultClass result;
};

enum class BitDecision { Zero, One, Ambiguous, Contradiction };

std::string decision_name(BitDecision d);

/// Preparation of a single letter.
/// V1: 1/sqrt(2)(|0deg>_r + |pol>_s), optionally phase-randomized.
/// V0/V2/V3: single-path photon on "s".
PhotonState prepare_letter(StateLetter letter, VariantId variant, Rng* phase_rng = nullptr);

/// Photon train for one bit. For V1 the branch phases are randomized per
/// photon when an rng is given; pass nullptr for the canonical preparation.
/// V0 ignores the pair and places 0/45-degree photons by event parity.
std::vector<PhotonState> encode_bit(int bit, const OperatingSequencePair& pair, VariantId variant,
                                    Rng* phase_rng);

struct MeasurePolicy {
  bool random = true;
  std::vector<DASetting> settings;  // used when !random

  static MeasurePolicy random_settings() { return MeasurePolicy{}; }
  static MeasurePolicy predetermined(std::vector<DASetting> s) {
    return MeasurePolicy{false, std::move(s)};
  }
};

/// Bob's measurement pass: one record per position. The random policy draws
/// DA0/DA1 with probability 1/2 per position.
std::vector<MeasurementRecord> measure_sequence(const std::vector<PhotonState>& photons,
                                                const MeasurePolicy& policy, Rng& rng);

/// Keep only conclusive (beta) records, order preserved.
std::vector<MeasurementRecord> reduce(const std::vector<MeasurementRecord>& records);

/// Letters whose beta probability is exactly zero under the setting:
/// DA0 -> {B}, DA1 -> {D}.
std::set<StateLetter> forbidden_letters(DASetting setting);

struct CorrelationResult {
  bool consistent;
  std::size_t contradictions;
};

/// A contradiction is a beta record at a position whose setting forbids the
/// hypothesized sequence's letter there.
CorrelationResult correlation_test(const std::vector<MeasurementRecord>& reduced, int hypothesis,
                                   const OperatingSequencePair& pair);

/// Four correlation tests: {hypothesis 0, 1} x {DA0 records, DA1 records}.
/// Exactly one consistent hypothesis -> that bit; both -> Ambiguous;
/// none -> Contradiction.
BitDecision recover_bit(const std::vector<MeasurementRecord>& records,
                        const OperatingSequencePair& pair);

/// Measurement trick 1 for the single-path variants (V2, V3): per position a
/// projective check at the hypothesis-0 letter angle; an all-click run means
/// bit 0, any miss means bit 1 (one-sided error, vanishing in n).
BitDecision recover_predetermined(const std::vector<PhotonState>& photons,
                                  const OperatingSequencePair& pair, VariantId variant, Rng& rng);

/// Intro-channel receiver: analyzer at 0 degrees on every even event; a miss
/// at any even event decides bit 1.
BitDecision v0_decide(const std::vector<PhotonState>& photons, Rng& rng);

/// Joint probability table for one setting: rows A,B,C,D; columns
/// alpha, beta, gamma. Entries carry the 1/2 statistical weight of the
/// states, so each row sums to 1/2.
std::array<std::array<double, 3>, 4> table_joint_probabilities(DASetting setting);

}  // namespace seqkd
