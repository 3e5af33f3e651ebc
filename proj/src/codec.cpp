#include "seqkd/codec.hpp"

#include <algorithm>
#include <sstream>

namespace seqkd {

char letter_char(StateLetter l) {
  switch (l) {
    case StateLetter::A: return 'A';
    case StateLetter::B: return 'B';
    case StateLetter::C: return 'C';
    case StateLetter::D: return 'D';
  }
  return '?';
}

StateLetter letter_from_char(char c) {
  switch (c) {
    case 'A': return StateLetter::A;
    case 'B': return StateLetter::B;
    case 'C': return StateLetter::C;
    case 'D': return StateLetter::D;
  }
  throw Error(Errc::UnknownLetter, std::string("unknown letter '") + c + "'");
}

std::string OperatingSequencePair::to_text() const {
  std::string out;
  out.reserve(2 * s0.size() + 2);
  for (auto l : s0) out += letter_char(l);
  out += '\n';
  for (auto l : s1) out += letter_char(l);
  out += '\n';
  return out;
}

OperatingSequencePair OperatingSequencePair::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line0, line1;
  std::getline(in, line0);
  std::getline(in, line1);
  if (line0.size() != line1.size())
    throw Error(Errc::LengthMismatch, "sequence lines differ in length");
  OperatingSequencePair pair;
  for (char c : line0) {
    StateLetter l = letter_from_char(c);
    if (l != StateLetter::A && l != StateLetter::B)
      throw Error(Errc::UnknownLetter, "S0 may only hold A/B");
    pair.s0.push_back(l);
  }
  for (char c : line1) {
    StateLetter l = letter_from_char(c);
    if (l != StateLetter::C && l != StateLetter::D)
      throw Error(Errc::UnknownLetter, "S1 may only hold C/D");
    pair.s1.push_back(l);
  }
  return pair;
}

OperatingSequencePair generate_pair(std::size_t n, Rng& rng) {
  OperatingSequencePair pair;
  pair.s0.reserve(n);
  pair.s1.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pair.s0.push_back(rng.coin() ? StateLetter::B : StateLetter::A);
  for (std::size_t i = 0; i < n; ++i)
    pair.s1.push_back(rng.coin() ? StateLetter::D : StateLetter::C);
  return pair;
}

OperatingSequencePair regular_pair(std::size_t n) {
  OperatingSequencePair pair;
  for (std::size_t i = 0; i < n; ++i) {
    bool even_event = ((i + 1) % 2) == 0;
    pair.s0.push_back(even_event ? StateLetter::A : StateLetter::B);
    pair.s1.push_back(even_event ? StateLetter::D : StateLetter::C);
  }
  return pair;
}

std::string variant_name(VariantId v) {
  switch (v) {
    case VariantId::V0: return "V0";
    case VariantId::V1: return "V1";
    case VariantId::V2: return "V2";
    case VariantId::V3: return "V3";
  }
  return "?";
}

VariantId variant_from_name(const std::string& name) {
  if (name == "V0" || name == "v0") return VariantId::V0;
  if (name == "V1" || name == "v1") return VariantId::V1;
  if (name == "V2" || name == "v2") return VariantId::V2;
  if (name == "V3" || name == "v3") return VariantId::V3;
  throw Error(Errc::ConfigInvalid, "unknown variant '" + name + "'");
}

Angle letter_polarization(StateLetter l, VariantId variant) {
  if (variant == VariantId::V3) {
    switch (l) {
      case StateLetter::A: return Angle(0.0);
      case StateLetter::B: return Angle(45.0);
      case StateLetter::C: return Angle(90.0);
      case StateLetter::D: return Angle(135.0);
    }
  }
  switch (l) {
    case StateLetter::A: return Angle(0.0);
    case StateLetter::B: return Angle(90.0);
    case StateLetter::C: return Angle(45.0);
    case StateLetter::D: return Angle(135.0);
  }
  return Angle(0.0);
}

AnalyzerBank analyzer_bank(DASetting setting) {
  if (setting == DASetting::DA0) return AnalyzerBank{{"r", Angle(0.0)}, {"s", Angle(0.0)}};
  return AnalyzerBank{{"r", Angle(0.0)}, {"s", Angle(45.0)}};
}

ResultClass classify_outcome(const Outcome& outcome, const PathLabel& carrying_path) {
  if (!outcome.clicked) return ResultClass::Gamma;
  return outcome.path == carrying_path ? ResultClass::Beta : ResultClass::Alpha;
}

std::string decision_name(BitDecision d) {
  switch (d) {
    case BitDecision::Zero: return "zero";
    case BitDecision::One: return "one";
    case BitDecision::Ambiguous: return "ambiguous";
    case BitDecision::Contradiction: return "contradiction";
  }
  return "?";
}

PhotonState prepare_letter(StateLetter letter, VariantId variant, Rng* phase_rng) {
  Angle pol = letter_polarization(letter, variant);
  PhotonState state = (variant == VariantId::V1)
                          ? PhotonState::make({{"r", Angle(0.0), 1.0}, {"s", pol, 1.0}})
                          : PhotonState::make({{"s", pol, 1.0}});
  if (phase_rng) state = state.with_random_phases(*phase_rng);
  return state;
}

std::vector<PhotonState> encode_bit(int bit, const OperatingSequencePair& pair, VariantId variant,
                                    Rng* phase_rng) {
  std::vector<PhotonState> photons;
  photons.reserve(pair.length());
  for (std::size_t i = 0; i < pair.length(); ++i) {
    if (variant == VariantId::V0) {
      bool even_event = ((i + 1) % 2) == 0;
      bool zero_deg = (bit == 0) ? even_event : !even_event;
      photons.push_back(PhotonState::make({{"s", Angle(zero_deg ? 0.0 : 45.0), 1.0}}));
    } else {
      photons.push_back(prepare_letter(pair.seq(bit)[i], variant, phase_rng));
    }
  }
  return photons;
}

std::vector<MeasurementRecord> measure_sequence(const std::vector<PhotonState>& photons,
                                                const MeasurePolicy& policy, Rng& rng) {
  if (!policy.random && policy.settings.size() != photons.size())
    throw Error(Errc::PolicyLengthMismatch, "predetermined policy length differs from photon count");
  std::vector<MeasurementRecord> records;
  records.reserve(photons.size());
  for (std::size_t i = 0; i < photons.size(); ++i) {
    DASetting setting =
        policy.random ? (rng.coin() ? DASetting::DA1 : DASetting::DA0) : policy.settings[i];
    Outcome outcome = sample_outcome(photons[i], analyzer_bank(setting), rng);
    records.push_back({i, setting, classify_outcome(outcome, "s")});
  }
  return records;
}

std::vector<MeasurementRecord> reduce(const std::vector<MeasurementRecord>& records) {
  std::vector<MeasurementRecord> out;
  for (const auto& r : records)
    if (r.result == ResultClass::Beta) out.push_back(r);
  return out;
}

std::set<StateLetter> forbidden_letters(DASetting setting) {
  return setting == DASetting::DA0 ? std::set<StateLetter>{StateLetter::B}
                                   : std::set<StateLetter>{StateLetter::D};
}

CorrelationResult correlation_test(const std::vector<MeasurementRecord>& reduced, int hypothesis,
                                   const OperatingSequencePair& pair) {
  std::size_t contradictions = 0;
  const auto& seq = pair.seq(hypothesis);
  for (const auto& r : reduced) {
    if (r.result != ResultClass::Beta) continue;
    if (forbidden_letters(r.setting).count(seq.at(r.position))) ++contradictions;
  }
  return CorrelationResult{contradictions == 0, contradictions};
}

BitDecision recover_bit(const std::vector<MeasurementRecord>& records,
                        const OperatingSequencePair& pair) {
  auto beta = reduce(records);
  bool ok0 = correlation_test(beta, 0, pair).consistent;
  bool ok1 = correlation_test(beta, 1, pair).consistent;
  if (ok0 && ok1) return BitDecision::Ambiguous;
  if (ok0) return BitDecision::Zero;
  if (ok1) return BitDecision::One;
  return BitDecision::Contradiction;
}

BitDecision recover_predetermined(const std::vector<PhotonState>& photons,
                                  const OperatingSequencePair& pair, VariantId variant, Rng& rng) {
  if (photons.size() != pair.length())
    throw Error(Errc::LengthMismatch, "photon count differs from sequence length");
  for (std::size_t i = 0; i < photons.size(); ++i) {
    AnalyzerBank bank{{"s", letter_polarization(pair.s0[i], variant)}};
    if (!sample_outcome(photons[i], bank, rng).clicked) return BitDecision::One;
  }
  return BitDecision::Zero;
}

BitDecision v0_decide(const std::vector<PhotonState>& photons, Rng& rng) {
  AnalyzerBank bank{{"s", Angle(0.0)}};
  for (std::size_t i = 0; i < photons.size(); ++i) {
    if ((i + 1) % 2 != 0) continue;  // only even events are checked
    if (!sample_outcome(photons[i], bank, rng).clicked) return BitDecision::One;
  }
  return BitDecision::Zero;
}

std::array<std::array<double, 3>, 4> table_joint_probabilities(DASetting setting) {
  std::array<std::array<double, 3>, 4> table{};
  const StateLetter letters[] = {StateLetter::A, StateLetter::B, StateLetter::C, StateLetter::D};
  AnalyzerBank bank = analyzer_bank(setting);
  for (int row = 0; row < 4; ++row) {
    PhotonState state = prepare_letter(letters[row], VariantId::V1);
    OutcomeDistribution dist = outcome_distribution(state, bank);
    // the 1/2 statistical weight of the state within its sequence
    table[row][0] = 0.5 * dist.prob(Outcome::click("r"));
    table[row][1] = 0.5 * dist.prob(Outcome::click("s"));
    table[row][2] = 0.5 * dist.prob(Outcome::no_click());
  }
  return table;
}

}  // namespace seqkd
