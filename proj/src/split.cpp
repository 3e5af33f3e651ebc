#include "seqkd/split.hpp"

#include <algorithm>

#include "seqkd/session.hpp"

namespace seqkd {
namespace {

DASetting setting_of_angle(Angle a) {
  // the single-analyzer receiver reuses Bob's two orientations, so the
  // forbidden-letter map carries over: 0 -> {B}, 45 -> {D}
  return a == Angle(0.0) ? DASetting::DA0 : DASetting::DA1;
}

}  // namespace

PhotonState prepare_split_letter(StateLetter letter, std::size_t m, const PathLabel& carrying,
                                 Rng* phase_rng) {
  if (m < 2) throw Error(Errc::ConfigInvalid, "split preparation needs at least two paths");
  std::vector<Branch> branches;
  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    PathLabel p = path_label(i);
    if (p == carrying) {
      branches.push_back({p, letter_polarization(letter, VariantId::V1), 1.0});
      found = true;
    } else {
      branches.push_back({p, Angle(0.0), 1.0});
    }
  }
  if (!found) throw Error(Errc::BadPath, "carrying path '" + carrying + "' is not among the m paths");
  PhotonState state = PhotonState::make(std::move(branches));
  if (phase_rng) state = state.with_random_phases(*phase_rng);
  return state;
}

BitDecision receiver_measure_and_recover(const std::vector<PhotonState>& photons,
                                         const PathLabel& own_path,
                                         const OperatingSequencePair& pair, Rng& rng) {
  if (photons.size() != pair.length())
    throw Error(Errc::LengthMismatch, "photon count differs from sequence length");
  std::vector<MeasurementRecord> records;
  for (std::size_t i = 0; i < photons.size(); ++i) {
    Angle orientation = rng.coin() ? Angle(45.0) : Angle(0.0);
    AnalyzerBank bank{{own_path, orientation}};
    Outcome outcome = sample_outcome(photons[i], bank, rng);
    if (outcome.clicked)
      records.push_back({i, setting_of_angle(orientation), ResultClass::Beta});
  }
  return recover_bit(records, pair);
}

SplitOutput run_split_session(const SplitConfig& cfg) {
  if (cfg.paths < 2 || cfg.n < 1 || cfg.bits < 1)
    throw Error(Errc::ConfigInvalid, "split session needs paths >= 2, n >= 1, bits >= 1");
  if (cfg.schedule && cfg.schedule->size() != cfg.bits)
    throw Error(Errc::ConfigInvalid, "schedule length differs from bit count");
  if (cfg.schedule)
    for (auto p : *cfg.schedule)
      if (p >= cfg.paths) throw Error(Errc::ConfigInvalid, "schedule entry out of range");

  Rng rng(cfg.seed);
  OperatingSequencePair pair = generate_pair(cfg.n, rng);

  SplitOutput out;
  for (std::size_t i = 0; i < cfg.paths; ++i) out.partials[path_label(i)] = PartialKey{};

  for (std::size_t idx = 0; idx < cfg.bits; ++idx) {
    std::size_t carrying_index =
        cfg.schedule ? (*cfg.schedule)[idx] : static_cast<std::size_t>(rng.below(cfg.paths));
    PathLabel carrying = path_label(carrying_index);
    out.schedule.push_back(carrying_index);
    int bit = rng.coin() ? 1 : 0;
    out.alice_key.push_back(bit);

    // all receivers watch the same photons; a position yields at most one
    // click across the whole bank
    std::vector<std::vector<MeasurementRecord>> per_receiver(cfg.paths);
    for (std::size_t pos = 0; pos < cfg.n; ++pos) {
      PhotonState photon = prepare_split_letter(pair.seq(bit)[pos], cfg.paths, carrying, &rng);
      AnalyzerBank bank;
      std::vector<Angle> orientations(cfg.paths);
      for (std::size_t rcv = 0; rcv < cfg.paths; ++rcv) {
        orientations[rcv] = rng.coin() ? Angle(45.0) : Angle(0.0);
        bank.set(path_label(rcv), orientations[rcv]);
      }
      Outcome outcome = sample_outcome(photon, bank, rng);
      if (!outcome.clicked) continue;
      for (std::size_t rcv = 0; rcv < cfg.paths; ++rcv) {
        if (path_label(rcv) != outcome.path) continue;
        per_receiver[rcv].push_back({pos, setting_of_angle(orientations[rcv]), ResultClass::Beta});
      }
    }

    for (std::size_t rcv = 0; rcv < cfg.paths; ++rcv) {
      BitDecision decision = recover_bit(per_receiver[rcv], pair);
      if (decision != BitDecision::Zero && decision != BitDecision::One) continue;
      int recovered = decision == BitDecision::One ? 1 : 0;
      out.partials[path_label(rcv)].bits[idx] = recovered;
      // the addressed receiver pursues the authentication feedback
      if (rcv == carrying_index) {
        std::vector<PhotonState> feedback, expected;
        feedback.reserve(cfg.n);
        expected.reserve(cfg.n);
        for (std::size_t pos = 0; pos < cfg.n; ++pos) {
          feedback.push_back(prepare_split_letter(pair.seq(recovered)[pos], cfg.paths, carrying));
          expected.push_back(prepare_split_letter(pair.seq(bit)[pos], cfg.paths, carrying));
        }
        VerifyResult vr = alice_verify_feedback(expected, feedback, rng);
        if (!vr.pass) ++out.qa_failures;
      }
    }
  }
  return out;
}

MergeResult merge(const std::map<PathLabel, PartialKey>& partials, std::size_t total_bits) {
  MergeResult result;
  std::map<std::size_t, int> merged;
  for (const auto& [receiver, partial] : partials) {
    for (const auto& [index, bit] : partial.bits) {
      auto it = merged.find(index);
      if (it == merged.end())
        merged[index] = bit;
      else if (it->second != bit)
        result.conflicts.push_back(index);
    }
  }
  std::sort(result.conflicts.begin(), result.conflicts.end());
  result.conflicts.erase(std::unique(result.conflicts.begin(), result.conflicts.end()),
                         result.conflicts.end());
  for (std::size_t i = 0; i < total_bits; ++i)
    if (!merged.count(i)) result.missing.push_back(i);
  if (result.conflicts.empty() && result.missing.empty()) {
    std::vector<int> key;
    key.reserve(total_bits);
    for (std::size_t i = 0; i < total_bits; ++i) key.push_back(merged[i]);
    result.key = std::move(key);
  }
  return result;
}

}  // namespace seqkd
