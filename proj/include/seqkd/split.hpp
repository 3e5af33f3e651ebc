#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "seqkd/codec.hpp"

namespace seqkd {

struct SplitConfig {
  std::size_t paths = 2;  // m, canonical 2 or 3
  std::size_t n = 400;
  std::size_t bits = 100;  // N
  std::uint64_t seed = 0;
  // per-bit carrying path indices; drawn uniformly at random when absent
  std::optional<std::vector<std::size_t>> schedule;
};

struct PartialKey {
  std::map<std::size_t, int> bits;  // bit index -> recovered bit
};

/// Split preparation of one letter over m paths: the carrying path holds the
/// letter's polarization, every other path a fixed horizontal branch, all
/// amplitudes 1/sqrt(m).
PhotonState prepare_split_letter(StateLetter letter, std::size_t m, const PathLabel& carrying,
                                 Rng* phase_rng = nullptr);

/// A receiver holding a single analyzer on its own path: per position it
/// picks 0 or 45 degrees uniformly, keeps clicks, and runs the same
/// forbidden-letter correlation tests as the two-path receiver.
BitDecision receiver_measure_and_recover(const std::vector<PhotonState>& photons,
                                         const PathLabel& own_path,
                                         const OperatingSequencePair& pair, Rng& rng);

struct SplitOutput {
  std::vector<int> alice_key;
  std::vector<std::size_t> schedule;  // carrying path index per bit
  std::map<PathLabel, PartialKey> partials;
  std::size_t qa_failures = 0;
};

/// Full multi-receiver session: per bit Alice draws the carrying path, every
/// receiver measures its own path of the same photons, and the addressed
/// receiver pursues the authentication feedback.
SplitOutput run_split_session(const SplitConfig& config);

struct MergeResult {
  std::optional<std::vector<int>> key;
  std::vector<std::size_t> missing;
  std::vector<std::size_t> conflicts;
};

/// Union of the partial keys; reports uncovered indices and disagreements.
MergeResult merge(const std::map<PathLabel, PartialKey>& partials, std::size_t total_bits);

}  // namespace seqkd
