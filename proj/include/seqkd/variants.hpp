#pragma once

#include <cstdint>

#include "seqkd/codec.hpp"
#include "seqkd/photon.hpp"
#include "seqkd/session.hpp"

namespace seqkd {

/// Intro sequence channel round trip: encode one bit as a parity-placed
/// 0/45-degree photon train, analyze 0 degrees at even events. One-sided
/// error: bit 0 is never misreported.
BitDecision v0_roundtrip(std::size_t n, int bit, Rng& rng);

/// Channel A: orthogonal single-photon states (0 vs 90), analyzer at the
/// given angle, click -> 0. Returns empirical accuracy.
double channelA_demo(std::size_t trials, Rng& rng, Angle analyzer = Angle(0.0));

/// Channel B: nonorthogonal states (0 vs 45) against one fixed analyzer with
/// the better of the two click->bit mappings. Returns empirical accuracy.
double channelB_demo(std::size_t trials, Rng& rng, Angle analyzer = Angle(0.0));

/// Expected single-shot accuracy of a fixed analyzer on the 0/45 pair.
double channelB_expected_accuracy(Angle analyzer);

/// Brute-force sweep over analyzer angles; returns the best angle found.
Angle channelB_best_analyzer(std::size_t grid_steps = 1800);

struct VariantReport {
  VariantId id = VariantId::V1;
  double honest_accuracy = 0.0;
  double eve_bit_accuracy = 0.0;
  double eve_alphabet_accuracy = 0.0;  // NaN unless V2
  double disturbance = 0.0;            // per-photon feedback-failure rate
  double lucky_basis_disturbance = 0.0;  // V2 only; NaN otherwise
  double rho_distance = 0.0;           // trace distance of the two sequence ensembles
};

/// Density matrices of the S0 and S1 ensembles for a variant (two-path
/// incoherent for V1, single-path for V2/V3).
std::pair<DensityMatrix, DensityMatrix> variant_densities(VariantId variant, std::size_t m = 2);

/// Runs the variant's matched Eve strategy and aggregates the security
/// contrast figures. n is the per-bit sequence length.
VariantReport variant_security_report(VariantId variant, std::size_t trials, std::size_t n,
                                      std::uint64_t seed, bool parallel = true);

}  // namespace seqkd
