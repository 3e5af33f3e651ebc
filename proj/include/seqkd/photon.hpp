#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "seqkd/angle.hpp"
#include "seqkd/error.hpp"
#include "seqkd/rng.hpp"

namespace seqkd {

using PathLabel = std::string;
using Amplitude = std::complex<double>;

/// Canonical path names: "r", "s", "t", then generated labels "p3", "p4", ...
PathLabel path_label(std::size_t index);

struct Branch {
  PathLabel path;
  Angle polarization;
  Amplitude amplitude;
};

/// A single photon's pure state: a superposition over labeled paths, each
/// branch carrying one polarization line and a complex amplitude.
/// Normalized on construction; immutable afterwards.
class PhotonState {
 public:
  static PhotonState make(std::vector<Branch> branches);

  const std::vector<Branch>& branches() const { return branches_; }
  const Branch* find(const PathLabel& path) const;

  /// Polarization of one branch advanced by delta (mod 180); amplitude kept.
  PhotonState rotated(const PathLabel& path, Angle delta) const;

  /// Each branch amplitude multiplied by an independent uniform unit phase.
  PhotonState with_random_phases(Rng& rng) const;

 private:
  explicit PhotonState(std::vector<Branch> branches) : branches_(std::move(branches)) {}
  std::vector<Branch> branches_;
};

/// Per-path analyzer orientations. Paths without an entry carry no detector.
class AnalyzerBank {
 public:
  AnalyzerBank() = default;
  AnalyzerBank(std::initializer_list<std::pair<PathLabel, Angle>> entries);

  void set(const PathLabel& path, Angle orientation);
  const std::optional<Angle> find(const PathLabel& path) const;
  const std::vector<std::pair<PathLabel, Angle>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<PathLabel, Angle>> entries_;
};

/// Single-photon detection result: at most one click.
struct Outcome {
  bool clicked = false;
  PathLabel path;  // meaningful only when clicked

  static Outcome click(PathLabel p) { return Outcome{true, std::move(p)}; }
  static Outcome no_click() { return Outcome{}; }

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.clicked == b.clicked && (!a.clicked || a.path == b.path);
  }
};

struct OutcomeDistribution {
  // click probabilities in bank order, then the no-click remainder
  std::vector<std::pair<Outcome, double>> entries;

  double prob(const Outcome& o) const;
  double total() const;
};

/// P(ClickAt p) = |amp_p|^2 * cos^2(analyzer_p - polarization_p) for each
/// analyzed path; everything else (including unanalyzed paths) is no-click.
OutcomeDistribution outcome_distribution(const PhotonState& state, const AnalyzerBank& bank);

Outcome sample_outcome(const PhotonState& state, const AnalyzerBank& bank, Rng& rng);

/// Ordered list of (path, angle) basis vectors; per path exactly two mutually
/// orthogonal angles.
class BasisSpec {
 public:
  BasisSpec(std::vector<std::pair<PathLabel, Angle>> vectors);

  const std::vector<std::pair<PathLabel, Angle>>& vectors() const { return vectors_; }
  std::size_t size() const { return vectors_.size(); }

  /// Standard horizontal/vertical basis over the first m canonical paths.
  static BasisSpec standard(std::size_t num_paths);

 private:
  std::vector<std::pair<PathLabel, Angle>> vectors_;
};

struct DensityMatrix {
  BasisSpec basis;
  Eigen::MatrixXcd mat;
};

/// Ensemble density matrix sum_i w_i |psi_i><psi_i| in the given basis. With
/// incoherent_paths set, all cross-path matrix elements are zeroed (relative
/// phase averaging between paths).
DensityMatrix density_of(const std::vector<std::pair<PhotonState, double>>& ensemble,
                         const BasisSpec& basis, bool incoherent_paths);

/// |<expected|state>|^2 on the common standard decomposition of both states.
double overlap_probability(const PhotonState& state, const PhotonState& expected);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Decomposes a state onto the basis (column vector of coefficients).
Eigen::VectorXcd state_vector(const PhotonState& state, const BasisSpec& basis);

}  // namespace seqkd
