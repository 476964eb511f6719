#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cseu/rng.hpp"
#include "cseu/states.hpp"

namespace cseu {

enum class MeasurementMode { ContinuousHaar, Rgcm };

MeasurementMode measurement_mode_from_string(const std::string& s);
std::string to_string(MeasurementMode m);

// How many copies are measured collectively per round, and with which
// sampler. RGCM is the single-copy Clifford variant, so it pins s = 1.
struct CollectiveMeasurementSpec {
  int s = 1;
  MeasurementMode mode = MeasurementMode::ContinuousHaar;

  void validate() const;
};

// One learning round: prepared state and measurement outcome. This is the
// compressed form of the snapshot operator
//   X = a (phi (x) psi^T) - b (I (x) I),
// whose coefficients depend only on (d, s).
struct Snapshot {
  PureState psi;
  PureState phi;
  int d = 0;
  int s = 1;
};

struct ShadowData {
  std::vector<Snapshot> snapshots;
  std::uint64_t seed = 0;
  CollectiveMeasurementSpec spec;
  std::string unitary_label;

  int dim() const { return snapshots.empty() ? 0 : snapshots.front().d; }
  std::size_t rounds() const { return snapshots.size(); }
  std::uint64_t queries() const { return rounds() * static_cast<std::uint64_t>(spec.s); }
};

// Outcome of the symmetric collective measurement on s copies of `output`,
// in the continuous-design limit: the overlap with the measured state is
// Beta(s+1, d-1) distributed, the orthogonal part is Haar in the
// complement, the relative phase is uniform.
PureState sample_collective_outcome(const PureState& output, int s, CounterRng& rng);

// Random global Clifford measurement: V output measured in the
// computational basis, reported back as V^dag |b>.
PureState sample_rgcm_outcome(const PureState& output, CounterRng& rng);
// Deterministic-V variant, used by sample_rgcm_outcome and by tests that
// force a specific Clifford.
PureState rgcm_outcome_given(const UnitaryOp& v, const PureState& output, CounterRng& rng);

Snapshot learning_round(const UnitaryOp& u, const CollectiveMeasurementSpec& spec,
                        CounterRng& rng);

// m independent rounds, reproducible from the seed, parallelizable with
// identical output (per-round streams are derived from the round index).
ShadowData run_learning(const UnitaryOp& u, const CollectiveMeasurementSpec& spec,
                        std::size_t m, std::uint64_t seed,
                        const std::string& unitary_label = "", int threads = 1);

// File form: one JSON header line, then raw little-endian f64 amplitude
// pairs (re, im), psi then phi per snapshot. Round-trips bit-exactly.
void save_shadow(const ShadowData& shadow, const std::string& path);
ShadowData load_shadow(const std::string& path);

}  // namespace cseu
