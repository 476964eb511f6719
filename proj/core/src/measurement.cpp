#include "cseu/measurement.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cseu/ensembles.hpp"
#include "cseu/parallel.hpp"
#include "json.hpp"

namespace cseu {

namespace {
// Stream id namespace for per-round generators.
constexpr std::uint32_t kLearningStream = 1;
constexpr int kShadowFormatVersion = 1;
}  // namespace

MeasurementMode measurement_mode_from_string(const std::string& s) {
  if (s == "continuous-haar") return MeasurementMode::ContinuousHaar;
  if (s == "rgcm") return MeasurementMode::Rgcm;
  throw std::invalid_argument("unknown measurement mode: " + s);
}

std::string to_string(MeasurementMode m) {
  return m == MeasurementMode::ContinuousHaar ? "continuous-haar" : "rgcm";
}

void CollectiveMeasurementSpec::validate() const {
  if (s < 1) throw std::invalid_argument("CollectiveMeasurementSpec: s must be >= 1");
  if (mode == MeasurementMode::Rgcm && s != 1)
    throw std::invalid_argument("CollectiveMeasurementSpec: rgcm mode requires s = 1");
}

PureState sample_collective_outcome(const PureState& output, int s, CounterRng& rng) {
  if (s < 1) throw std::invalid_argument("sample_collective_outcome: s must be >= 1");
  const int d = output.dim();
  if (d == 1) return output;

  const double x = rng.beta(static_cast<double>(s + 1), static_cast<double>(d - 1));

  // Haar state in the orthogonal complement of |output>.
  CVec perp;
  for (;;) {
    CVec g(d);
    for (int i = 0; i < d; ++i) g(i) = Complex(rng.normal(), rng.normal());
    g -= output.vec().dot(g) * output.vec();
    const double n = g.norm();
    if (n > 1e-8) {
      perp = g / n;
      break;
    }
  }
  const double theta = 2.0 * M_PI * rng.uniform();
  CVec v = std::sqrt(x) * output.vec() +
           std::exp(Complex(0, theta)) * std::sqrt(1.0 - x) * perp;
  v /= v.norm();
  return PureState(std::move(v));
}

PureState rgcm_outcome_given(const UnitaryOp& v, const PureState& output, CounterRng& rng) {
  const int d = output.dim();
  const CVec rotated = v.matrix() * output.vec();
  double u = rng.uniform();
  int b = d - 1;
  double acc = 0.0;
  for (int k = 0; k < d; ++k) {
    acc += std::norm(rotated(k));
    if (u < acc) {
      b = k;
      break;
    }
  }
  CVec out = v.matrix().adjoint().col(b).eval();
  // adjoint().col(b) is the conjugated b-th row; equal to V^dag |b>.
  out /= out.norm();
  return PureState(std::move(out));
}

PureState sample_rgcm_outcome(const PureState& output, CounterRng& rng) {
  const int d = output.dim();
  int n = 0;
  while ((1 << n) < d) ++n;
  if ((1 << n) != d || n < 1 || n > 3)
    throw std::invalid_argument("sample_rgcm_outcome: d must be 2^n with n <= 3");
  const UnitaryOp v = random_clifford(n, rng);
  return rgcm_outcome_given(v, output, rng);
}

Snapshot learning_round(const UnitaryOp& u, const CollectiveMeasurementSpec& spec,
                        CounterRng& rng) {
  spec.validate();
  const int d = u.dim();
  PureState psi = [&] {
    if (spec.mode == MeasurementMode::Rgcm) {
      int n = 0;
      while ((1 << n) < d) ++n;
      const UnitaryOp v = random_clifford(n, rng);
      return PureState(CVec(v.matrix().col(0)));
    }
    return haar_state(d, rng);
  }();
  const PureState rotated = u.apply(psi);
  PureState phi = spec.mode == MeasurementMode::Rgcm
                      ? sample_rgcm_outcome(rotated, rng)
                      : sample_collective_outcome(rotated, spec.s, rng);
  return Snapshot{std::move(psi), std::move(phi), d, spec.s};
}

ShadowData run_learning(const UnitaryOp& u, const CollectiveMeasurementSpec& spec,
                        std::size_t m, std::uint64_t seed, const std::string& unitary_label,
                        int threads) {
  spec.validate();
  if (m < 1) throw std::invalid_argument("run_learning: m must be >= 1");
  ShadowData shadow;
  shadow.seed = seed;
  shadow.spec = spec;
  shadow.unitary_label = unitary_label;
  const Snapshot blank{PureState::basis(u.dim(), 0), PureState::basis(u.dim(), 0), u.dim(),
                       spec.s};
  shadow.snapshots.assign(m, blank);
  const CounterRng base(seed);
  parallel_for(m, threads, [&](std::size_t i) {
    CounterRng round_rng = base.derive(kLearningStream, i);
    shadow.snapshots[i] = learning_round(u, spec, round_rng);
  });
  return shadow;
}

void save_shadow(const ShadowData& shadow, const std::string& path) {
  nlohmann::json header;
  header["format"] = "cseu-shadow";
  header["version"] = kShadowFormatVersion;
  header["d"] = shadow.dim();
  header["s"] = shadow.spec.s;
  header["m"] = shadow.rounds();
  header["mode"] = to_string(shadow.spec.mode);
  header["seed"] = shadow.seed;
  header["unitary_label"] = shadow.unitary_label;
  header["amp_encoding"] = "f64le-interleaved";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_shadow: cannot open " + path);
  out << header.dump() << '\n';
  auto write_vec = [&out](const CVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double re = v(i).real(), im = v(i).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  };
  for (const auto& snap : shadow.snapshots) {
    write_vec(snap.psi.vec());
    write_vec(snap.phi.vec());
  }
  if (!out) throw std::runtime_error("save_shadow: write failed for " + path);
}

ShadowData load_shadow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_shadow: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_shadow: missing header");
  const nlohmann::json header = nlohmann::json::parse(line);
  if (header.at("format") != "cseu-shadow")
    throw std::runtime_error("load_shadow: not a shadow file");
  if (header.at("version").get<int>() != kShadowFormatVersion)
    throw std::runtime_error("load_shadow: unsupported version");

  ShadowData shadow;
  const int d = header.at("d").get<int>();
  const std::size_t m = header.at("m").get<std::size_t>();
  shadow.spec.s = header.at("s").get<int>();
  shadow.spec.mode = measurement_mode_from_string(header.at("mode").get<std::string>());
  shadow.seed = header.at("seed").get<std::uint64_t>();
  shadow.unitary_label = header.at("unitary_label").get<std::string>();

  auto read_vec = [&in, d]() {
    CVec v(d);
    for (int i = 0; i < d; ++i) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      in.read(reinterpret_cast<char*>(&im), sizeof(double));
      v(i) = Complex(re, im);
    }
    if (!in) throw std::runtime_error("load_shadow: truncated amplitude data");
    return v;
  };
  shadow.snapshots.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    CVec psi = read_vec();
    CVec phi = read_vec();
    shadow.snapshots.push_back(
        Snapshot{PureState(std::move(psi)), PureState(std::move(phi)), d, shadow.spec.s});
  }
  return shadow;
}

}  // namespace cseu
