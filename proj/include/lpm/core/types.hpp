#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpm {

template <int Dim>
using Vec = std::array<double, Dim>;

inline constexpr std::size_t kNoId = std::numeric_limits<std::size_t>::max();

/// Role of a particle in a step. Ghosts are vacuum-side stencil neighbours with
/// assigned (not evolved) states; frozen particles keep their initial state and
/// serve as a fixed far-field boundary.
enum class Phase : std::uint8_t { fluid = 0, ghost = 1, frozen = 2 };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::fluid: return "fluid";
    case Phase::ghost: return "ghost";
    case Phase::frozen: return "frozen";
  }
  return "unknown";
}

/// One Lagrangian fluid cell. Mass is fixed for the whole run.
template <int Dim>
struct Particle {
  Vec<Dim> position{};
  Vec<Dim> velocity{};
  double specific_volume = 1.0;
  double pressure = 0.0;
  double mass = 0.0;
  Phase phase = Phase::fluid;

  bool operator==(const Particle&) const = default;
};

template <int Dim>
using ParticleSet = std::vector<Particle<Dim>>;

// Error taxonomy. Every solver failure is one of these.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// K <= 0: the quasi-linear system lost hyperbolicity at some state.
struct HyperbolicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All stencil offsets vanish (duplicate particles).
struct DegenerateStencilError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Not even a first-order fit is attainable from the available neighbours.
struct InsufficientNeighborhoodError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A time step produced an inadmissible state (V <= 0, non-finite values).
struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <int Dim>
inline double distance(const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = 0.0;
  for (int d = 0; d < Dim; ++d) {
    const double h = a[d] - b[d];
    s += h * h;
  }
  return std::sqrt(s);
}

template <int Dim>
inline double norm(const Vec<Dim>& a) {
  double s = 0.0;
  for (int d = 0; d < Dim; ++d) s += a[d] * a[d];
  return std::sqrt(s);
}

template <int Dim>
inline bool all_finite(const Vec<Dim>& a) {
  for (int d = 0; d < Dim; ++d)
    if (!std::isfinite(a[d])) return false;
  return true;
}

template <int Dim>
std::vector<Vec<Dim>> positions_of(const ParticleSet<Dim>& particles) {
  std::vector<Vec<Dim>> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back(p.position);
  return out;
}

}  // namespace lpm
