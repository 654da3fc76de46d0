#pragma once

#include <string>

#include "lpm/gfd/stencil.hpp"
#include "lpm/solver/rates.hpp"

namespace lpm {

enum class Scheme { first, beam_warming, limited };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::first: return "first";
    case Scheme::beam_warming: return "beam_warming";
    case Scheme::limited: return "limited";
  }
  return "?";
}

/// Which specific volume scales the flux matrix: the particle's value at the
/// start of the (sub)step, or its value at t = 0.
enum class V0Reference { step_start, initial };

enum class IndexKind { bucket, tree };

struct SolverOptions {
  Scheme scheme = Scheme::limited;
  StencilOptions stencil{};
  double search_radius = 0.0;
  ThetaForm theta_form = ThetaForm::symmetric;
  double delta_div = 1e-12;
  V0Reference v0_reference = V0Reference::step_start;
  IndexKind index = IndexKind::bucket;
  int tree_depth = 5;
  int threads = 1;

  bool operator==(const SolverOptions&) const = default;
};

}  // namespace lpm
