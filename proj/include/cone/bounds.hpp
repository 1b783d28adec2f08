#pragma once

#include <string_view>

#include "cone/extended_real.hpp"
#include "cone/gf_solver.hpp"
#include "cone/graph.hpp"
#include "cone/radius_dist.hpp"

namespace cone {

enum class VerdictKind { Survives, DiesOut, Inconclusive };

std::string_view to_string(VerdictKind v);

/// Which mean criterion decided a verdict.
///   SurvivalMean:   E[d^R] > 1 + p_0        (the lower process X is supercritical)
///   ExtinctionMean: E[d^R] <= 2 - 1/d       (the upper process Y is (sub)critical)
enum class Criterion { SurvivalMean, ExtinctionMean, None };

std::string_view to_string(Criterion c);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  Criterion fired = Criterion::None;
  ExtendedReal mean_d_power_r;
  double survival_threshold = 0.0;    // 1 + p_0
  double extinction_threshold = 0.0;  // 2 - 1/d
};

struct SurvivalBounds {
  Graph graph = Graph::TdPlus;
  double lower = 0.0;
  double upper = 0.0;
  double rho = 1.0;
  double psi = 1.0;
  Verdict verdict;
};

/// Mean criteria for survival on T_d^+. Applies unchanged to T_d, since the
/// process survives with positive probability on one graph iff on the other.
/// Ties on the extinction criterion count as DiesOut.
Verdict classify_plus(const RadiusDistribution& dist, int d);

/// [1 - rho, 1 - psi] for P_+[V] on T_d^+, where rho and psi are the
/// extinction probabilities of the lower and upper auxiliary processes.
SurvivalBounds survival_bounds_plus(const RadiusDistribution& dist, int d);

/// Bounds on P[V] on T_d:
///   lower = 1 - (1 - rho^((d+1)/d)) p_0 - E[rho^((d+1)/d d^R)]
///   upper = 1 - E[psi^((d+1)/(d-1) (d^R - 1))]
SurvivalBounds survival_bounds_full(const RadiusDistribution& dist, int d);

/// Exact P[V] on T_d for Bernoulli(p) radii: p (1 - psi^(d+1)), with psi the
/// smallest root of p psi^d - psi + 1 - p = 0. Zero when p <= 1/d.
double bernoulli_exact(double p, int d);

}  // namespace cone
