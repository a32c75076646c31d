#pragma once

#include <cstdint>

#include "linkcomm/link_set.hpp"

namespace linkcomm {

// Normalized node-cut of a link set L:
//   psi = sigma / k_in(L) + sigma / k_in(E - L)
//   sigma = sum_i k_i^in(L) (k_i - k_i^in(L)) / k_i
struct PsiScore {
  double value = 0.0;
  double sigma = 0.0;
  std::int64_t k_in = 0;
  std::int64_t k_in_complement = 0;
};

// Absolute tolerance separating a strict cost improvement from rounding.
inline constexpr double kPsiTolerance = 1e-12;
inline bool strictly_lower(double a, double b) { return a < b - kPsiTolerance; }

enum class Move : std::uint8_t { add, remove };

double sigma(const LinkSet& l);

// Throws DomainError for L empty or L = E.
PsiScore psi(const LinkSet& l);

// psi(L + e) or psi(L - e) without touching L. Only the two endpoint
// terms change. add requires e outside L and sharing a node with L;
// remove requires e in L. Violations throw ContractError.
PsiScore psi_after_move(const LinkSet& l, EdgeId e, Move move);

// sigma / k_in(L): probability that a link-node-link walker on a link of L
// leaves L in one step. Throws DomainError for empty L.
double escape_probability(const LinkSet& l);

// Weak link community: the walker is more likely to stay than to leave.
bool is_weak_community(const LinkSet& l);

}  // namespace linkcomm
