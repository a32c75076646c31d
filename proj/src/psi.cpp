#include "linkcomm/psi.hpp"

#include "linkcomm/errors.hpp"

namespace linkcomm {

namespace {
PsiScore compose(double sigma_value, std::int64_t k_in, std::int64_t k_in_complement) {
  PsiScore s;
  s.sigma = sigma_value;
  s.k_in = k_in;
  s.k_in_complement = k_in_complement;
  s.value = sigma_value / static_cast<double>(k_in) + sigma_value / static_cast<double>(k_in_complement);
  return s;
}

std::int64_t term_delta(std::int64_t k, std::int64_t degree, int step) {
  const std::int64_t k2 = k + step;
  return k2 * (degree - k2) - k * (degree - k);
}
}  // namespace

double sigma(const LinkSet& l) { return l.sigma(); }

PsiScore psi(const LinkSet& l) {
  const std::int64_t total = 2 * static_cast<std::int64_t>(l.graph().num_edges());
  if (l.empty()) throw DomainError("psi undefined for the empty link set");
  if (l.internal_degree() == total) throw DomainError("psi undefined for the full edge set");
  return compose(l.sigma(), l.internal_degree(), total - l.internal_degree());
}

PsiScore psi_after_move(const LinkSet& l, EdgeId e, Move move) {
  const Graph& g = l.graph();
  if (e < 0 || e >= g.num_edges()) throw ContractError("edge id out of range");
  const Edge& ed = g.edge(e);
  const int step = move == Move::add ? 1 : -1;
  if (move == Move::add) {
    if (l.contains(e)) throw ContractError("cannot add an edge already in the link set");
    if (!l.attached(ed.a) && !l.attached(ed.b)) throw ContractError("added edge must share a node with the link set");
  } else if (!l.contains(e)) {
    throw ContractError("cannot remove an edge outside the link set");
  }
  const std::int64_t total = 2 * static_cast<std::int64_t>(g.num_edges());
  const std::int64_t k_in = l.internal_degree() + 2 * step;
  if (k_in == 0 || k_in == total) throw DomainError("move leaves psi undefined");

  const auto da = term_delta(l.internal_degree(ed.a), g.degree(ed.a), step);
  const auto db = term_delta(l.internal_degree(ed.b), g.degree(ed.b), step);
  const double s = l.sigma_shifted(g.degree_class(ed.a), da, g.degree_class(ed.b), db);
  return compose(s, k_in, total - k_in);
}

double escape_probability(const LinkSet& l) {
  if (l.empty()) throw DomainError("escape probability undefined for the empty link set");
  return l.sigma() / static_cast<double>(l.internal_degree());
}

bool is_weak_community(const LinkSet& l) { return escape_probability(l) < 0.5; }

}  // namespace linkcomm
