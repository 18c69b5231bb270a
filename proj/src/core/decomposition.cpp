#include "core/decomposition.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace stodi {

OneRegularDecomposition decompose_one_regular(const Digraph& g) {
  int n = g.n();
  std::uint64_t count = 1;
  for (int x = 1; x <= n; ++x) {
    std::size_t deg = g.out_neighborhood(x).size();
    if (deg == 0)
      throw_precondition("node " + std::to_string(x) + " has no outgoing edge; cannot decompose");
    count *= deg;
    if (count > (std::uint64_t{1} << 32))
      throw_capacity("decomposition would produce more than 2^32 pieces");
  }

  OneRegularDecomposition out;
  out.pieces.reserve(count);
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int x = 1; x <= n; ++x)
      edges.emplace_back(x, g.out_neighborhood(x)[choice[static_cast<std::size_t>(x - 1)]]);
    out.pieces.emplace_back(n, std::move(edges));
    // odometer increment, last node fastest
    int pos = n - 1;
    while (pos >= 0) {
      auto& c = choice[static_cast<std::size_t>(pos)];
      if (++c < g.out_neighborhood(pos + 1).size()) break;
      c = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

Matrix markov_matrix(const StochasticDigraph& sd) {
  auto n = static_cast<std::size_t>(sd.n());
  for (int w = 1; w <= sd.h(); ++w)
    if (!sd.layer(w).one_regular())
      throw_precondition("edge set " + std::to_string(w) + " is not 1-regular");
  Matrix P(n, n);
  for (int i = 1; i <= sd.n(); ++i)
    for (int w = 1; w <= sd.h(); ++w) {
      NodeId j = sd.H(i, w)[0];
      P.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) += sd.mu(w);
    }
  return P;
}

TransitionMatrixSet enumerate_P_set(const StochasticDigraph& sd, std::uint64_t cap, bool dedup) {
  if (!sd.standing_assumption_holds())
    throw_precondition(
        "graph has stranded nodes under positive-probability topologies; apply sink augmentation first");
  // Layers with zero probability still contribute choice multiplicity, exactly
  // as the tuple construction prescribes; their edges just carry no mass.
  for (int w = 1; w <= sd.h(); ++w)
    for (int x = 1; x <= sd.n(); ++x)
      if (sd.H(x, w).empty())
        throw_precondition("edge set " + std::to_string(w) + " leaves node " + std::to_string(x) +
                           " without successors; cannot decompose");

  unsigned __int128 acc = 1;
  const unsigned __int128 limit = static_cast<unsigned __int128>(cap) + 1;
  for (int w = 1; w <= sd.h(); ++w)
    for (int x = 1; x <= sd.n(); ++x) {
      acc *= sd.layer(w).out_neighborhood(x).size();
      if (acc > limit) acc = limit;  // saturate; exact value no longer needed
    }
  if (acc > static_cast<unsigned __int128>(cap)) {
    std::string size_text = acc == limit ? ("more than " + std::to_string(cap))
                                         : std::to_string(static_cast<std::uint64_t>(acc));
    throw_capacity("matrix family has " + size_text + " members, above the cap of " + std::to_string(cap) +
                   "; use the per-state action-space construction instead of enumerating matrices");
  }
  const auto nu = static_cast<std::uint64_t>(acc);

  std::vector<OneRegularDecomposition> decs;
  decs.reserve(static_cast<std::size_t>(sd.h()));
  for (int w = 1; w <= sd.h(); ++w) decs.push_back(decompose_one_regular(sd.layer(w)));

  auto n = static_cast<std::size_t>(sd.n());
  TransitionMatrixSet out;
  out.nu = nu;
  out.matrices.reserve(static_cast<std::size_t>(nu));
  std::vector<std::size_t> pick(static_cast<std::size_t>(sd.h()), 0);
  for (;;) {
    Matrix P(n, n);
    for (int w = 1; w <= sd.h(); ++w) {
      const Digraph& piece = decs[static_cast<std::size_t>(w - 1)].pieces[pick[static_cast<std::size_t>(w - 1)]];
      double p = sd.mu(w);
      for (int i = 1; i <= sd.n(); ++i) {
        NodeId j = piece.out_neighborhood(i)[0];
        P.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) += p;
      }
    }
    out.matrices.push_back(std::move(P));
    int pos = sd.h() - 1;
    while (pos >= 0) {
      auto& c = pick[static_cast<std::size_t>(pos)];
      if (++c < decs[static_cast<std::size_t>(pos)].pieces.size()) break;
      c = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  if (dedup) {
    std::vector<Matrix> unique;
    for (auto& m : out.matrices) {
      bool seen = false;
      for (const auto& u : unique)
        if (u.data == m.data) {
          seen = true;
          break;
        }
      if (!seen) unique.push_back(std::move(m));
    }
    out.matrices = std::move(unique);
  }
  return out;
}

}  // namespace stodi
