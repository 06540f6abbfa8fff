// Generates a spatially coupled code, decomposes it along the coupling
// chain and prints the smallest trapping sets for b = 0..2.

#include <cstdlib>
#include <iostream>

#include "trapgraph/trapgraph.hpp"

int main(int argc, char** argv) {
  using namespace trapgraph;
  ScLdpcParams p;  // 3x4 base, L=10, w=2, degree 3
  p.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  const auto g = generate_sc_ldpc(p);
  const auto td = sc_path_decomposition(g, p);
  const auto ntd = make_nice(g, td);
  std::cout << "code: " << g.n_var() << " variables, " << g.n_chk() << " checks, path width " << width(td) << "\n";

  for (unsigned b = 0; b <= 2; ++b) {
    auto w = find_witness(g, ntd, b);
    if (!w) {
      std::cout << "b=" << b << ": none\n";
      continue;
    }
    const auto s = run_dp(g, ntd, b).spectrum;
    std::cout << "b=" << b << ": a_min=" << s->a_min << " count=" << s->count << " e.g. {";
    for (std::size_t i = 0; i < w->members.size(); ++i) std::cout << (i ? "," : "") << w->members[i];
    std::cout << "}\n";
  }
}
