// The running family: one vertex carrying n parallel loops.  The relation
// matrix is the 1x1 integer matrix [1-n], so K0 is cyclic of order n-1 and
// K1 vanishes for every n >= 2.

#include <iostream>
#include <string>
#include <vector>

#include "graphk/ktheory.hpp"

using namespace graphk;

int main() {
  for (int n = 2; n <= 10; ++n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      edges.push_back({"e" + std::to_string(i), "v", "v"});
    KGroups kg = kgroups(RelativeGraph(Graph({"v"}, {}, edges)));
    std::cout << n << " loops: K0 = " << kg.k0.type_string()
              << ", K1 = " << kg.k1.type_string() << "\n";
  }
  return 0;
}
