// Finite-stage block structure for a loop feeding a sink.  The sink sits
// outside the relative set, so every stage keeps one defect block per level
// alongside the two full blocks; the DOT output shows how blocks persist and
// propagate from layer to layer.

#include <iostream>

#include "graphk/afcore.hpp"

using namespace graphk;

int main() {
  Graph g({"t", "v"}, {}, {{"loop", "v", "v"}, {"drop", "v", "t"}});
  RelativeGraph rg(g);  // relative set {v}: t is a sink

  const std::int64_t kmax = 4;
  BratteliDiagram d = bratteli(rg, kmax);
  for (std::size_t i = 0; i < d.layers.size(); ++i) {
    std::cout << "layer " << i << " (dimension "
              << ck_dimension(rg, static_cast<std::int64_t>(i)) << "):";
    bool first = true;
    for (const auto& b : d.layers[i]) {
      std::cout << (first ? " " : " | ") << detail::block_label(b.element, b.size);
      first = false;
    }
    std::cout << "\n";
  }
  std::cout << "\n" << bratteli_dot(d);
  return 0;
}
