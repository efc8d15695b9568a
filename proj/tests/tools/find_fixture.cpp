// Randomized search for a small R=3 instance on which plain sequential
// planning is beaten by the exhaustive optimum while both the improvement
// sweep and interleaved planning recover it. Prints the first hit as a
// roadmap file on stdout.
//
//   find_fixture [first_seed] [max_vertices]

#include <cstdlib>
#include <iostream>

#include "formplan/io.hpp"
#include "formplan/optimizer.hpp"
#include "formplan/oracle.hpp"
#include "graphs.hpp"

using namespace formplan;
using formplan::testing::Rng;

namespace {

// Integer costs keep the fixture readable: c_1 in 1..20, increments 0..c_1.
CostVector integer_costs(Rng& rng) {
  CostVector c(3);
  c[0] = rng.between(1, 20);
  c[1] = c[0] + rng.between(0, static_cast<int>(c[0]));
  c[2] = c[1] + rng.between(0, static_cast<int>(c[0]));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t first = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const int max_vertices = argc > 2 ? std::atoi(argv[2]) : 8;
  constexpr double tol = 1e-9;
  for (std::uint64_t seed = first; seed < first + 1'000'000; ++seed) {
    Rng rng(seed);
    const int n = rng.between(4, max_vertices);
    const auto topo = formplan::testing::random_connected_topology(rng, n, rng.between(1, n));
    const Roadmap roadmap =
        formplan::testing::materialize(rng, topo, [&](std::size_t) { return integer_costs(rng); });
    const PlanQuery query{0, n - 1, 3, 0.0};
    const PathSet seq = plan_sequential(roadmap, query);
    const PathSet best = exhaustive_optimum(roadmap, query);
    if (!(seq.objective > best.objective + tol)) continue;
    const PathSet swept = optimize_paths(roadmap, seq, query);
    OptimizerOptions interleaved_only;
    interleaved_only.sequential_incumbent = false;
    const PathSet opt = plan_optimized(roadmap, query, interleaved_only);
    if (std::abs(swept.objective - best.objective) > tol) continue;
    if (std::abs(opt.objective - best.objective) > tol) continue;
    std::cerr << "seed " << seed << ": n=" << n << " seq " << seq.objective << " oracle "
              << best.objective << "\n";
    std::cout << save_roadmap(roadmap);
    return 0;
  }
  std::cerr << "no instance found\n";
  return 1;
}
