// Prints the parity bias profile for distinct-part partitions of n (default 500)
// next to the limiting bias density.

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "parity_lab/distribution.hpp"

int main(int argc, char** argv) {
  using namespace parity_lab;
  const int n = argc > 1 ? std::atoi(argv[1]) : 500;
  const ParitySpec spec(2, 1, 2);
  const BiasProfile profile = build_bias_profile(n, spec);
  const double scale = 1.0 / quarter_power(n);

  std::cout << "n = " << n << ", total bias " << to_decimal(profile.normalizer) << "\n";
  std::cout << std::setw(4) << "c" << std::setw(12) << "x" << std::setw(14) << "share" << std::setw(14) << "density*dx\n";
  for (const auto& pt : profile.points) {
    if (pt.c == 0) continue;
    const double x = pt.c * scale;
    std::cout << std::setw(4) << pt.c << std::setw(12) << std::fixed << std::setprecision(4) << x << std::setw(14)
              << ratio_to_double(pt.pb, profile.normalizer) << std::setw(14) << bias_density(x, 2) * scale << "\n";
  }
  std::cout << "mode c = " << bias_mode(profile) << ", predicted x = " << bias_mode_prediction(2) << "\n";
}
