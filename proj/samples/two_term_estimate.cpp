// Compares exact d_{1,2;2;c}(n) at c = ceil(c0 n^{1/4}) with the one- and
// two-term asymptotic estimates.

#include <cstdlib>
#include <iostream>

#include "parity_lab/asymptotics.hpp"

int main(int argc, char** argv) {
  using namespace parity_lab;
  const double c0 = argc > 1 ? std::atof(argv[1]) : 1.0;
  const ParitySpec spec(2, 1, 2);
  const PdTable table(1000, spec);

  std::cout << "n,exact,main/exact,two-term/exact\n";
  for (int n = 100; n <= 1000; n += 100) {
    const BigCount exact = table.distribution(n).count_at_least(static_cast<double>(threshold(c0, n).ceil_value));
    const LogScaledValue e = LogScaledValue::from_exact(exact);
    const EstimateTerms est = estimate_thm2(n, spec, c0);
    std::cout << n << ',' << exact << ',' << est.main.ratio_to(e) << ',' << est.total.ratio_to(e) << '\n';
  }
}
