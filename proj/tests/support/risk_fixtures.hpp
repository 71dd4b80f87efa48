#pragma once

// Hand-built PnL samples with known VaR/ES and breach counts.

#include <vector>

#include "cgan/risk.hpp"

namespace cgan::testing {

struct HsFixture {
  const char* name;
  std::vector<double> pnl;
  double level;
  double var;
  double es;
};

inline std::vector<HsFixture> hs_fixtures() {
  std::vector<HsFixture> out;

  // ceil(0.01 * 100) = 1: the VaR is the smallest value and the tail holds only it.
  std::vector<double> spike(100, 0.0);
  spike[0] = -10.0;
  spike[1] = -1.0;
  out.push_back({"spike", spike, 0.99, -10.0, -10.0});

  // ceil(0.05 * 100) = 5: VaR is the 5th order statistic, ES the mean of 1..5.
  std::vector<double> ramp;
  for (int i = 100; i >= 1; --i) ramp.push_back(i);
  out.push_back({"ramp", ramp, 0.95, 5.0, 3.0});

  out.push_back({"constant", std::vector<double>(100, -2.5), 0.99, -2.5, -2.5});

  // Ties at the VaR boundary all enter the tail mean: {-7, -3, -3, then 97 zeros}
  // at level 0.98 gives VaR = -3 (2nd order statistic), ES = mean{-7, -3, -3}.
  std::vector<double> ties(100, 0.0);
  ties[10] = -7.0;
  ties[20] = -3.0;
  ties[30] = -3.0;
  out.push_back({"ties", ties, 0.98, -3.0, -13.0 / 3.0});
  return out;
}

// 1,000 realized days against a model VaR of -5 at level 0.99: exactly 8
// values fall strictly below it, plus two sitting on the boundary.
inline std::vector<double> planted_breach_series() {
  std::vector<double> pnl;
  for (int t = 0; t < 1000; ++t) pnl.push_back(-4.0 + 9.0 * ((t * 37) % 1000) / 1000.0);
  const int breach_days[] = {3, 101, 257, 400, 512, 640, 777, 999};
  for (int k = 0; k < 8; ++k) pnl[static_cast<std::size_t>(breach_days[k])] = -5.5 - k;
  pnl[50] = -5.0;
  pnl[600] = -5.0;
  return pnl;
}

inline risk::RiskReport planted_breach_report() {
  risk::RiskReport r;
  r.var = -5.0;
  r.es = -6.0;
  r.level = 0.99;
  r.sample_size = 1000;
  return r;
}

}  // namespace cgan::testing
