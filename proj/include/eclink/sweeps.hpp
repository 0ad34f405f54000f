#pragma once

// Deterministic parameter sweeps emitted as CSV-ready tables.  Grids and
// source parameterizations are pinned (documented per figure below) so a
// given build of the library always produces identical files.
//
// Burstiness parameterization shared by the sweeps: a single knob
// P_ON in (0, 1] sets DTMS p11 = 1 - P_ON, p22 = P_ON (memoryless chain)
// and FMS/MMPS alpha = P_ON, beta = 1 - P_ON (so alpha + beta = 1, one
// expected transition per block).

#include <cstdint>
#include <string>
#include <vector>

namespace eclink {

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells preformatted (%.9g)
};

// Maximum average arrival rate vs effective capacity, one column per
// source model.  Grid: ec in [0.1, 2.0], theta = 1, P_ON = 0.2 family.
// Columns: ec, lambda_avg_dtms, lambda_avg_fms, lambda_avg_mmps.
SweepTable sweep_fig3(int points = 40);

// Maximum average arrival rate vs transmission rate at 10 dB, theta = 1,
// P_ON = 0.2 family.  Grid: r in (0, 8].
// Columns: rate, ec, lambda_avg_dtms, lambda_avg_fms, lambda_avg_mmps.
SweepTable sweep_fig4(int points = 400);

// Maximum ON arrival rate vs P_ON at theta = 1 for snr in {0, 10, 20} dB,
// each link at its optimal rate.  Grid: P_ON in [0.05, 1.0].
// Columns: snr_db, p_on, ec_star, lambda_on_dtms, lambda_on_fms, lambda_on_mmps.
SweepTable sweep_fig5(int points = 20);

// Delay-violation bound (zeta = 1) vs each driver, three panels:
//   panel "snr_db": DTMS P_ON = 0.5, lambda_on = 0.6, snr 0..20 dB,
//                   rate r*(snr, 1), theta* solved per point;
//   panel "theta":  same source, 10 dB, rate r*(10 dB, 1), bound
//                   zeta*exp(-theta a(theta) d) straight from the exponent;
//   panel "p_on":   10 dB, rate r*(10 dB, 1), fixed lambda_avg = 1
//                   (lambda_on = 1/P_ON), theta* solved per point.
// Columns: panel, x, theta_used, eb_used, delay_violation.
SweepTable sweep_fig6(int points = 25, double delay_threshold = 5.0);

// 9-significant-digit number formatting shared by every CSV writer.
std::string format_g9(double value);

void write_csv(const SweepTable& table, const std::string& path);

}  // namespace eclink
