#pragma once

// Closed-form effective bandwidth a(theta) for each source model:
// the minimum constant service rate that sustains the source under an
// exponential tail constraint with exponent theta.  All results in
// bits/block; theta below kSmallTheta returns the analytic limit
// lambda_avg for every variant.

#include "eclink/types.hpp"

namespace eclink {

double eb_dtms(const DtmsSource& source, double theta);
double eb_fms(const FmsSource& source, double theta);
double eb_mmps(const MmpsSource& source, double theta);

// Dispatch on the variant.
double effective_bandwidth(const SourceModel& source, double theta);

}  // namespace eclink
