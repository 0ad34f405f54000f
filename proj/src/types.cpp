#include "eclink/types.hpp"

namespace eclink {

SteadyState steady_state(const SourceModel& source) {
  return std::visit(
      [](const auto& s) {
        return SteadyState{s.p_on(), s.lambda_on * s.p_on()};
      },
      source);
}

double peak_rate(const SourceModel& source) {
  return std::visit([](const auto& s) { return s.lambda_on; }, source);
}

const char* source_kind(const SourceModel& source) {
  struct Visitor {
    const char* operator()(const DtmsSource&) const { return "dtms"; }
    const char* operator()(const FmsSource&) const { return "fms"; }
    const char* operator()(const MmpsSource&) const { return "mmps"; }
  };
  return std::visit(Visitor{}, source);
}

}  // namespace eclink
