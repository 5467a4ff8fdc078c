#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sprayer {

struct CalcReference {
  double value;
  std::string note;
};

struct CalcResult {
  std::string kind;
  double value = 0.0;
  std::string unit;
  std::vector<CalcReference> references;  // reference figures for these inputs
  std::string formula;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Closed-form calculators:
//   backup    <capacity_ah> <draw_a>          hours of operation per charge
//   charge    <capacity_ah> <current_a>       hours to full from empty
//   workspace <r_min_in> <r_max_in>           nozzle annulus, in^2
//   pitch     <offset_in> <arm_in> <deg>      height gained by nozzle pitch, in
//   cone      <radius_in> <slant_in>          cone total surface area, in^2
//   mower     <sweep_radius_m>                stationary cut area, m^2
//   panel     <power_w> <voltage_v>           panel current, A
// Throws UsageError for an unknown kind, wrong arity or bad numbers.
CalcResult calculate(const std::string& kind, const std::vector<std::string>& params);

std::string format_calc(const CalcResult& r);

std::vector<std::string> calc_kinds();

}  // namespace sprayer
