#include "sprayer/calc.hpp"

#include <cmath>
#include <cstdio>

#include "sprayer/boom.hpp"
#include "sprayer/power.hpp"
#include "sprayer/spray.hpp"
#include "sprayer/text_util.hpp"
#include "sprayer/units.hpp"

namespace sprayer {

namespace {

std::vector<double> numbers(const std::string& kind, const std::vector<std::string>& params, std::size_t n) {
  if (params.size() != n)
    throw UsageError(kind + " takes " + std::to_string(n) + " parameter" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(params.size()));
  std::vector<double> v;
  for (const auto& p : params) {
    auto d = parse_double(p);
    if (!d) throw UsageError(kind + ": '" + p + "' is not a number");
    v.push_back(*d);
  }
  return v;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

template <typename F>
double guarded(const std::string& kind, F f) {
  try {
    return f();
  } catch (const std::domain_error& e) {
    throw UsageError(kind + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(kind + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> calc_kinds() { return {"backup", "charge", "workspace", "pitch", "cone", "mower", "panel"}; }

CalcResult calculate(const std::string& kind, const std::vector<std::string>& params) {
  CalcResult r;
  r.kind = kind;
  if (kind == "backup") {
    auto p = numbers(kind, params, 2);
    r.value = guarded(kind, [&] { return backup_hours(p[0], p[1]); });
    r.unit = "h";
    r.formula = "capacity / draw";
    if (same(p[0], 4.5) && same(p[1], 0.62)) r.references.push_back({7.25, "prototype backup"});
    if (same(p[0], 4.5) && same(p[1], 1.72)) r.references.push_back({2.61, "conceptual design backup"});
  } else if (kind == "charge") {
    auto p = numbers(kind, params, 2);
    r.value = guarded(kind, [&] { return charge_hours(p[0], p[1]); });
    r.unit = "h";
    r.formula = "capacity / panel current";
    if (same(p[0], 4.5) && same(p[1], 4.5)) r.references.push_back({1.0, "solar charge time"});
  } else if (kind == "workspace") {
    auto p = numbers(kind, params, 2);
    r.value = guarded(kind, [&] { return annulus_area(p[0], p[1]); });
    r.unit = "in^2";
    r.formula = "pi (r_max^2 - r_min^2)";
    if (same(p[0], 12.5) && same(p[1], 32.6)) r.references.push_back({2840.0, "design figure, rounded"});
  } else if (kind == "pitch") {
    auto p = numbers(kind, params, 3);
    r.value = guarded(kind, [&] { return pitch_height_gain(p[0], p[1], p[2]); });
    r.unit = "in";
    r.formula = "sqrt(offset^2 + arm^2) sin(angle)";
    if (same(p[0], 5) && same(p[1], 20) && same(p[2], 60)) r.references.push_back({17.84, "design figure"});
  } else if (kind == "cone") {
    auto p = numbers(kind, params, 2);
    r.value = guarded(kind, [&] { return cone_tsa(p[0], p[1]); });
    r.unit = "in^2";
    r.formula = "pi R L + pi R^2";
    if (same(p[0], 5) && same(p[1], 20.6)) {
      r.references.push_back({411.11, "stated surface area (does not follow from the formula)"});
      r.references.push_back({411.58, "stated spray area (does not follow from the formula)"});
    }
  } else if (kind == "mower") {
    auto p = numbers(kind, params, 1);
    r.value = guarded(kind, [&] { return mower_active_area(p[0]); });
    r.unit = "m^2";
    r.formula = "pi r^2";
    if (same(p[0], 0.31)) {
      r.references.push_back({0.3, "stated cut area, m^2"});
      r.references.push_back({sqin_to_sqm(468.0), "stated cut area 468 in^2, as m^2"});
    }
  } else if (kind == "panel") {
    auto p = numbers(kind, params, 2);
    r.value = guarded(kind, [&] { return panel_current(p[0], p[1]); });
    r.unit = "A";
    r.formula = "power / voltage";
    if (same(p[0], 100) && same(p[1], 21)) r.references.push_back({4.5, "rated charging current"});
  } else {
    std::string kinds;
    for (const auto& k : calc_kinds()) kinds += (kinds.empty() ? "" : "|") + k;
    throw UsageError("unknown calculation '" + kind + "' (" + kinds + ")");
  }
  return r;
}

std::string format_calc(const CalcResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s = %.6g %s    [%s]\n", r.kind.c_str(), r.value, r.unit.c_str(),
                r.formula.c_str());
  std::string out = buf;
  for (const auto& ref : r.references) {
    const double delta = r.value - ref.value;
    std::snprintf(buf, sizeof buf, "  reference %.6g %s (%s): delta %+.4g (%+.3f%%)\n", ref.value, r.unit.c_str(),
                  ref.note.c_str(), delta, ref.value != 0.0 ? 100.0 * delta / ref.value : 0.0);
    out += buf;
  }
  return out;
}

}  // namespace sprayer
