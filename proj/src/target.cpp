#include "fp/target.hpp"

#include <cmath>
#include <stdexcept>

namespace fp {

double TargetFunction::eval(double x) const {
  switch (kind) {
    case Kind::tone_sum: {
      double s = 0.0;
      for (const Tone& t : tones) s += t.amplitude * std::sin(t.angular_frequency * x);
      return s;
    }
    case Kind::paper_multitone: {
      double s = 0.0;
      for (int j = 1; j <= harmonic_count; ++j) s += std::sin(j * x / 10.0) / j;
      return s;
    }
    case Kind::custom_table: {
      const Grid& g = table.grid;
      const double u = (x - g.lo) / g.spacing();
      if (u < 0.0 || u > g.m - 1) return 0.0;
      const int j = std::min(static_cast<int>(u), g.m - 2);
      const double frac = u - j;
      return (1.0 - frac) * table.values[j] + frac * table.values[j + 1];
    }
  }
  throw std::logic_error("unknown target kind");
}

void TargetFunction::validate() const {
  switch (kind) {
    case Kind::tone_sum:
      if (tones.empty()) throw std::invalid_argument("tone_sum target needs at least one tone");
      break;
    case Kind::paper_multitone:
      if (harmonic_count < 1) throw std::invalid_argument("paper_multitone needs a positive count");
      break;
    case Kind::custom_table:
      if (table.values.empty()) throw std::invalid_argument("custom_table target needs samples");
      break;
  }
}

TargetFunction TargetFunction::tone_sum(std::vector<Tone> tones) {
  TargetFunction f;
  f.kind = Kind::tone_sum;
  f.tones = std::move(tones);
  return f;
}

TargetFunction TargetFunction::paper_multitone(int count) {
  TargetFunction f;
  f.kind = Kind::paper_multitone;
  f.harmonic_count = count;
  return f;
}

TargetFunction TargetFunction::custom_table(SampledField table) {
  TargetFunction f;
  f.kind = Kind::custom_table;
  f.table = std::move(table);
  return f;
}

std::string to_string(TargetFunction::Kind k) {
  switch (k) {
    case TargetFunction::Kind::tone_sum: return "tone_sum";
    case TargetFunction::Kind::paper_multitone: return "paper_multitone";
    case TargetFunction::Kind::custom_table: return "custom_table";
  }
  throw std::logic_error("unknown target kind");
}

TargetFunction::Kind target_kind_from_string(const std::string& name) {
  if (name == "tone_sum") return TargetFunction::Kind::tone_sum;
  if (name == "paper_multitone") return TargetFunction::Kind::paper_multitone;
  if (name == "custom_table") return TargetFunction::Kind::custom_table;
  throw std::invalid_argument("unknown target kind: " + name);
}

}  // namespace fp
