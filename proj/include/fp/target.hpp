#pragma once

#include <string>
#include <vector>

#include "fp/grid.hpp"

namespace fp {

/// One sinusoid amplitude * sin(angular_frequency * x).
struct Tone {
  double angular_frequency = 0.0;
  double amplitude = 0.0;
  bool operator==(const Tone&) const = default;
};

/// Scalar target function on the truncation domain. paper_multitone is the
/// harmonic sum  sum_{j=1..J} sin(j x / 10) / j.
struct TargetFunction {
  enum class Kind { tone_sum, paper_multitone, custom_table };

  Kind kind = Kind::tone_sum;
  std::vector<Tone> tones;
  int harmonic_count = 0;     // J for paper_multitone
  SampledField table;         // custom_table, linear interpolation, 0 outside

  double eval(double x) const;
  void validate() const;

  bool operator==(const TargetFunction&) const = default;

  static TargetFunction tone_sum(std::vector<Tone> tones);
  static TargetFunction paper_multitone(int count);
  static TargetFunction custom_table(SampledField table);
};

std::string to_string(TargetFunction::Kind k);
TargetFunction::Kind target_kind_from_string(const std::string& name);

}  // namespace fp
