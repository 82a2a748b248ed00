#pragma once

#include <stdexcept>
#include <string>

namespace fanno {

/// Non-physical or out-of-range input to a thermodynamic or flow relation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation too close to M = 1, where the Fanno relations are singular.
class SonicSingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The requested duct is at least as long as the maximal (choking) length.
class ChokingError : public DomainError {
 public:
  ChokingError(const std::string& what, double max_length)
      : DomainError(what), max_length_(max_length) {}
  double max_length() const noexcept { return max_length_; }

 private:
  double max_length_;
};

/// The background is in the wrong regime (e.g. supersonic where subsonic is required).
class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Array or grid dimensions disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Fourier mode is (numerically) resonant: its S-Condition quantity is below threshold.
class NearResonanceError : public std::runtime_error {
 public:
  NearResonanceError(const std::string& what, int parity, int m1, int m2, double vartheta)
      : std::runtime_error(what), parity_(parity), m1_(m1), m2_(m2), vartheta_(vartheta) {}
  int parity() const noexcept { return parity_; }
  int m1() const noexcept { return m1_; }
  int m2() const noexcept { return m2_; }
  double vartheta() const noexcept { return vartheta_; }

 private:
  int parity_, m1_, m2_;
  double vartheta_;
};

/// A failure inside one stage of the fixed-point mapping, tagged with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace fanno
