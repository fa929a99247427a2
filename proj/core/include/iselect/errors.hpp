#pragma once

#include <stdexcept>
#include <string>

namespace iselect {

/// Base class for failures that carry physical meaning (a resonance, an empty
/// ensemble, a degenerate configuration). Precondition violations on plain
/// arguments are reported with std::invalid_argument instead.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  /// Stable identifier, e.g. "ResonantDetuning".
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define ISELECT_DOMAIN_ERROR(Type)                                  \
  class Type : public DomainError {                                 \
   public:                                                          \
    explicit Type(const std::string& what) : DomainError(#Type, what) {} \
  }

// diamond_core
ISELECT_DOMAIN_ERROR(ResonantDetuning);
// two_mode_coherence
ISELECT_DOMAIN_ERROR(TruncationTooTight);
ISELECT_DOMAIN_ERROR(DegenerateSelection);
ISELECT_DOMAIN_ERROR(ZeroVariance);
// velocity_selection
ISELECT_DOMAIN_ERROR(NoSelection);
ISELECT_DOMAIN_ERROR(AllAtomsLost);
// hydrogen_raman
ISELECT_DOMAIN_ERROR(AtResonance);
ISELECT_DOMAIN_ERROR(NoSignChange);
// subrecoil_mc
ISELECT_DOMAIN_ERROR(InsufficientEpisodes);

#undef ISELECT_DOMAIN_ERROR

}  // namespace iselect
