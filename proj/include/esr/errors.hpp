#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace esr {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A value is outside its legal range: nonpositive channel rate, backhaul
// reliability outside [0,1], bad special-function argument, malformed sweep
// spec, and so on.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Two scaled channel-ratio products (nearly) coincide. The closed forms
// divide by their pairwise differences, so such configs are rejected up
// front instead of silently producing garbage.
class DegenerateProducts : public Error {
 public:
  struct Collision {
    int source_k;      // 0-based
    int multiplier_p;  // p * a_k ...
    int source_j;
    int multiplier_q;  // ... collides with q * a_j
  };

  DegenerateProducts(const std::string& what, std::vector<Collision> collisions)
      : Error(what), collisions_(std::move(collisions)) {}

  const std::vector<Collision>& collisions() const { return collisions_; }

 private:
  std::vector<Collision> collisions_;
};

// A combinatorial expansion would exceed the configured term budget.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

// Slope is zero (every backhaul link is always down), so the high-SNR
// power offset is undefined.
class DegenerateAsymptote : public Error {
 public:
  using Error::Error;
};

}  // namespace esr
