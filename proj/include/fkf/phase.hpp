#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace fkf {

namespace detail {
constexpr int mod(int a, int m) { return ((a % m) + m) % m; }

// cos(k pi / 8) for k = 0..15, exact to the last bit of the literal.
inline constexpr std::array<double, 16> kCosSixteenth = {
    1.0,
    0.92387953251128673848,
    0.70710678118654752440,
    0.38268343236508977173,
    0.0,
    -0.38268343236508977173,
    -0.70710678118654752440,
    -0.92387953251128673848,
    -1.0,
    -0.92387953251128673848,
    -0.70710678118654752440,
    -0.38268343236508977173,
    0.0,
    0.38268343236508977173,
    0.70710678118654752440,
    0.92387953251128673848,
};
}  // namespace detail

// The unit complex e^{i k pi/8}, k mod 16.
class PhaseSixteenth {
 public:
  constexpr PhaseSixteenth() = default;
  constexpr explicit PhaseSixteenth(int k) : k_(detail::mod(k, 16)) {}

  constexpr int k() const { return k_; }
  constexpr PhaseSixteenth operator*(PhaseSixteenth o) const { return PhaseSixteenth(k_ + o.k_); }
  constexpr PhaseSixteenth conj() const { return PhaseSixteenth(-k_); }
  constexpr bool operator==(const PhaseSixteenth&) const = default;

  double real() const { return detail::kCosSixteenth[k_]; }
  double imag() const { return detail::kCosSixteenth[detail::mod(k_ - 4, 16)]; }
  std::complex<double> value() const { return {real(), imag()}; }

 private:
  int k_ = 0;
};

// The unit complex e^{i k pi/4}, k mod 8.
class PhaseEighth {
 public:
  constexpr PhaseEighth() = default;
  constexpr explicit PhaseEighth(int k) : k_(detail::mod(k, 8)) {}

  constexpr int k() const { return k_; }
  constexpr PhaseEighth operator*(PhaseEighth o) const { return PhaseEighth(k_ + o.k_); }
  constexpr PhaseEighth operator/(PhaseEighth o) const { return PhaseEighth(k_ - o.k_); }
  constexpr PhaseEighth conj() const { return PhaseEighth(-k_); }
  constexpr bool operator==(const PhaseEighth&) const = default;

  constexpr PhaseSixteenth as_sixteenth() const { return PhaseSixteenth(2 * k_); }
  // Principal square root: argument in (-pi/2, pi/2].
  constexpr PhaseSixteenth principal_sqrt() const { return PhaseSixteenth(k_ <= 4 ? k_ : k_ - 8); }
  std::complex<double> value() const { return as_sixteenth().value(); }

 private:
  int k_ = 0;
};

// Winding in quarter turns: w = q pi/2, q = n_right - n_left.
struct QuarterTurns {
  int q = 0;
  constexpr bool operator==(const QuarterTurns&) const = default;
};

}  // namespace fkf
