#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <gmpxx.h>

namespace kkldm {

/// Fixed-width unsigned integer of `Limbs` 64-bit words, little endian.
/// Only what differencing needs: ordering, subtraction of a smaller value,
/// random fill and conversion to GMP.
template <std::size_t Limbs>
struct WideUInt {
  static_assert(Limbs >= 1);
  std::array<std::uint64_t, Limbs> limb{};

  friend bool operator==(const WideUInt&, const WideUInt&) = default;

  friend bool operator<(const WideUInt& a, const WideUInt& b) {
    for (std::size_t i = Limbs; i-- > 0;) {
      if (a.limb[i] != b.limb[i]) return a.limb[i] < b.limb[i];
    }
    return false;
  }

  bool is_zero() const {
    for (auto w : limb) {
      if (w != 0) return false;
    }
    return true;
  }

  /// *this -= rhs; requires rhs <= *this.
  void subtract(const WideUInt& rhs) {
    unsigned char borrow = 0;
    for (std::size_t i = 0; i < Limbs; ++i) {
      const std::uint64_t a = limb[i];
      const std::uint64_t b = rhs.limb[i];
      const std::uint64_t d = a - b - borrow;
      borrow = (a < b) || (a - b < borrow);
      limb[i] = d;
    }
  }

  /// Fills the low `bits` bits from `gen`, consuming exactly Limbs draws.
  template <class Gen>
  static WideUInt random(Gen& gen, unsigned bits) {
    WideUInt v;
    for (std::size_t i = 0; i < Limbs; ++i) v.limb[i] = gen();
    const unsigned top = bits - 64 * (Limbs - 1);
    if (top < 64) v.limb[Limbs - 1] &= (std::uint64_t{1} << top) - 1;
    return v;
  }

  mpz_class to_mpz() const {
    mpz_class z;
    mpz_import(z.get_mpz_t(), Limbs, -1, sizeof(std::uint64_t), 0, 0, limb.data());
    return z;
  }
};

inline constexpr std::size_t kMaxLimbs = 16;

constexpr std::size_t limbs_for_bits(unsigned bits) { return (bits + 63) / 64; }

/// Calls `f.template operator()<L>()` with L = limbs_for_bits(bits).
/// Bit widths above 64 * kMaxLimbs are rejected by the caller.
template <class F>
decltype(auto) with_limbs(unsigned bits, F&& f) {
  switch (limbs_for_bits(bits)) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    case 4: return f.template operator()<4>();
    case 5: return f.template operator()<5>();
    case 6: return f.template operator()<6>();
    case 7: return f.template operator()<7>();
    case 8: return f.template operator()<8>();
    case 9: return f.template operator()<9>();
    case 10: return f.template operator()<10>();
    case 11: return f.template operator()<11>();
    case 12: return f.template operator()<12>();
    case 13: return f.template operator()<13>();
    case 14: return f.template operator()<14>();
    case 15: return f.template operator()<15>();
    default: return f.template operator()<16>();
  }
}

}  // namespace kkldm
