#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kkldm {

/// A number partitioning instance of fixed-point values: value / 2^bits lies in [0, 1).
class Instance {
 public:
  /// Throws ValidationError("empty instance") for an empty list and when a
  /// value is negative or does not fit in `bits` bits.
  Instance(std::vector<mpz_class> values, unsigned bits);

  /// Small hand-written instances; `bits` defaults to the smallest width that fits.
  static Instance of(std::initializer_list<unsigned long> values, unsigned bits = 0);

  std::size_t size() const { return values_.size(); }
  unsigned bits() const { return bits_; }
  const std::vector<mpz_class>& values() const { return values_; }
  const mpz_class& operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<mpz_class> values_;
  unsigned bits_;
};

/// Two-way split: in_a[i] tells whether item i is on side A.
struct Partition {
  std::vector<bool> in_a;
  mpz_class discrepancy;
};

/// |sum over A - sum over complement|.
mpz_class discrepancy_of(const Instance& instance, const std::vector<bool>& in_a);

/// Bookkeeping of the differencing run: one node per item, an edge each
/// time a root x absorbs the root y it was differenced with.
struct DiffForest {
  std::vector<std::int64_t> parent;  // -1 for roots
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<mpz_class> label;  // current label, meaningful for roots

  std::size_t root_count() const;
  /// Root of the tree containing `node`.
  std::uint32_t find_root(std::uint32_t node) const;
  /// Side labels from a two-coloring of the spanning tree; the root is on side A.
  /// Requires a single tree.
  std::vector<bool> two_coloring() const;
};

/// Runs LDM with full tree bookkeeping.
DiffForest ldm_forest(const Instance& instance);

/// LDM partition; the discrepancy is the label of the final root.
Partition ldm(const Instance& instance);

/// Paired differencing: sort descending, difference positions (1,2),(3,4),...
/// in parallel, carry an odd leftover, repeat until one value remains.
mpz_class pdm(const Instance& instance);

inline constexpr std::size_t kBruteForceMaxN = 30;

/// Exhaustive minimum over all 2^(n-1) sign assignments (item 0 fixed on side A).
/// Throws ResourceLimitError above kBruteForceMaxN.
Partition brute_force_optimum(const Instance& instance);

/// Guard-bit policy for uniform simulations: max(64, ceil(3 ln^2 n / (2 ln 2) / ln 2) + 64).
unsigned default_bits(std::size_t n);

/// Largest supported simulation bit width (the fixed-width kernels top out here).
inline constexpr unsigned kMaxSimBits = 1024;

struct SimConfig {
  std::size_t n = 0;
  unsigned bits = 0;  // 0 selects default_bits(n)
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  unsigned effective_bits() const { return bits == 0 ? default_bits(n) : bits; }
  /// Throws ValidationError / ResourceLimitError.
  void validate() const;
};

/// The instance drawn for trial `trial`: n independent uniform `bits`-bit integers
/// from the (seed, trial) stream.
Instance random_instance(const SimConfig& config, std::uint64_t trial);

/// Aggregated Monte Carlo output. `samples` holds each trial's value rescaled
/// by 2^-bits, in trial order.
struct SimResult {
  SimConfig config;
  unsigned bits = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t zero_count = 0;
  bool resolution_warning = false;  // more than 1% of trials ended at exactly zero
  std::vector<double> samples;
};

/// <L_n> over random instances. Trials run under OpenMP; the result is
/// identical to sample_mean_ldm_reference for the same config.
SimResult sample_mean_ldm(const SimConfig& config);
/// Serial reference built on random_instance + ldm().
SimResult sample_mean_ldm_reference(const SimConfig& config);

/// Same protocol with PDM instead of LDM.
SimResult sample_mean_pdm(const SimConfig& config);
SimResult sample_mean_pdm_reference(const SimConfig& config);

}  // namespace kkldm
