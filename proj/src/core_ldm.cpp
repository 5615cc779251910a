#include "kkldm/core_ldm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "kkldm/errors.hpp"
#include "kkldm/rng.hpp"
#include "kkldm/stable_heap.hpp"
#include "kkldm/wide_uint.hpp"

namespace kkldm {

namespace {

struct MpzKey {
  mpz_class value;
  friend bool operator<(const MpzKey& a, const MpzKey& b) { return cmp(a.value, b.value) < 0; }
};

double scaled_to_double(const mpz_class& v, unsigned bits) {
  if (v == 0) return 0.0;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::ldexp(mant, static_cast<int>(exp) - static_cast<int>(bits));
}

// Exact accumulation of sum and sum of squares; the order of trials does not
// matter for the result.
SimResult aggregate(const SimConfig& config, unsigned bits,
                    const std::function<mpz_class(std::size_t)>& value_of) {
  SimResult r;
  r.config = config;
  r.bits = bits;
  r.samples.resize(config.trials);
  mpz_class sum = 0;
  mpz_class sum_sq = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const mpz_class v = value_of(t);
    sum += v;
    sum_sq += v * v;
    if (v == 0) ++r.zero_count;
    r.samples[t] = scaled_to_double(v, bits);
  }
  const mpz_class trials = static_cast<unsigned long>(config.trials);
  mpq_class mean(sum, trials);
  mean.canonicalize();
  mpz_class scale = 1;
  mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
  mpq_class mean_scaled = mean / scale;
  r.mean = mean_scaled.get_d();
  if (config.trials > 1) {
    // var = (T sum_sq - sum^2) / (T (T-1)) / 4^bits
    mpz_class num = trials * sum_sq - sum * sum;
    mpz_class den = trials * (trials - 1) * trials * scale * scale;  // includes 1/T for the stderr
    mpq_class se2(num, den);
    se2.canonicalize();
    r.stderr_mean = std::sqrt(se2.get_d());
  }
  r.resolution_warning = r.zero_count * 100 > config.trials;
  return r;
}

template <std::size_t L>
WideUInt<L> run_ldm(StableMaxHeap<WideUInt<L>>& heap) {
  while (heap.size() > 1) {
    auto x = heap.pop();
    x.key.subtract(heap.top().key);
    heap.replace_top(x.key, x.id);
  }
  return heap.top().key;
}

template <std::size_t L>
WideUInt<L> run_pdm(std::vector<WideUInt<L>>& values, std::vector<WideUInt<L>>& scratch) {
  while (values.size() > 1) {
    std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return b < a; });
    scratch.clear();
    std::size_t i = 0;
    for (; i + 1 < values.size(); i += 2) {
      WideUInt<L> d = values[i];
      d.subtract(values[i + 1]);
      scratch.push_back(d);
    }
    if (i < values.size()) scratch.push_back(values[i]);
    values.swap(scratch);
  }
  return values.front();
}

template <std::size_t L, class Kernel>
SimResult simulate_fast(const SimConfig& config, unsigned bits, Kernel kernel) {
  std::vector<WideUInt<L>> result(config.trials);
  const auto trials = static_cast<std::int64_t>(config.trials);
#pragma omp parallel
  {
    std::vector<WideUInt<L>> values;
    values.reserve(config.n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t t = 0; t < trials; ++t) {
      TrialRng rng(config.seed, static_cast<std::uint64_t>(t));
      values.clear();
      for (std::size_t i = 0; i < config.n; ++i) values.push_back(WideUInt<L>::random(rng, bits));
      result[static_cast<std::size_t>(t)] = kernel(values);
    }
  }
  return aggregate(config, bits, [&](std::size_t t) { return result[t].to_mpz(); });
}

}  // namespace

Instance::Instance(std::vector<mpz_class> values, unsigned bits) : values_(std::move(values)), bits_(bits) {
  if (values_.empty()) throw ValidationError("empty instance");
  for (const auto& v : values_) {
    if (sgn(v) < 0) throw ValidationError("instance values must be nonnegative");
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > bits_ && v != 0) {
      throw ValidationError("instance value does not fit in " + std::to_string(bits_) + " bits");
    }
  }
}

Instance Instance::of(std::initializer_list<unsigned long> values, unsigned bits) {
  std::vector<mpz_class> v;
  unsigned need = 1;
  for (auto x : values) {
    v.emplace_back(x);
    unsigned width = 0;
    while (width < 64 && (x >> width) != 0) ++width;
    need = std::max(need, width);
  }
  return Instance(std::move(v), bits == 0 ? need : bits);
}

mpz_class discrepancy_of(const Instance& instance, const std::vector<bool>& in_a) {
  if (in_a.size() != instance.size()) throw ValidationError("partition size does not match instance");
  mpz_class d = 0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (in_a[i]) {
      d += instance[i];
    } else {
      d -= instance[i];
    }
  }
  return abs(d);
}

std::size_t DiffForest::root_count() const {
  return static_cast<std::size_t>(std::count(parent.begin(), parent.end(), -1));
}

std::uint32_t DiffForest::find_root(std::uint32_t node) const {
  while (parent[node] >= 0) node = static_cast<std::uint32_t>(parent[node]);
  return node;
}

std::vector<bool> DiffForest::two_coloring() const {
  const std::size_t n = parent.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> in_a(n, false);
  std::vector<bool> seen(n, false);
  std::vector<std::uint32_t> stack{find_root(0)};
  seen[stack.front()] = true;
  in_a[stack.front()] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      in_a[v] = !in_a[u];
      stack.push_back(v);
    }
  }
  return in_a;
}

DiffForest ldm_forest(const Instance& instance) {
  const std::size_t n = instance.size();
  DiffForest forest;
  forest.parent.assign(n, -1);
  forest.label = instance.values();
  forest.edges.reserve(n - 1);

  StableMaxHeap<MpzKey> heap;
  heap.reserve(n);
  for (std::size_t i = 0; i < n; ++i) heap.append({instance[i]}, static_cast<std::uint32_t>(i));
  heap.heapify();
  while (heap.size() > 1) {
    auto x = heap.pop();
    const auto& y = heap.top();
    forest.edges.emplace_back(x.id, y.id);
    forest.parent[y.id] = x.id;
    x.key.value -= y.key.value;
    forest.label[x.id] = x.key.value;
    heap.replace_top(x.key, x.id);
  }
  return forest;
}

Partition ldm(const Instance& instance) {
  const DiffForest forest = ldm_forest(instance);
  Partition p;
  p.in_a = forest.two_coloring();
  p.discrepancy = forest.label[forest.find_root(0)];
  return p;
}

mpz_class pdm(const Instance& instance) {
  std::vector<mpz_class> values = instance.values();
  std::vector<mpz_class> next;
  while (values.size() > 1) {
    std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return cmp(a, b) > 0; });
    next.clear();
    std::size_t i = 0;
    for (; i + 1 < values.size(); i += 2) next.push_back(values[i] - values[i + 1]);
    if (i < values.size()) next.push_back(values[i]);
    values.swap(next);
  }
  return values.front();
}

Partition brute_force_optimum(const Instance& instance) {
  const std::size_t n = instance.size();
  if (n > kBruteForceMaxN) throw ResourceLimitError("instance too large for exhaustive search");

  // Gray-code walk over the sign of items 1..n-1; item 0 stays on side A.
  // The signed sum fits in 128 bits whenever bits + log2(n) + 1 < 127.
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::uint64_t best_mask = 0;
  if (instance.bits() + 6 < 126) {
    std::vector<__int128> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t words[2] = {0, 0};
      mpz_export(words, nullptr, -1, sizeof(std::uint64_t), 0, 0, instance[i].get_mpz_t());
      a[i] = static_cast<__int128>(static_cast<unsigned __int128>(words[1]) << 64 | words[0]);
    }
    __int128 sum = 0;
    for (auto v : a) sum -= v;
    sum += 2 * a[0];
    auto absval = [](__int128 v) { return v < 0 ? -v : v; };
    __int128 best = absval(sum);
    std::uint64_t mask = 0;
    for (std::uint64_t g = 1; g < count && best != 0; ++g) {
      const int bit = __builtin_ctzll(g);
      const std::size_t item = static_cast<std::size_t>(bit) + 1;
      mask ^= std::uint64_t{1} << bit;
      sum += (mask >> bit & 1) ? 2 * a[item] : -2 * a[item];
      if (absval(sum) < best) {
        best = absval(sum);
        best_mask = mask;
      }
    }
  } else {
    mpz_class sum = 0;
    for (const auto& v : instance.values()) sum -= v;
    sum += 2 * instance[0];
    mpz_class best = abs(sum);
    std::uint64_t mask = 0;
    for (std::uint64_t g = 1; g < count && best != 0; ++g) {
      const int bit = __builtin_ctzll(g);
      const std::size_t item = static_cast<std::size_t>(bit) + 1;
      mask ^= std::uint64_t{1} << bit;
      if (mask >> bit & 1) {
        sum += 2 * instance[item];
      } else {
        sum -= 2 * instance[item];
      }
      if (cmp(abs(sum), best) < 0) {
        best = abs(sum);
        best_mask = mask;
      }
    }
  }

  Partition p;
  p.in_a.assign(n, false);
  p.in_a[0] = true;
  for (std::size_t i = 1; i < n; ++i) p.in_a[i] = (best_mask >> (i - 1)) & 1;
  p.discrepancy = discrepancy_of(instance, p.in_a);
  return p;
}

unsigned default_bits(std::size_t n) {
  if (n < 2) return 64;
  const double ln_n = std::log(static_cast<double>(n));
  const double scale_bits = 3.0 * ln_n * ln_n / (2.0 * std::log(2.0)) / std::log(2.0);
  return std::max(64u, static_cast<unsigned>(std::ceil(scale_bits)) + 64u);
}

void SimConfig::validate() const {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  const unsigned b = effective_bits();
  if (b < 1) throw ValidationError("bits must be positive");
  if (b > kMaxSimBits) {
    throw ResourceLimitError("bit width " + std::to_string(b) + " exceeds the simulation limit of " +
                             std::to_string(kMaxSimBits));
  }
}

Instance random_instance(const SimConfig& config, std::uint64_t trial) {
  const unsigned bits = config.effective_bits();
  const std::size_t limbs = limbs_for_bits(bits);
  const unsigned top = bits - 64 * static_cast<unsigned>(limbs - 1);
  TrialRng rng(config.seed, trial);
  std::vector<mpz_class> values(config.n);
  std::vector<std::uint64_t> words(limbs);
  for (auto& v : values) {
    for (auto& w : words) w = rng();
    if (top < 64) words.back() &= (std::uint64_t{1} << top) - 1;
    mpz_import(v.get_mpz_t(), limbs, -1, sizeof(std::uint64_t), 0, 0, words.data());
  }
  return Instance(std::move(values), bits);
}

SimResult sample_mean_ldm(const SimConfig& config) {
  config.validate();
  const unsigned bits = config.effective_bits();
  return with_limbs(bits, [&]<std::size_t L>() {
    return simulate_fast<L>(config, bits, [](std::vector<WideUInt<L>>& values) {
      thread_local StableMaxHeap<WideUInt<L>> heap;
      heap.clear();
      heap.reserve(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) heap.append(values[i], static_cast<std::uint32_t>(i));
      heap.heapify();
      return run_ldm<L>(heap);
    });
  });
}

SimResult sample_mean_ldm_reference(const SimConfig& config) {
  config.validate();
  std::vector<mpz_class> result(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) result[t] = ldm(random_instance(config, t)).discrepancy;
  return aggregate(config, config.effective_bits(), [&](std::size_t t) { return result[t]; });
}

SimResult sample_mean_pdm(const SimConfig& config) {
  config.validate();
  const unsigned bits = config.effective_bits();
  return with_limbs(bits, [&]<std::size_t L>() {
    return simulate_fast<L>(config, bits, [](std::vector<WideUInt<L>>& values) {
      thread_local std::vector<WideUInt<L>> scratch;
      return run_pdm<L>(values, scratch);
    });
  });
}

SimResult sample_mean_pdm_reference(const SimConfig& config) {
  config.validate();
  std::vector<mpz_class> result(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) result[t] = pdm(random_instance(config, t));
  return aggregate(config, config.effective_bits(), [&](std::size_t t) { return result[t]; });
}

}  // namespace kkldm
