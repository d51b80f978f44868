#pragma once

// Continuous-time interchange process on K_n: every unordered pair swaps at
// rate 1, so the total event rate is n(n-1)/2. The permutation is kept with
// incremental cycle bookkeeping, optionally coupled with the Erdos-Renyi graph
// of all pairs that have swapped so far.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace interchange::sim {

/// SplitMix64: counter-based 64-bit generator, output = mix(seed + i * gamma).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Seed of replica `index`; independent of scheduling.
constexpr std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t index) {
  return SplitMix64::mix(base_seed ^ SplitMix64::mix(index + 0x632be59bd9b4e019ULL));
}

/// Permutation of {0,...,n-1} with per-element cycle labels and a histogram of cycle sizes.
/// Single-threaded use only.
class CycleState {
 public:
  /// The identity permutation on n >= 1 points.
  explicit CycleState(int n);

  int size() const { return n_; }
  int successor(int i) const { return succ_[static_cast<std::size_t>(i)]; }
  int cycle_label(int i) const { return label_[static_cast<std::size_t>(i)]; }
  int label_size(int label) const { return label_size_[static_cast<std::size_t>(label)]; }

  /// Composes with the transposition (i j). Returns true if two cycles merged,
  /// false if one cycle split. Throws std::invalid_argument if i == j or out of range.
  bool apply_transposition(int i, int j);

  int cycle_count() const { return cycles_; }           // N
  int distance() const { return n_ - cycles_; }         // Cayley distance to the identity
  int count_of_size(int k) const;                       // s_k
  int longest_cycle() const { return longest_; }        // C
  /// X_n(eps) = (1/n) sum_{k >= n eps} k s_k.
  double large_cycle_mass(double eps) const;
  /// size_counts()[k] = number of k-cycles, k = 0..n.
  std::span<const int> size_counts() const { return size_count_; }

  /// Verifies the bijection, label and histogram invariants; throws std::logic_error.
  void check_invariants() const;

 private:
  void relabel_walk(int from, int stop_after, int label);

  int n_;
  int cycles_;
  int longest_;
  std::vector<int> succ_;
  std::vector<int> label_;
  std::vector<int> label_size_;
  std::vector<int> size_count_;
  std::vector<int> free_labels_;
};

/// Union-find over the vertices of the coupled random graph.
class CoupledGraph {
 public:
  explicit CoupledGraph(int n);

  int size() const { return static_cast<int>(parent_.size()); }
  void add_edge(int i, int j);
  int find(int v);
  int component_size(int v) { return size_[static_cast<std::size_t>(find(v))]; }
  int largest_component() const { return largest_; }
  int component_count() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int largest_ = 1;
  int components_;
};

int largest_component(const CoupledGraph& graph);

struct PathOptions {
  bool couple_graph = false;
#ifdef NDEBUG
  bool check_every_event = false;
#else
  bool check_every_event = true;
#endif
};

struct PathSample {
  CycleState state;
  std::optional<CoupledGraph> graph;
  std::int64_t events = 0;
};

/// Runs the process for time t: Poisson(t n(n-1)/2) uniform transpositions.
PathSample sample_path(int n, double t, SplitMix64& rng, const PathOptions& options = {});

/// Identity on n points.
inline CycleState new_identity(int n) { return CycleState(n); }

struct ReplicaResult {
  std::uint64_t seed = 0;
  std::int64_t events = 0;
  std::vector<int> s_k;  // aligned with MonteCarloConfig::k_list
  int cycles = 0;        // N
  int distance = 0;      // d = n - N
  int longest = 0;       // C
  double large_mass = 0.0;      // X_n(eps)
  int largest_component = -1;   // Y_n, -1 when not coupled
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  int replicas = 0;
  std::uint64_t base_seed = 0;
};

/// mean and sample-stdev/sqrt(R) of values; needs at least two values.
Estimate estimate(std::span<const double> values, std::uint64_t base_seed);

struct MonteCarloConfig {
  int n = 0;
  double t = 0.0;
  std::vector<int> k_list;
  double epsilon = 0.1;
  int replicas = 2;
  std::uint64_t base_seed = 0;
  bool couple_graph = false;
  int threads = 0;  // 0: INTERCHANGE_THREADS or hardware concurrency
};

struct MonteCarloResult {
  MonteCarloConfig config;
  std::vector<ReplicaResult> replicas;                    // by replica index
  std::vector<std::pair<std::string, Estimate>> estimates; // fixed order

  /// Throws std::out_of_range for unknown names.
  const Estimate& at(const std::string& name) const;
};

/// Replica `index` of a run; the building block of monte_carlo.
ReplicaResult run_replica(const MonteCarloConfig& config, int index);

/// Estimates, in order: events, s_<k> for each k, N, d, C, X_eps, and Y_frac (= Y_n/n) if coupled.
MonteCarloResult monte_carlo(const MonteCarloConfig& config);

/// INTERCHANGE_THREADS if set and positive, else std::thread::hardware_concurrency().
int default_thread_count();

}  // namespace interchange::sim
