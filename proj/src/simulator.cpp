#include "interchange/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace interchange::sim {

CycleState::CycleState(int n) : n_(n), cycles_(n), longest_(1) {
  if (n < 1) throw std::invalid_argument("CycleState needs n >= 1");
  const auto size = static_cast<std::size_t>(n);
  succ_.resize(size);
  label_.resize(size);
  std::iota(succ_.begin(), succ_.end(), 0);
  std::iota(label_.begin(), label_.end(), 0);
  label_size_.assign(size, 1);
  size_count_.assign(size + 1, 0);
  size_count_[1] = n;
}

int CycleState::count_of_size(int k) const {
  if (k < 1 || k > n_) return 0;
  return size_count_[static_cast<std::size_t>(k)];
}

double CycleState::large_cycle_mass(double eps) const {
  const int start = std::max(1, static_cast<int>(std::ceil(eps * n_)));
  long mass = 0;
  for (int k = start; k <= n_; ++k) mass += static_cast<long>(k) * size_count_[static_cast<std::size_t>(k)];
  return static_cast<double>(mass) / n_;
}

// Labels `from`, succ(from), ... up to and including `stop_after`.
void CycleState::relabel_walk(int from, int stop_after, int label) {
  int v = from;
  for (;;) {
    label_[static_cast<std::size_t>(v)] = label;
    if (v == stop_after) break;
    v = succ_[static_cast<std::size_t>(v)];
  }
}

bool CycleState::apply_transposition(int i, int j) {
  if (i == j) throw std::invalid_argument("apply_transposition: i and j must differ");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::invalid_argument("apply_transposition: index out of range");
  const auto ui = static_cast<std::size_t>(i);
  const auto uj = static_cast<std::size_t>(j);
  const int li = label_[ui];
  const int lj = label_[uj];
  bool merged;

  if (li != lj) {
    // Merge: the smaller cycle takes the other label.
    const int si = label_size_[static_cast<std::size_t>(li)];
    const int sj = label_size_[static_cast<std::size_t>(lj)];
    const bool i_small = si <= sj;
    const int keep = i_small ? lj : li;
    const int drop = i_small ? li : lj;
    const int start = i_small ? i : j;
    int v = start;
    do {
      label_[static_cast<std::size_t>(v)] = keep;
      v = succ_[static_cast<std::size_t>(v)];
    } while (v != start);
    const int total = si + sj;
    label_size_[static_cast<std::size_t>(keep)] = total;
    label_size_[static_cast<std::size_t>(drop)] = 0;
    free_labels_.push_back(drop);
    --size_count_[static_cast<std::size_t>(si)];
    --size_count_[static_cast<std::size_t>(sj)];
    ++size_count_[static_cast<std::size_t>(total)];
    longest_ = std::max(longest_, total);
    --cycles_;
    merged = true;
  } else {
    // Split. After the swap, j's cycle is succ(i)..j and i's cycle is succ(j)..i.
    // Walk both in lockstep; the first to finish is the smaller piece.
    const int whole = label_size_[static_cast<std::size_t>(li)];
    int a = succ_[ui], b = succ_[uj];
    int count_a = 1, count_b = 1;
    bool piece_is_a;
    for (;;) {
      if (a == j) { piece_is_a = true; break; }
      if (b == i) { piece_is_a = false; break; }
      a = succ_[static_cast<std::size_t>(a)];
      b = succ_[static_cast<std::size_t>(b)];
      ++count_a;
      ++count_b;
    }
    const int piece = piece_is_a ? count_a : count_b;
    int fresh;
    if (!free_labels_.empty()) {
      fresh = free_labels_.back();
      free_labels_.pop_back();
    } else {
      throw std::logic_error("CycleState: label pool exhausted");
    }
    if (piece_is_a) relabel_walk(succ_[ui], j, fresh);
    else relabel_walk(succ_[uj], i, fresh);
    label_size_[static_cast<std::size_t>(fresh)] = piece;
    label_size_[static_cast<std::size_t>(li)] = whole - piece;
    --size_count_[static_cast<std::size_t>(whole)];
    ++size_count_[static_cast<std::size_t>(piece)];
    ++size_count_[static_cast<std::size_t>(whole - piece)];
    // The new maximum is at least max(piece, whole - piece), so this scan is O(min piece).
    if (whole == longest_ && size_count_[static_cast<std::size_t>(whole)] == 0) {
      while (size_count_[static_cast<std::size_t>(longest_)] == 0) --longest_;
    }
    ++cycles_;
    merged = false;
  }
  std::swap(succ_[ui], succ_[uj]);
  return merged;
}

void CycleState::check_invariants() const {
  const auto size = static_cast<std::size_t>(n_);
  std::vector<char> seen(size, 0);
  for (int v : succ_) {
    if (v < 0 || v >= n_ || seen[static_cast<std::size_t>(v)]) throw std::logic_error("successor is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  // Orbits: one label per orbit, distinct labels across orbits, sizes match.
  std::vector<char> visited(size, 0), label_used(size, 0);
  std::vector<int> histogram(size + 1, 0);
  int orbits = 0, longest = 0;
  for (int s = 0; s < n_; ++s) {
    if (visited[static_cast<std::size_t>(s)]) continue;
    const int label = label_[static_cast<std::size_t>(s)];
    if (label_used[static_cast<std::size_t>(label)]) throw std::logic_error("label shared by two cycles");
    label_used[static_cast<std::size_t>(label)] = 1;
    int len = 0, v = s;
    do {
      if (label_[static_cast<std::size_t>(v)] != label) throw std::logic_error("label not constant on a cycle");
      visited[static_cast<std::size_t>(v)] = 1;
      ++len;
      v = succ_[static_cast<std::size_t>(v)];
    } while (v != s);
    if (label_size_[static_cast<std::size_t>(label)] != len) throw std::logic_error("label size mismatch");
    ++histogram[static_cast<std::size_t>(len)];
    ++orbits;
    longest = std::max(longest, len);
  }
  if (histogram != size_count_) throw std::logic_error("size histogram mismatch");
  long total = 0, counted = 0;
  for (std::size_t k = 1; k <= size; ++k) {
    total += static_cast<long>(k) * size_count_[k];
    counted += size_count_[k];
  }
  if (total != n_) throw std::logic_error("cycle sizes do not sum to n");
  if (counted != cycles_ || orbits != cycles_) throw std::logic_error("cycle count mismatch");
  if (longest != longest_) throw std::logic_error("longest cycle mismatch");
  if (static_cast<int>(free_labels_.size()) != n_ - cycles_) throw std::logic_error("label pool mismatch");
}

CoupledGraph::CoupledGraph(int n) : components_(n) {
  if (n < 1) throw std::invalid_argument("CoupledGraph needs n >= 1");
  parent_.resize(static_cast<std::size_t>(n));
  std::iota(parent_.begin(), parent_.end(), 0);
  size_.assign(static_cast<std::size_t>(n), 1);
}

int CoupledGraph::find(int v) {
  while (parent_[static_cast<std::size_t>(v)] != v) {
    auto& p = parent_[static_cast<std::size_t>(v)];
    p = parent_[static_cast<std::size_t>(p)];
    v = p;
  }
  return v;
}

void CoupledGraph::add_edge(int i, int j) {
  int a = find(i), b = find(j);
  if (a == b) return;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  largest_ = std::max(largest_, size_[static_cast<std::size_t>(a)]);
  --components_;
}

int largest_component(const CoupledGraph& graph) { return graph.largest_component(); }

PathSample sample_path(int n, double t, SplitMix64& rng, const PathOptions& options) {
  if (!(t >= 0.0)) throw std::domain_error("sample_path: t must be >= 0");
  PathSample out{CycleState(n), std::nullopt, 0};
  if (options.couple_graph) out.graph.emplace(n);
  if (n < 2 || t == 0.0) return out;

  const double rate = 0.5 * static_cast<double>(n) * (n - 1);
  std::poisson_distribution<std::int64_t> events(t * rate);
  out.events = events(rng);
  std::uniform_int_distribution<int> first(0, n - 1), second(0, n - 2);
  for (std::int64_t e = 0; e < out.events; ++e) {
    int i = first(rng);
    int j = second(rng);
    j += (j >= i);
    if (i > j) std::swap(i, j);
    out.state.apply_transposition(i, j);
    if (out.graph) out.graph->add_edge(i, j);
    if (options.check_every_event) out.state.check_invariants();
  }
  out.state.check_invariants();
  return out;
}

Estimate estimate(std::span<const double> values, std::uint64_t base_seed) {
  if (values.size() < 2) throw std::invalid_argument("estimate: need at least two replicas");
  const double r = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / r;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return Estimate{mean, std::sqrt(ss / (r - 1.0) / r), static_cast<int>(values.size()), base_seed};
}

const Estimate& MonteCarloResult::at(const std::string& name) const {
  for (const auto& [key, value] : estimates) {
    if (key == name) return value;
  }
  throw std::out_of_range("no estimate named " + name);
}

int default_thread_count() {
  if (const char* env = std::getenv("INTERCHANGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ReplicaResult run_replica(const MonteCarloConfig& config, int index) {
  ReplicaResult r;
  r.seed = replica_seed(config.base_seed, static_cast<std::uint64_t>(index));
  SplitMix64 rng(r.seed);
  PathOptions options;
  options.couple_graph = config.couple_graph;
  const auto path = sample_path(config.n, config.t, rng, options);
  const auto& state = path.state;
  r.events = path.events;
  r.s_k.reserve(config.k_list.size());
  for (int k : config.k_list) r.s_k.push_back(state.count_of_size(k));
  r.cycles = state.cycle_count();
  r.distance = state.distance();
  r.longest = state.longest_cycle();
  r.large_mass = state.large_cycle_mass(config.epsilon);
  if (path.graph) {
    r.largest_component = path.graph->largest_component();
    if (r.longest > r.largest_component) throw std::logic_error("cycle longer than its graph component");
  }
  return r;
}

MonteCarloResult monte_carlo(const MonteCarloConfig& config) {
  if (config.replicas < 2) throw std::invalid_argument("monte_carlo: replicas must be >= 2");
  if (config.n < 1) throw std::invalid_argument("monte_carlo: n must be >= 1");
  for (int k : config.k_list) {
    if (k < 1 || k > config.n) throw std::invalid_argument("monte_carlo: k out of range");
  }

  MonteCarloResult out;
  out.config = config;
  out.replicas.resize(static_cast<std::size_t>(config.replicas));
  const int threads = std::clamp(config.threads > 0 ? config.threads : default_thread_count(), 1, config.replicas);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < config.replicas; i = next++) out.replicas[static_cast<std::size_t>(i)] = run_replica(config, i);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  // Ordered reduction over replica index.
  std::vector<double> column(out.replicas.size());
  auto add = [&](std::string name, auto&& field) {
    for (std::size_t i = 0; i < out.replicas.size(); ++i) column[i] = field(out.replicas[i]);
    out.estimates.emplace_back(std::move(name), estimate(column, config.base_seed));
  };
  add("events", [](const ReplicaResult& r) { return static_cast<double>(r.events); });
  for (std::size_t idx = 0; idx < config.k_list.size(); ++idx) {
    add("s_" + std::to_string(config.k_list[idx]), [idx](const ReplicaResult& r) { return double(r.s_k[idx]); });
  }
  add("N", [](const ReplicaResult& r) { return double(r.cycles); });
  add("d", [](const ReplicaResult& r) { return double(r.distance); });
  add("C", [](const ReplicaResult& r) { return double(r.longest); });
  add("X_eps", [](const ReplicaResult& r) { return r.large_mass; });
  if (config.couple_graph) {
    const double n = config.n;
    add("Y_frac", [n](const ReplicaResult& r) { return r.largest_component / n; });
  }
  return out;
}

}  // namespace interchange::sim
