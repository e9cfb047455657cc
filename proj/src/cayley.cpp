#include "girthlab/cayley.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <type_traits>
#include <unordered_map>

#include "girthlab/error.hpp"
#include "girthlab/primes.hpp"

namespace girthlab {

namespace {

using u128 = unsigned __int128;

// Visited-table byte: (arriving generator << 2) | (depth mod 3).
constexpr std::uint8_t kUnvisited = 0xFF;
constexpr std::uint8_t kRefused = 0xFE;
constexpr int kNoGenerator = 63;
constexpr int kMaxDegree = 62;
constexpr std::uint8_t kRootTag = kNoGenerator << 2;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_code(std::uint64_t c) { return splitmix(c); }
std::uint64_t hash_code(u128 c) {
  return splitmix(static_cast<std::uint64_t>(c) ^ splitmix(static_cast<std::uint64_t>(c >> 64)));
}

// Right multiplication by the symmetric generators on raw entry arrays.
class Kernel {
 public:
  explicit Kernel(const SymmetricGenerators& gens)
      : n_(gens.dim()), nn_(n_ * n_), m_(gens.modulus()), degree_(gens.degree()) {
    const u128 worst = static_cast<u128>(m_ - 1) * (m_ - 1) * static_cast<u128>(n_);
    lazy_ = worst < (static_cast<u128>(1) << 64);
    for (const auto& g : gens.elements())
      entries_.insert(entries_.end(), g.entries().begin(), g.entries().end());
  }

  int nn() const { return nn_; }

  void mul(const std::uint32_t* x, int g, std::uint32_t* out) const {
    const std::uint32_t* s = entries_.data() + static_cast<std::size_t>(g) * nn_;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        std::uint64_t acc = 0;
        if (lazy_) {
          for (int k = 0; k < n_; ++k) acc += std::uint64_t{x[i * n_ + k]} * s[k * n_ + j];
          acc %= m_;
        } else {
          for (int k = 0; k < n_; ++k) acc = (acc + std::uint64_t{x[i * n_ + k]} * s[k * n_ + j] % m_) % m_;
        }
        out[i * n_ + j] = static_cast<std::uint32_t>(acc);
      }
  }

 private:
  int n_;
  int nn_;
  std::uint64_t m_;
  int degree_;
  bool lazy_;
  std::vector<std::uint32_t> entries_;
};

template <class Code>
struct PackedCodec {
  using code_type = Code;
  int nn;
  std::uint64_t m;

  void decode(Code c, std::uint32_t* out) const {
    for (int i = 0; i < nn; ++i) {
      out[i] = static_cast<std::uint32_t>(c % m);
      c /= m;
    }
  }
  Code encode(const std::uint32_t* e) const {
    Code c = 0;
    for (int i = nn; i-- > 0;) c = c * m + e[i];
    return c;
  }
  static std::size_t key_bytes() { return sizeof(Code); }
};

struct BytesCodec {
  using code_type = std::string;
  int nn;

  void decode(const std::string& key, std::uint32_t* out) const {
    std::memcpy(out, key.data(), static_cast<std::size_t>(nn) * 4);
  }
  std::string encode(const std::uint32_t* e) const {
    return std::string(reinterpret_cast<const char*>(e), static_cast<std::size_t>(nn) * 4);
  }
  std::size_t key_bytes() const { return static_cast<std::size_t>(nn) * 4 + 32; }
};

class DenseStore {
 public:
  explicit DenseStore(std::uint64_t space) : tags_(space, kUnvisited) {}

  std::uint8_t insert(std::uint64_t code, std::uint8_t tag) {
    std::atomic_ref<std::uint8_t> slot(tags_[code]);
    std::uint8_t expected = kUnvisited;
    if (slot.compare_exchange_strong(expected, tag, std::memory_order_relaxed)) return kUnvisited;
    return expected;
  }
  std::uint64_t bytes() const { return tags_.size(); }
  bool exhausted() const { return false; }

 private:
  std::vector<std::uint8_t> tags_;
};

// Sharded open-addressing table; a shard that cannot grow within the budget
// fills up to capacity and then refuses.
template <class Code>
class HashStore {
 public:
  explicit HashStore(std::uint64_t budget) : budget_(budget), shards_(new Shard[kShards]) {
    for (std::size_t s = 0; s < kShards; ++s) {
      shards_[s].keys.resize(kInitial);
      shards_[s].tags.assign(kInitial, kUnvisited);
    }
    bytes_ = kShards * kInitial * kSlot;
  }

  std::uint8_t insert(const Code& code, std::uint8_t tag) {
    const std::uint64_t h = hash_code(code);
    Shard& sh = shards_[h >> (64 - kShardBits)];
    std::lock_guard<std::mutex> lock(sh.mu);
    if ((sh.size + 1) * 10 > sh.tags.size() * 7) grow(sh);
    if (sh.size + 1 >= sh.tags.size()) {
      exhausted_.store(true, std::memory_order_relaxed);
      return kRefused;
    }
    const std::size_t mask = sh.tags.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
      if (sh.tags[i] == kUnvisited) {
        sh.keys[i] = code;
        sh.tags[i] = tag;
        ++sh.size;
        return kUnvisited;
      }
      if (sh.keys[i] == code) return sh.tags[i];
    }
  }

  std::uint64_t bytes() const { return bytes_.load(); }
  bool exhausted() const { return exhausted_.load(); }

 private:
  static constexpr int kShardBits = 6;
  static constexpr std::size_t kShards = std::size_t{1} << kShardBits;
  static constexpr std::size_t kInitial = 1024;
  static constexpr std::size_t kSlot = sizeof(Code) + 1;

  struct Shard {
    std::mutex mu;
    std::vector<Code> keys;
    std::vector<std::uint8_t> tags;
    std::size_t size = 0;
  };

  void grow(Shard& sh) {
    const std::size_t cap = sh.tags.size();
    const std::uint64_t extra = cap * kSlot * 2;  // new arrays exist alongside the old ones
    std::uint64_t cur = bytes_.load();
    do {
      if (cur + extra > budget_) {
        exhausted_.store(true, std::memory_order_relaxed);
        return;
      }
    } while (!bytes_.compare_exchange_weak(cur, cur + cap * kSlot));
    std::vector<Code> keys(cap * 2);
    std::vector<std::uint8_t> tags(cap * 2, kUnvisited);
    const std::size_t mask = cap * 2 - 1;
    for (std::size_t i = 0; i < cap; ++i) {
      if (sh.tags[i] == kUnvisited) continue;
      std::size_t j = hash_code(sh.keys[i]) & mask;
      while (tags[j] != kUnvisited) j = (j + 1) & mask;
      keys[j] = sh.keys[i];
      tags[j] = sh.tags[i];
    }
    sh.keys.swap(keys);
    sh.tags.swap(tags);
  }

  std::uint64_t budget_;
  std::unique_ptr<Shard[]> shards_;
  std::atomic<std::uint64_t> bytes_{0};
  std::atomic<bool> exhausted_{false};
};

class BytesStore {
 public:
  BytesStore(std::uint64_t budget, std::size_t key_bytes) : budget_(budget), per_entry_(key_bytes + 48) {}

  std::uint8_t insert(const std::string& code, std::uint8_t tag) {
    std::lock_guard<std::mutex> lock(mu_);
    if ((map_.size() + 1) * per_entry_ > budget_) {
      exhausted_ = true;
      return kRefused;
    }
    auto [it, fresh] = map_.try_emplace(code, tag);
    return fresh ? kUnvisited : it->second;
  }
  std::uint64_t bytes() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size() * per_entry_;
  }
  bool exhausted() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exhausted_;
  }

 private:
  std::uint64_t budget_;
  std::size_t per_entry_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::uint8_t> map_;
  bool exhausted_ = false;
};

struct BfsControl {
  std::uint64_t budget;
  unsigned threads;
  bool stop_at_girth = false;
};

unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Level-synchronous BFS from the identity. `on_level` sees each new sphere.
template <class Codec, class Store, class OnLevel>
Exploration bfs(const SymmetricGenerators& gens, const Codec& codec, Store& store,
                const BfsControl& ctl, OnLevel&& on_level) {
  using Code = typename Codec::code_type;
  const auto start = std::chrono::steady_clock::now();
  const Kernel kernel(gens);
  const int nn = kernel.nn();
  const int degree = gens.degree();

  Exploration out;
  out.degree = degree;

  std::vector<Code> frontier{codec.encode(ModMatrix::identity(gens.dim(), gens.modulus()).entries().data())};
  std::vector<std::uint8_t> arrival{static_cast<std::uint8_t>(kNoGenerator)};
  store.insert(frontier[0], kRootTag);
  std::uint64_t visited = 1;
  int depth = 0;
  on_level(frontier);
  out.sphere_sizes.push_back(1);

  const int no_cycle = std::numeric_limits<int>::max();
  const bool want_girth = degree > 0;

  while (!frontier.empty()) {
    const auto next_mod3 = static_cast<std::uint8_t>((depth + 1) % 3);
    const int d3 = depth % 3;
    const bool track = want_girth && !out.girth;

    struct Chunk {
      std::vector<Code> next;
      std::vector<std::uint8_t> arr;
      int best = std::numeric_limits<int>::max();
    };
    std::atomic<bool> refused{false};

    auto work = [&](std::size_t lo, std::size_t hi, Chunk& chunk) {
      std::vector<std::uint32_t> x(static_cast<std::size_t>(nn)), y(static_cast<std::size_t>(nn));
      for (std::size_t idx = lo; idx < hi; ++idx) {
        codec.decode(frontier[idx], x.data());
        const int came = arrival[idx];
        const int back = came == kNoGenerator ? -1 : gens.inverse_of(came);
        for (int g = 0; g < degree; ++g) {
          if (g == back) continue;
          kernel.mul(x.data(), g, y.data());
          Code c = codec.encode(y.data());
          const std::uint8_t prev = store.insert(c, static_cast<std::uint8_t>((g << 2) | next_mod3));
          if (prev == kUnvisited) {
            chunk.next.push_back(std::move(c));
            chunk.arr.push_back(static_cast<std::uint8_t>(g));
          } else if (prev == kRefused) {
            refused.store(true, std::memory_order_relaxed);
            return;
          } else if (track) {
            const int r = prev & 3;
            const int dv = r == d3 ? depth : (r == (d3 + 1) % 3 ? depth + 1 : depth - 1);
            chunk.best = std::min(chunk.best, depth + dv + 1);
          }
        }
      }
    };

    const unsigned threads = frontier.size() < 4096 ? 1u : ctl.threads;
    std::vector<Chunk> chunks(threads);
    if (threads == 1) {
      work(0, frontier.size(), chunks[0]);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(threads);
      const std::size_t per = (frontier.size() + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = std::min(frontier.size(), t * per);
        const std::size_t hi = std::min(frontier.size(), lo + per);
        pool.emplace_back([&, t, lo, hi] {
          try {
            work(lo, hi, chunks[t]);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    if (refused.load() || store.exhausted())
      throw BudgetExceeded("memory budget exhausted at BFS depth " + std::to_string(depth), depth, visited);

    int best = no_cycle;
    std::size_t total = 0;
    for (const auto& c : chunks) {
      best = std::min(best, c.best);
      total += c.next.size();
    }
    if (track && best != no_cycle) out.girth = best;

    std::vector<Code> next;
    std::vector<std::uint8_t> next_arr;
    next.reserve(total);
    next_arr.reserve(total);
    for (auto& c : chunks) {
      std::move(c.next.begin(), c.next.end(), std::back_inserter(next));
      next_arr.insert(next_arr.end(), c.arr.begin(), c.arr.end());
    }

    const std::uint64_t live =
        store.bytes() + (frontier.size() + next.size()) * (codec.key_bytes() + 1);
    out.peak_bytes = std::max(out.peak_bytes, live);
    if (live > ctl.budget)
      throw BudgetExceeded("memory budget exhausted at BFS depth " + std::to_string(depth), depth, visited);

    if (next.empty()) break;
    ++depth;
    visited += next.size();
    out.sphere_sizes.push_back(next.size());
    on_level(next);
    frontier.swap(next);
    arrival.swap(next_arr);
    if (ctl.stop_at_girth && out.girth) break;
  }

  out.order = visited;
  out.diameter = depth;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

bool prefer_dense(const SymmetricGenerators& gens, std::uint64_t budget) {
  const int n = gens.dim();
  const std::uint64_t m = gens.modulus();
  const BigInt space = code_space(n, m);
  BigInt cap = std::min<std::uint64_t>(budget / 2, std::uint64_t{1} << 32);
  if (space > cap) return false;
  if (!is_prime(m)) return true;
  // Dense only pays off when the group can fill a reasonable share of it.
  return space <= group_order_sl(n, m) * 64;
}

// Dispatches on code width and visited-table kind.
template <class OnLevel>
Exploration run_bfs(const SymmetricGenerators& gens, const BfsControl& ctl, OnLevel&& on_level) {
  const int n = gens.dim();
  const std::uint64_t m = gens.modulus();
  if (gens.degree() > kMaxDegree) throw UnsupportedError("at most 62 symmetric generators are supported");
  if (code_fits_u64(n, m)) {
    PackedCodec<std::uint64_t> codec{n * n, m};
    if (prefer_dense(gens, ctl.budget)) {
      DenseStore store(code_space(n, m).get_ui());
      return bfs(gens, codec, store, ctl, on_level);
    }
    HashStore<std::uint64_t> store(ctl.budget);
    return bfs(gens, codec, store, ctl, on_level);
  }
  if (code_fits(n, m)) {
    PackedCodec<u128> codec{n * n, m};
    HashStore<u128> store(ctl.budget);
    return bfs(gens, codec, store, ctl, on_level);
  }
  BytesCodec codec{n * n};
  BytesStore store(ctl.budget, codec.key_bytes());
  return bfs(gens, codec, store, ctl, on_level);
}

BfsControl control(const ExploreOptions& opts, bool stop_at_girth = false) {
  return BfsControl{opts.memory_budget, resolve_threads(opts.threads), stop_at_girth};
}

void check_uniform(std::span<const ModMatrix> generators) {
  if (generators.empty()) throw ParameterError("at least one generator is required");
  for (const auto& g : generators)
    if (g.dim() != generators[0].dim() || g.modulus() != generators[0].modulus())
      throw ParameterError("generators must share dimension and modulus");
}

}  // namespace

std::uint64_t default_memory_budget() {
  if (const char* env = std::getenv("GIRTHLAB_MEMORY_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t{8} << 30;
}

SymmetricGenerators::SymmetricGenerators(std::span<const ModMatrix> generators, bool strict) {
  check_uniform(generators);
  n_ = generators[0].dim();
  m_ = generators[0].modulus();
  if (strict) {
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (generators[i].is_identity())
        throw DegenerateSpecError("generator " + std::to_string(i) +
                                  " reduces to the identity; requires a,b ≢ 0 (mod " + std::to_string(m_) + ")");
      for (std::size_t j = 0; j < i; ++j)
        if (generators[i] == generators[j] || generators[i] == inverse(generators[j]))
          throw DegenerateSpecError("generators " + std::to_string(j) + " and " + std::to_string(i) +
                                    " coincide up to inversion modulo " + std::to_string(m_));
    }
  }
  for (const auto& g : generators) {
    if (g.is_identity()) continue;
    for (const ModMatrix& h : {g, inverse(g)})
      if (std::find(elems_.begin(), elems_.end(), h) == elems_.end()) elems_.push_back(h);
  }
  inv_.assign(elems_.size(), -1);
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    const ModMatrix gi = inverse(elems_[i]);
    inv_[i] = static_cast<int>(std::find(elems_.begin(), elems_.end(), gi) - elems_.begin());
  }
}

Exploration explore(const SymmetricGenerators& gens, const ExploreOptions& opts) {
  return run_bfs(gens, control(opts), [](const auto&) {});
}

std::uint64_t closure(std::span<const ModMatrix> generators, const ExploreOptions& opts) {
  return explore(SymmetricGenerators(generators, false), opts).order;
}

int girth(std::span<const ModMatrix> generators, const ExploreOptions& opts) {
  const SymmetricGenerators gens(generators, true);
  const Exploration e = run_bfs(gens, control(opts, true), [](const auto&) {});
  if (!e.girth) throw DegenerateSpecError("Cayley graph is acyclic; girth is infinite");
  return *e.girth;
}

int diameter(std::span<const ModMatrix> generators, const ExploreOptions& opts) {
  return explore(SymmetricGenerators(generators, true), opts).diameter;
}

GroupEnumeration enumerate_group(const SymmetricGenerators& gens, std::uint64_t order_limit,
                                 const ExploreOptions& opts) {
  const int n = gens.dim();
  const std::uint64_t m = gens.modulus();
  if (!code_fits(n, m)) throw UnsupportedError("group enumeration needs element codes within 128 bits");

  GroupEnumeration out;
  out.degree = gens.degree();
  auto collect = [&](const auto& sphere) {
    if (out.elements.size() + sphere.size() > order_limit)
      throw ParameterError("group order exceeds the limit " + std::to_string(order_limit));
    using Code = typename std::decay_t<decltype(sphere)>::value_type;
    if constexpr (!std::is_same_v<Code, std::string>)
      for (const auto& c : sphere) out.elements.push_back(static_cast<ElementCode>(c));
  };
  run_bfs(gens, control(opts), collect);
  std::sort(out.elements.begin(), out.elements.end());

  const Kernel kernel(gens);
  const PackedCodec<u128> codec{n * n, m};
  const std::size_t degree = static_cast<std::size_t>(out.degree);
  out.neighbours.resize(out.elements.size() * degree);
  std::vector<std::uint32_t> x(static_cast<std::size_t>(n * n)), y(x.size());
  for (std::size_t i = 0; i < out.elements.size(); ++i) {
    codec.decode(out.elements[i], x.data());
    for (std::size_t g = 0; g < degree; ++g) {
      kernel.mul(x.data(), static_cast<int>(g), y.data());
      const auto it = std::lower_bound(out.elements.begin(), out.elements.end(), codec.encode(y.data()));
      out.neighbours[i * degree + g] = static_cast<std::uint32_t>(it - out.elements.begin());
    }
  }
  return out;
}

std::string export_dot(std::span<const ModMatrix> generators, const ExploreOptions& opts) {
  const SymmetricGenerators gens(generators, false);
  const GroupEnumeration g = enumerate_group(gens, 10000, opts);
  std::ostringstream os;
  os << "graph cayley {\n";
  for (const ElementCode c : g.elements) os << "  \"" << to_decimal(c) << "\";\n";
  const std::size_t degree = static_cast<std::size_t>(g.degree);
  for (std::size_t i = 0; i < g.elements.size(); ++i)
    for (std::size_t s = 0; s < degree; ++s) {
      const std::size_t j = g.neighbours[i * degree + s];
      if (i < j)
        os << "  \"" << to_decimal(g.elements[i]) << "\" -- \"" << to_decimal(g.elements[j]) << "\";\n";
    }
  os << "}\n";
  return os.str();
}

double CayleyStats::dg_ratio() const {
  if (!girth || *girth == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(diameter) / *girth;
}

CayleyStats cayley_stats(std::span<const ModMatrix> generators, const ExploreOptions& opts) {
  const SymmetricGenerators gens(generators, true);
  CayleyStats row;
  row.n = gens.dim();
  row.modulus = gens.modulus();
  row.modulus_prime = is_prime(row.modulus);
  row.degree = gens.degree();
  const Exploration e = explore(gens, opts);
  row.order = e.order;
  row.girth = e.girth;
  row.diameter = e.diameter;
  row.seconds = e.seconds;
  row.peak_bytes = e.peak_bytes;
  if (row.modulus_prime) row.generated_full = BigInt(static_cast<unsigned long>(e.order)) == group_order_sl(row.n, row.modulus);
  return row;
}

std::vector<ModMatrix> family_generators(const FamilySpec& spec, std::uint64_t modulus) {
  const auto [a, b] = unitriangular_pair(spec.n, spec.a, spec.b);
  return {power(reduce(a, modulus), spec.l), power(reduce(b, modulus), spec.l)};
}

std::vector<CayleyStats> dg_table(const FamilySpec& spec, std::span<const std::uint64_t> moduli,
                                  const ExploreOptions& opts) {
  std::vector<std::uint64_t> sorted(moduli.begin(), moduli.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CayleyStats> rows;
  for (const std::uint64_t m : sorted) {
    CayleyStats row;
    try {
      row = cayley_stats(family_generators(spec, m), opts);
    } catch (const BudgetExceeded& e) {
      row.error = e.what();
      row.partial = true;
      row.diameter = e.depth_reached();
      row.order = e.visited();
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.n = spec.n;
    row.l = spec.l;
    row.a = spec.a;
    row.b = spec.b;
    row.modulus = m;
    row.modulus_prime = is_prime(m);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace girthlab
