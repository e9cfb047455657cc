#include "girthlab/words.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "girthlab/error.hpp"
#include "girthlab/primes.hpp"

namespace girthlab {

namespace {

int inv_letter(int c) { return c ^ 1; }

// True when no rotation of w or of its inverse is lexicographically smaller.
bool canonical(const LetterWord& w) {
  const std::size_t len = w.size();
  LetterWord iw(len);
  for (std::size_t i = 0; i < len; ++i) iw[i] = inv_letter(w[len - 1 - i]);
  auto smaller_rotation = [&](const LetterWord& src, std::size_t r) {
    for (std::size_t i = 0; i < len; ++i) {
      const int x = src[(r + i) % len];
      if (x != w[i]) return x < w[i];
    }
    return false;
  };
  for (std::size_t r = 0; r < len; ++r)
    if ((r && smaller_rotation(w, r)) || smaller_rotation(iw, r)) return false;
  return true;
}

bool letter_order(const LetterWord& lhs, const LetterWord& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return lhs < rhs;
}

// Reduced words with leading letter of generator g only use generators ≥ g
// (any other letter would make a rotation or the inverse smaller).
std::uint64_t nodes_up_to(int k, int length) {
  std::uint64_t total = 0;
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  for (int g = 0; g < k; ++g) {
    const std::uint64_t branch = static_cast<std::uint64_t>(2 * (k - g) - 1);
    std::uint64_t level = 1;
    for (int len = 1; len <= length; ++len) {
      total = std::min(cap, total + level);
      level = std::min(cap, level * branch);
    }
  }
  return total;
}

struct ScanTask {
  int first;
  int second;  // -1 for the length-1 word
};

}  // namespace

RelationScan relation_scan(std::span<const ExactMatrix> generators, int max_length, const ScanOptions& opts) {
  if (generators.empty()) throw ParameterError("relation scan needs at least one generator");
  if (max_length < 1) throw ParameterError("max_length must be positive");
  const int k = static_cast<int>(generators.size());
  std::vector<ExactMatrix> letters;
  for (const auto& g : generators) {
    if (g.dim() != generators[0].dim()) throw ParameterError("generators must share a dimension");
    letters.push_back(g);
    letters.push_back(g.inverse());
  }

  RelationScan out;
  out.max_length = max_length;
  out.complete_length = 0;
  while (out.complete_length < max_length && nodes_up_to(k, out.complete_length + 1) <= opts.word_budget)
    ++out.complete_length;
  out.partial = out.complete_length < max_length;
  const int depth_limit = out.complete_length;
  if (depth_limit == 0) return out;

  std::vector<ScanTask> tasks;
  for (int g = 0; g < k; ++g) {
    tasks.push_back({2 * g, -1});
    for (int c = 2 * g; c < 2 * k; ++c)
      if (c != inv_letter(2 * g)) tasks.push_back({2 * g, c});
  }

  std::mutex mu;
  std::atomic<std::size_t> next_task{0};
  std::atomic<std::uint64_t> checked{0};

  auto worker = [&] {
    std::vector<LetterWord> found;
    std::uint64_t local_checked = 0;
    LetterWord w;
    std::vector<ExactMatrix> prefix;

    auto visit = [&] {
      if (w.size() > 1 && w.back() == inv_letter(w.front())) return;
      if (!canonical(w)) return;
      ++local_checked;
      if (prefix.back().is_identity()) found.push_back(w);
    };
    std::function<void()> dfs = [&] {
      if (static_cast<int>(w.size()) == depth_limit) return;
      const int lowest = w.front() & ~1;
      for (int c = lowest; c < 2 * k; ++c) {
        if (c == inv_letter(w.back())) continue;
        w.push_back(c);
        prefix.push_back(prefix.back() * letters[static_cast<std::size_t>(c)]);
        visit();
        dfs();
        prefix.pop_back();
        w.pop_back();
      }
    };

    for (std::size_t t; (t = next_task.fetch_add(1)) < tasks.size();) {
      const ScanTask task = tasks[t];
      w.assign(1, task.first);
      prefix.assign(1, letters[static_cast<std::size_t>(task.first)]);
      if (task.second < 0) {
        visit();
        continue;
      }
      if (depth_limit < 2) continue;
      w.push_back(task.second);
      prefix.push_back(prefix.back() * letters[static_cast<std::size_t>(task.second)]);
      visit();
      dfs();
    }
    checked += local_checked;
    std::lock_guard<std::mutex> lock(mu);
    out.violations.insert(out.violations.end(), found.begin(), found.end());
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.words_checked = checked.load();
  std::sort(out.violations.begin(), out.violations.end(), letter_order);
  return out;
}

Word to_word(const LetterWord& w) {
  Word out;
  for (int c : w) {
    if (c > 3) throw ParameterError("letter outside the two-generator alphabet");
    out.push_back(c < 2 ? Letter::X : Letter::Y, (c & 1) ? -1 : 1);
  }
  return out;
}

FreenessReport freeness_scan(int n, std::int64_t l, long a, long b, int max_length, const ScanOptions& opts) {
  if (max_length < 2) throw ParameterError("max_length must be at least 2");
  if (l < 1) throw ParameterError("power l must be at least 1");
  const auto [mat_a, mat_b] = unitriangular_pair(n, a, b);
  const std::vector<ExactMatrix> gens{power_closed_form(mat_a, l), power_closed_form(mat_b, l)};
  const RelationScan scan = relation_scan(gens, max_length, opts);

  FreenessReport report;
  report.n = n;
  report.l = l;
  report.a = a;
  report.b = b;
  report.max_length = max_length;
  report.complete_length = scan.complete_length;
  report.partial = scan.partial;
  report.words_checked = scan.words_checked;
  for (const auto& w : scan.violations) report.violations.push_back(to_word(w));
  return report;
}

ModMatrix eval_word_mod(const Word& w, const ModMatrix& x, const ModMatrix& y) {
  if (x.dim() != y.dim() || x.modulus() != y.modulus())
    throw ParameterError("word evaluation needs generators of equal dimension and modulus");
  ModMatrix out = ModMatrix::identity(x.dim(), x.modulus());
  for (const auto& s : w.syllables()) out = out * power(s.letter == Letter::X ? x : y, s.exponent);
  return out;
}

std::optional<int> identity_word_length_mod_p(const FamilySpec& spec, std::uint64_t p, int max_length) {
  if (!is_prime(p)) throw ParameterError("modulus must be prime");
  if (max_length < 1) throw ParameterError("max_length must be positive");
  const auto gens = family_generators(spec, p);
  const ModMatrix& x = gens[0];
  const ModMatrix& y = gens[1];
  if (x.is_identity() || y.is_identity())
    throw DegenerateSpecError("a generator reduces to the identity modulo " + std::to_string(p) +
                              "; requires a,b ≢ 0 (mod p)");
  const ModMatrix x_inv = inverse(x);
  if (x == y || x_inv == y) throw DegenerateSpecError("generators coincide modulo " + std::to_string(p));

  // Simple symmetric set: an involution contributes one letter.
  std::vector<ModMatrix> letters{x};
  if (x_inv != x) letters.push_back(x_inv);
  letters.push_back(y);
  if (inverse(y) != y) letters.push_back(inverse(y));
  const int deg = static_cast<int>(letters.size());
  std::vector<int> inv(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i)
    inv[static_cast<std::size_t>(i)] = static_cast<int>(
        std::find(letters.begin(), letters.end(), inverse(letters[static_cast<std::size_t>(i)])) - letters.begin());

  std::vector<int> w;
  std::vector<ModMatrix> prefix{ModMatrix::identity(spec.n, p)};
  std::function<bool(int)> dfs = [&](int target) -> bool {
    const int depth = static_cast<int>(w.size());
    if (depth == target) return inv[static_cast<std::size_t>(w.back())] != w.front() && prefix.back().is_identity();
    for (int c = 0; c < deg; ++c) {
      if (depth && c == inv[static_cast<std::size_t>(w.back())]) continue;
      w.push_back(c);
      prefix.push_back(prefix.back() * letters[static_cast<std::size_t>(c)]);
      const bool hit = dfs(target);
      prefix.pop_back();
      w.pop_back();
      if (hit) return true;
    }
    return false;
  };
  for (int len = 1; len <= max_length; ++len)
    if (dfs(len)) return len;
  return std::nullopt;
}

std::optional<Word> shortest_word(const ModMatrix& x, const ModMatrix& y, const ModMatrix& target) {
  const std::array<std::pair<Letter, int>, 4> moves{
      {{Letter::X, 1}, {Letter::X, -1}, {Letter::Y, 1}, {Letter::Y, -1}}};
  const std::array<ModMatrix, 4> mats{x, inverse(x), y, inverse(y)};

  const ModMatrix id = ModMatrix::identity(x.dim(), x.modulus());
  std::unordered_map<std::string, std::pair<std::string, int>> parent;
  const std::string root = encode_bytes(id);
  const std::string goal = encode_bytes(target);
  parent.emplace(root, std::make_pair(std::string(), -1));
  std::deque<ModMatrix> queue{id};
  bool found = root == goal;
  while (!queue.empty() && !found) {
    const ModMatrix cur = queue.front();
    queue.pop_front();
    const std::string key = encode_bytes(cur);
    for (int mv = 0; mv < 4 && !found; ++mv) {
      ModMatrix nxt = cur * mats[static_cast<std::size_t>(mv)];
      std::string nk = encode_bytes(nxt);
      if (parent.emplace(nk, std::make_pair(key, mv)).second) {
        found = nk == goal;
        queue.push_back(std::move(nxt));
      }
    }
  }
  if (!found) return std::nullopt;

  std::vector<int> path;
  for (std::string k = goal; k != root;) {
    const auto& [prev, mv] = parent.at(k);
    path.push_back(mv);
    k = prev;
  }
  Word w;
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    w.push_back(moves[static_cast<std::size_t>(*it)].first, moves[static_cast<std::size_t>(*it)].second);
  return w;
}

SubgroupGenerators schreier_generators(int m) {
  if (m < 1) throw ParameterError("index must be at least 1");
  SubgroupGenerators out;
  out.index = m;
  for (int i = 0; i < m; ++i) {
    // X from coset i goes to i+1; only the wrap-around edge leaves the tree.
    if (i == m - 1) out.generators.push_back(Word::of(Letter::X, m));
    Word y = Word::of(Letter::X, i);
    y.push_back(Letter::Y, 1);
    y.push_back(Letter::X, -i);
    out.generators.push_back(y);
  }
  out.rank = static_cast<int>(out.generators.size());
  return out;
}

std::optional<int> stallings_index(std::span<const Word> words) {
  // Edge labels: 0 = X out, 1 = X in, 2 = Y out, 3 = Y in.
  std::vector<std::array<std::vector<int>, 4>> adj(1);
  std::vector<int> parent{0};
  auto add_vertex = [&] {
    adj.emplace_back();
    parent.push_back(static_cast<int>(parent.size()));
    return static_cast<int>(parent.size()) - 1;
  };
  auto add_edge = [&](int u, int label, int v) {
    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(label)].push_back(v);
    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(label ^ 1)].push_back(u);
  };
  for (const Word& w : words) {
    std::vector<int> labels;
    for (const auto& s : w.syllables()) {
      const int base = s.letter == Letter::X ? 0 : 2;
      const int label = base + (s.exponent < 0 ? 1 : 0);
      for (std::int64_t i = 0; i < (s.exponent < 0 ? -s.exponent : s.exponent); ++i) labels.push_back(label);
    }
    int cur = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const int nxt = i + 1 == labels.size() ? 0 : add_vertex();
      add_edge(cur, labels[i], nxt);
      cur = nxt;
    }
  }

  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < static_cast<int>(parent.size()); ++v) {
      if (find(v) != v) continue;
      for (int label = 0; label < 4; ++label) {
        auto& list = adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(label)];
        int keep = -1;
        for (int u : list) {
          const int ru = find(u);
          if (keep < 0) {
            keep = ru;
          } else if (ru != keep) {
            // Merge ru into keep.
            parent[static_cast<std::size_t>(ru)] = keep;
            for (int l2 = 0; l2 < 4; ++l2) {
              auto& src = adj[static_cast<std::size_t>(ru)][static_cast<std::size_t>(l2)];
              auto& dst = adj[static_cast<std::size_t>(keep)][static_cast<std::size_t>(l2)];
              dst.insert(dst.end(), src.begin(), src.end());
              src.clear();
            }
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
      if (changed) break;
    }
  }

  int vertices = 0;
  for (int v = 0; v < static_cast<int>(parent.size()); ++v) {
    if (find(v) != v) continue;
    ++vertices;
    for (int label = 0; label < 4; ++label) {
      const auto& list = adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(label)];
      if (list.empty()) return std::nullopt;
      for (int u : list)
        if (find(u) != find(list.front())) return std::nullopt;
    }
  }
  return vertices;
}

namespace {

// Identity plus the listed elementary units (1-based positions).
ModMatrix unit(int n, std::uint64_t q, std::initializer_list<std::pair<int, int>> ones) {
  ModMatrix m = ModMatrix::identity(n, q);
  for (auto [i, j] : ones) m.set(i - 1, j - 1, 1);
  return m;
}

void finish(RecipeReport& report, const std::vector<ModMatrix>& gens, const ExploreOptions& opts) {
  for (const auto& step : report.steps)
    if (!step.matches)
      throw VerificationFailure("recipe step " + step.label + " gives " + step.value.str() + ", expected " +
                                step.expected.str());
  try {
    report.closure_order = closure(gens, opts);
  } catch (const BudgetExceeded& e) {
    report.closure_partial = true;
    report.closure_order = e.visited();
    return;
  }
  if (!report.full())
    throw VerificationFailure("recipe closure has order " + std::to_string(report.closure_order) + ", expected " +
                              report.expected_order.get_str());
}

}  // namespace

RecipeReport replay_recipe_sl3_mod3(long a, long b, const ExploreOptions& opts) {
  auto mod3 = [](long v) { return ((v % 3) + 3) % 3; };
  if (mod3(a) != 1 || mod3(b) != 2) throw ParameterError("recipe requires a ≡ 1 and b ≡ −1 (mod 3)");
  const auto [mat_a, mat_b] = unitriangular_pair(3, a, b);
  const ModMatrix x = power(reduce(mat_a, 3), 4);
  const ModMatrix y = power(reduce(mat_b, 3), 4);

  RecipeReport report;
  report.expected_order = group_order_sl(3, 3);
  auto step = [&](const std::string& label, const Word& w, const ModMatrix& expected) {
    RecipeStep s{label, w, eval_word_mod(w, x, y), expected, false};
    s.matches = s.value == s.expected;
    report.steps.push_back(std::move(s));
  };
  auto m3 = [](std::initializer_list<std::initializer_list<long>> rows) { return ModMatrix(3, rows); };

  const Word X = Word::of(Letter::X);
  const Word Y = Word::of(Letter::Y);
  const Word c1 = Word::parse("Y X Y^-1 X^-1");
  const Word c2 = Word::parse("Y^-1 X^-1 Y X");
  const Word c12 = c1 * c2.inverse();
  const Word t1 = (c12 * X).power(2);

  step("X", X, m3({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}));
  step("Y", Y, m3({{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}}));
  step("C1", c1, m3({{2, -1, 1}, {0, 1, 0}, {-1, 0, 0}}));
  step("C2", c2, m3({{2, 0, -1}, {1, 1, 0}, {1, 0, 0}}));
  step("C3", c1.inverse(), m3({{0, 0, -1}, {0, 1, 0}, {1, 1, 2}}));
  step("C4", c2.inverse(), m3({{0, 0, 1}, {0, 1, -1}, {-1, 0, 2}}));
  step("C1C2^-1", c12, m3({{-1, -1, 5}, {0, 1, -1}, {0, 0, -1}}));
  step("C1C2^-1X", c12 * X, m3({{-1, -2, 4}, {0, 1, 0}, {0, 0, -1}}));
  step("(C1C2^-1X)^2", t1, m3({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}));
  step("T1", t1, m3({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}));

  const ModMatrix t2_target = m3({{1, 0, 0}, {0, 1, 0}, {1, 0, 1}});
  const auto t2 = shortest_word(x, y, t2_target);
  if (!t2) throw VerificationFailure("recipe step T2 is not reachable from X, Y");
  step("T2", *t2, t2_target);
  const Word t = t1 * *t2 * t1.inverse() * t2->inverse();
  step("T=[T1,T2]", t, m3({{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}));
  const Word z = t * c2.inverse();
  step("Z=T*C4", z, m3({{1, 0, 1}, {0, 1, -1}, {0, 0, 1}}));
  step("Z*T1^-1", z * t1.inverse(), m3({{1, 0, 0}, {0, 1, -1}, {0, 0, 1}}));

  finish(report, {x, y}, opts);
  return report;
}

RecipeReport replay_recipe_qt(std::uint64_t q, int t, const ExploreOptions& opts) {
  if (!is_prime(q)) throw ParameterError("q must be prime");
  if (t < 1) throw ParameterError("t must be at least 1");
  std::uint64_t qt = 1;
  for (int i = 0; i < t; ++i) {
    if (qt > 16) throw UnsupportedError("recipe replay supports n = q^t + 1 ≤ 10");
    qt *= q;
  }
  const int n = static_cast<int>(qt) + 1;
  if (n < 4) throw ParameterError("recipe requires n = q^t + 1 ≥ 4");
  if (n > 10) throw UnsupportedError("recipe replay supports n = q^t + 1 ≤ 10");

  const auto [mat_a, mat_b] = unitriangular_pair(n, 1, 1);
  const ModMatrix ap = reduce(mat_a, q);
  const ModMatrix bp = reduce(mat_b, q);
  const auto Q = static_cast<std::int64_t>(qt);

  RecipeReport report;
  report.expected_order = group_order_sl(n, q);
  auto step = [&](const std::string& label, const Word& w, const ModMatrix& expected) {
    RecipeStep s{label, w, eval_word_mod(w, ap, bp), expected, false};
    s.matches = s.value == s.expected;
    report.steps.push_back(std::move(s));
  };
  auto ones_above = [&] {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i < n; ++i) out.push_back({i, i + 1});
    return out;
  };
  // A' with the listed superdiagonal units removed and extra entries added.
  auto shaped = [&](std::vector<std::pair<int, int>> removed, std::vector<std::tuple<int, int, long>> extra) {
    ModMatrix m = ModMatrix::identity(n, q);
    for (auto [i, j] : ones_above())
      if (std::find(removed.begin(), removed.end(), std::make_pair(i, j)) == removed.end()) m.set(i - 1, j - 1, 1);
    for (auto [i, j, v] : extra) m.set(i - 1, j - 1, v);
    return m;
  };

  Word bq;
  bq.push_back(Letter::Y, Q);
  Word xw;
  xw.push_back(Letter::Y, -1);
  xw.push_back(Letter::X, 1);
  xw.push_back(Letter::Y, Q);
  xw.push_back(Letter::X, -1);
  xw.push_back(Letter::Y, 1);
  xw.push_back(Letter::X, 1);
  Word xtw;  // the transpose of X as a word
  xtw.push_back(Letter::Y, 1);
  xtw.push_back(Letter::X, 1);
  xtw.push_back(Letter::Y, -1);
  xtw.push_back(Letter::X, Q);
  xtw.push_back(Letter::Y, 1);
  xtw.push_back(Letter::X, -1);
  const Word A = Word::of(Letter::X);
  const Word x1 = A * xw.inverse();
  const Word y1 = xtw.inverse() * Word::of(Letter::Y);
  const Word block = x1.inverse() * y1;
  const Word z = A * block;
  const Word y1z = y1.inverse() * z;
  const Word comm = xw * x1 * xw.inverse() * x1.inverse();
  const Word tw = comm * y1z;
  const Word at = A * tw.inverse();

  step("A'", A, shaped({}, {}));
  step("B'", Word::of(Letter::Y), shaped({}, {}).transpose());
  step("B'^(q^t)", bq, unit(n, q, {{n, 1}}));
  step("X", xw, shaped({{n - 1, n}}, {}));
  step("X1=A'X^-1", x1, unit(n, q, {{n - 1, n}}));
  step("Y1", y1, unit(n, q, {{n, n - 1}}));
  step("Y=X1^-1Y1", block, [&] {
    ModMatrix m = ModMatrix::identity(n, q);
    m.set(n - 2, n - 2, 0);
    m.set(n - 2, n - 1, -1);
    m.set(n - 1, n - 2, 1);
    return m;
  }());
  step("Z=A'Y", z, shaped({{n - 2, n - 1}, {n - 1, n}}, {{n - 2, n, -1}, {n, n - 1, 1}}));
  step("Y1^-1Z", y1z, shaped({{n - 2, n - 1}, {n - 1, n}}, {{n - 2, n, -1}}));
  step("[X,X1]", comm, unit(n, q, {{n - 2, n}}));
  step("T=[X,X1]Y1^-1Z", tw, shaped({{n - 2, n - 1}, {n - 1, n}}, {}));
  step("A'T^-1", at, unit(n, q, {{n - 2, n - 1}, {n - 1, n}}));
  step("X1^-1A'T^-1", x1.inverse() * at, unit(n, q, {{n - 2, n - 1}}));

  finish(report, {ap, bp}, opts);
  return report;
}

}  // namespace girthlab
