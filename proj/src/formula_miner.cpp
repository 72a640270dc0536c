// Copyright 2026 The flminer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flminer/formula_miner.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

// Function of at most kMaxVarsPerFormula variables: sorted global variable
// indices plus a truth table (first variable most significant).
struct Sem {
  std::uint8_t n = 0;
  std::array<std::uint16_t, kMaxVarsPerFormula> vars{};
  std::uint64_t table = 0;

  friend bool operator==(const Sem& a, const Sem& b) {
    return a.n == b.n && a.table == b.table &&
           std::equal(a.vars.begin(), a.vars.begin() + a.n, b.vars.begin());
  }
};

struct SemHash {
  std::size_t operator()(const Sem& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.n;
    auto mix = [&](std::uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (std::size_t i = 0; i < s.n; ++i) mix(s.vars[i]);
    mix(s.table);
    return static_cast<std::size_t>(h);
  }
};

constexpr std::uint64_t table_mask(std::size_t n) {
  const std::size_t bits = std::size_t{1} << n;
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// Re-expresses `s` over the sorted variable set `u` (a superset of s.vars).
std::uint64_t expand(const Sem& s, const Sem& u) {
  std::array<std::size_t, kMaxVarsPerFormula> shift{};
  for (std::size_t k = 0, p = 0; k < s.n; ++k) {
    while (u.vars[p] != s.vars[k]) ++p;
    shift[k] = u.n - 1 - p;
  }
  std::uint64_t out = 0;
  const std::size_t bits = std::size_t{1} << u.n;
  for (std::size_t i = 0; i < bits; ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < s.n; ++k) idx = (idx << 1) | ((i >> shift[k]) & 1U);
    out |= ((s.table >> idx) & 1U) << i;
  }
  return out;
}

// Drops variables the function does not depend on.
void reduce(Sem& s) {
  std::size_t p = 0;
  while (p < s.n) {
    const std::size_t bit = s.n - 1 - p;
    const std::size_t bits = std::size_t{1} << s.n;
    bool depends = false;
    for (std::size_t i = 0; i < bits && !depends; ++i) {
      if ((i >> bit) & 1U) continue;
      depends = ((s.table >> i) & 1U) != ((s.table >> (i | (std::size_t{1} << bit))) & 1U);
    }
    if (depends) {
      ++p;
      continue;
    }
    std::uint64_t t = 0;
    const std::size_t half = bits / 2;
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t low = j & ((std::size_t{1} << bit) - 1);
      const std::size_t i = ((j >> bit) << (bit + 1)) | low;
      t |= ((s.table >> i) & 1U) << j;
    }
    for (std::size_t k = p; k + 1 < s.n; ++k) s.vars[k] = s.vars[k + 1];
    --s.n;
    s.table = t;
  }
}

bool constant(const Sem& s) {
  return s.n == 0 || s.table == 0 || s.table == table_mask(s.n);
}

bool unite(const Sem& a, const Sem& b, std::size_t cap, Sem& u) {
  std::size_t i = 0, j = 0;
  u.n = 0;
  while (i < a.n || j < b.n) {
    std::uint16_t v;
    if (j >= b.n || (i < a.n && a.vars[i] < b.vars[j])) {
      v = a.vars[i++];
    } else if (i >= a.n || b.vars[j] < a.vars[i]) {
      v = b.vars[j++];
    } else {
      v = a.vars[i++];
      ++j;
    }
    if (u.n >= cap) return false;
    u.vars[u.n++] = v;
  }
  return true;
}

int precedence(BoolOp op) {
  switch (op) {
    case BoolOp::kImplies: return 1;
    case BoolOp::kOr: return 2;
    case BoolOp::kAnd: return 3;
    case BoolOp::kNot: return 4;
    case BoolOp::kVar: return 5;
  }
  return 5;
}

struct Entry {
  BoolFormula formula;
  std::string text;
  Sem sem;
  BoolOp top;
};

// kImplies here stands for Or(Not a, b).
struct Cand {
  BoolOp op;
  std::uint32_t a;
  std::uint32_t b;
};

struct Slot {
  Cand cand;
  std::string text;
};

class Enumerator {
 public:
  Enumerator(const EnumerationConfig& config, std::size_t workers)
      : config_(config), workers_(std::max<std::size_t>(1, workers)) {}

  std::vector<BoolFormula> run() {
    by_size_.assign(config_.max_size + 1, {});
    for (std::size_t s = 1; s <= config_.max_size; ++s) grow(s);
    std::vector<BoolFormula> out;
    for (const auto& bucket : by_size_) {
      for (auto idx : bucket) {
        if (!constant(entries_[idx].sem)) out.push_back(entries_[idx].formula);
      }
    }
    return out;
  }

 private:
  std::string wrap(std::uint32_t idx, bool paren) const {
    const auto& t = entries_[idx].text;
    return paren ? "(" + t + ")" : t;
  }
  int prec(std::uint32_t idx) const { return precedence(entries_[idx].top); }

  std::string text_of(const Cand& c) const {
    switch (c.op) {
      case BoolOp::kNot: return "!" + wrap(c.a, prec(c.a) < 4);
      case BoolOp::kAnd: return wrap(c.a, prec(c.a) < 3) + " & " + wrap(c.b, prec(c.b) <= 3);
      case BoolOp::kOr: return wrap(c.a, prec(c.a) < 2) + " | " + wrap(c.b, prec(c.b) <= 2);
      default: return wrap(c.a, prec(c.a) <= 1) + " -> " + wrap(c.b, prec(c.b) < 1);
    }
  }

  BoolFormula build(const Cand& c) const {
    const auto& fa = entries_[c.a].formula;
    switch (c.op) {
      case BoolOp::kNot: return BoolFormula::negate(fa);
      case BoolOp::kAnd: return BoolFormula::conj(fa, entries_[c.b].formula);
      case BoolOp::kOr: return BoolFormula::disj(fa, entries_[c.b].formula);
      default: return BoolFormula::implies(fa, entries_[c.b].formula);
    }
  }

  bool semantics(const Cand& c, Sem& out) const {
    const Sem& a = entries_[c.a].sem;
    if (c.op == BoolOp::kNot) {
      out = a;
      out.table = ~a.table & table_mask(a.n);
      return true;
    }
    const Sem& b = entries_[c.b].sem;
    if (!unite(a, b, config_.max_vars_per_formula, out)) return false;
    const std::uint64_t ta = expand(a, out);
    const std::uint64_t tb = expand(b, out);
    switch (c.op) {
      case BoolOp::kAnd: out.table = ta & tb; break;
      case BoolOp::kOr: out.table = ta | tb; break;
      default: out.table = (~ta | tb) & table_mask(out.n); break;
    }
    reduce(out);
    return true;
  }

  using SlotMap = std::unordered_map<Sem, Slot, SemHash>;

  void offer(SlotMap& local, const Cand& c) const {
    Sem sem;
    if (!semantics(c, sem) || constant(sem) || known_.count(sem)) return;
    auto [it, inserted] = local.try_emplace(sem, Slot{c, {}});
    if (inserted) return;
    Slot& slot = it->second;
    if (slot.text.empty()) slot.text = text_of(slot.cand);
    std::string text = text_of(c);
    if (text < slot.text) slot = Slot{c, std::move(text)};
  }

  void generate(std::size_t s, std::size_t worker, SlotMap& local) const {
    std::size_t counter = 0;
    auto mine_turn = [&] { return (counter++ % workers_) == worker; };

    if (config_.operators.negation && s >= 2) {
      for (auto i : by_size_[s - 1]) {
        if (entries_[i].top == BoolOp::kNot) continue;  // !!f is f
        if (mine_turn()) offer(local, {BoolOp::kNot, i, 0});
      }
    }
    auto binary = [&](BoolOp op, std::size_t budget) {
      for (std::size_t s1 = 1; s1 + 1 <= budget; ++s1) {
        const std::size_t s2 = budget - s1;
        for (auto i : by_size_[s1]) {
          if (!mine_turn()) continue;
          for (auto j : by_size_[s2]) {
            if (i == j) continue;
            offer(local, {op, i, j});
          }
        }
      }
    };
    if (s >= 3) {
      if (config_.operators.conjunction) binary(BoolOp::kAnd, s - 1);
      if (config_.operators.disjunction) binary(BoolOp::kOr, s - 1);
    }
    if (config_.operators.implication && s >= 3) binary(BoolOp::kImplies, s - 1);
  }

  void grow(std::size_t s) {
    if (s == 1) {
      for (std::size_t v = 0; v < config_.variables.size(); ++v) {
        Sem sem;
        sem.n = 1;
        sem.vars[0] = static_cast<std::uint16_t>(v);
        sem.table = 0b10;
        add(Entry{BoolFormula::var(config_.variables[v]), config_.variables[v], sem, BoolOp::kVar});
      }
      std::sort(by_size_[1].begin(), by_size_[1].end(), [&](auto x, auto y) {
        return entries_[x].text < entries_[y].text;
      });
      return;
    }

    std::vector<SlotMap> locals(workers_);
    if (workers_ == 1) {
      generate(s, 0, locals[0]);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers_; ++w) {
        threads.emplace_back([&, w] { generate(s, w, locals[w]); });
      }
      for (auto& t : threads) t.join();
    }

    SlotMap merged = std::move(locals[0]);
    for (std::size_t w = 1; w < workers_; ++w) {
      for (auto& [sem, slot] : locals[w]) {
        auto [it, inserted] = merged.try_emplace(sem, slot);
        if (inserted) continue;
        if (it->second.text.empty()) it->second.text = text_of(it->second.cand);
        if (slot.text.empty()) slot.text = text_of(slot.cand);
        if (slot.text < it->second.text) it->second = std::move(slot);
      }
    }

    std::vector<Entry> fresh;
    fresh.reserve(merged.size());
    for (auto& [sem, slot] : merged) {
      if (slot.text.empty()) slot.text = text_of(slot.cand);
      fresh.push_back(Entry{build(slot.cand), std::move(slot.text), sem, slot.cand.op});
    }
    std::sort(fresh.begin(), fresh.end(),
              [](const Entry& x, const Entry& y) { return x.text < y.text; });
    for (auto& e : fresh) add(std::move(e));
  }

  void add(Entry e) {
    const auto size = e.formula.size();
    known_.insert(e.sem);
    by_size_[size].push_back(static_cast<std::uint32_t>(entries_.size()));
    entries_.push_back(std::move(e));
  }

  const EnumerationConfig& config_;
  std::size_t workers_;
  std::vector<Entry> entries_;
  std::vector<std::vector<std::uint32_t>> by_size_;
  std::unordered_set<Sem, SemHash> known_;
};

// Row-parallel bit columns of a Booleanized dataset.
class BitData {
 public:
  explicit BitData(const BooleanizedDataset& data)
      : rows_(data.rows.size()), words_((rows_ + 63) / 64) {
    value_.assign(data.variables.size(), std::vector<std::uint64_t>(words_, 0));
    known_.assign(data.variables.size(), std::vector<std::uint64_t>(words_, 0));
    pos_.assign(words_, 0);
    neg_.assign(words_, 0);
    for (std::size_t v = 0; v < data.variables.size(); ++v) index_.emplace(data.variables[v], v);
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::uint64_t bit = std::uint64_t{1} << (r % 64);
      (data.labels[r] == Label::kPositive ? pos_ : neg_)[r / 64] |= bit;
      for (std::size_t v = 0; v < data.variables.size(); ++v) {
        const Cell c = data.rows[r][v];
        if (c != Cell::kMissing) known_[v][r / 64] |= bit;
        if (c == Cell::kTrue) value_[v][r / 64] |= bit;
      }
    }
  }

  FormulaScore score(const BoolFormula& f) const {
    std::vector<std::uint64_t> known(words_, 0);
    for (std::size_t w = 0; w < words_; ++w) known[w] = pos_[w] | neg_[w];
    for (const auto& name : f.variables()) {
      const auto& k = known_[lookup(name)];
      for (std::size_t w = 0; w < words_; ++w) known[w] &= k[w];
    }
    const auto value = eval(f);
    std::size_t counts[6] = {};
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t kn = known[w];
      const std::uint64_t all = pos_[w] | neg_[w];
      counts[0] += std::popcount(pos_[w] & kn & value[w]);
      counts[1] += std::popcount(pos_[w] & kn & ~value[w]);
      counts[2] += std::popcount(neg_[w] & kn & value[w]);
      counts[3] += std::popcount(neg_[w] & kn & ~value[w]);
      counts[4] += std::popcount(pos_[w] & all & ~kn);
      counts[5] += std::popcount(neg_[w] & all & ~kn);
    }
    return FormulaScore{f, format_formula(f), f.size(),
                        make_stats(counts[0], counts[1], counts[2], counts[3], counts[4],
                                   counts[5])};
  }

  std::size_t lookup(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw Error(ErrorCode::kUnknownVariable, "variable not in dataset: " + name);
    }
    return it->second;
  }

 private:
  std::vector<std::uint64_t> eval(const BoolFormula& f) const {
    switch (f.op()) {
      case BoolOp::kVar: return value_[lookup(f.name())];
      case BoolOp::kNot: {
        auto a = eval(f.lhs());
        for (auto& x : a) x = ~x;
        return a;
      }
      default: {
        auto a = eval(f.lhs());
        const auto b = eval(f.rhs());
        for (std::size_t w = 0; w < words_; ++w) {
          if (f.op() == BoolOp::kAnd) a[w] &= b[w];
          else if (f.op() == BoolOp::kOr) a[w] |= b[w];
          else a[w] = ~a[w] | b[w];
        }
        return a;
      }
    }
  }

  std::size_t rows_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> value_;
  std::vector<std::vector<std::uint64_t>> known_;
  std::vector<std::uint64_t> pos_;
  std::vector<std::uint64_t> neg_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

void validate_enumeration_config(const EnumerationConfig& config) {
  if (config.max_size < 1) throw Error(ErrorCode::kInvalidConfig, "max_size must be >= 1");
  if (config.max_vars_per_formula < 1 || config.max_vars_per_formula > kMaxVarsPerFormula) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("max_vars_per_formula must be in [1, {}]", kMaxVarsPerFormula));
  }
  if (config.variables.size() > 0xFFFF) {
    throw Error(ErrorCode::kInvalidConfig, "too many variables");
  }
  std::set<std::string> seen;
  for (const auto& v : config.variables) {
    if (!seen.insert(v).second) throw Error(ErrorCode::kInvalidConfig, "duplicate variable " + v);
    const auto f = parse_formula(v);
    if (f.op() != BoolOp::kVar) throw Error(ErrorCode::kInvalidConfig, "bad variable name " + v);
  }
}

std::vector<BoolFormula> enumerate_formulas(const EnumerationConfig& config,
                                            std::size_t workers) {
  validate_enumeration_config(config);
  return Enumerator(config, workers).run();
}

ScoreStats make_stats(std::size_t pos_sat, std::size_t pos_unsat, std::size_t neg_sat,
                      std::size_t neg_unsat, std::size_t pos_skipped, std::size_t neg_skipped) {
  ScoreStats s{pos_sat, pos_unsat, neg_sat, neg_unsat, pos_skipped, neg_skipped};
  const std::size_t p = pos_sat + pos_unsat;
  const std::size_t n = neg_sat + neg_unsat;
  s.tpr_defined = p > 0;
  s.tnr_defined = n > 0;
  if (p > 0) s.tpr = static_cast<double>(pos_sat) / static_cast<double>(p);
  if (n > 0) s.tnr = static_cast<double>(neg_unsat) / static_cast<double>(n);
  if (p > 0 && n > 0) {
    // Single rounding of an exact integer numerator keeps j(!f) == -j(f).
    const auto num = static_cast<std::int64_t>(pos_sat * n) +
                     static_cast<std::int64_t>(neg_unsat * p) -
                     static_cast<std::int64_t>(p * n);
    s.j = static_cast<double>(num) / static_cast<double>(p * n);
  } else {
    s.j = s.tpr + s.tnr - 1.0;
  }
  return s;
}

FormulaScore score_formula(const BoolFormula& f, const BooleanizedDataset& data) {
  return BitData(data).score(f);
}

bool ranks_before(const FormulaScore& a, const FormulaScore& b) noexcept {
  const double ja = std::abs(a.stats.j);
  const double jb = std::abs(b.stats.j);
  if (ja != jb) return ja > jb;
  if (a.size != b.size) return a.size < b.size;
  return a.text < b.text;
}

std::vector<FormulaScore> mine(const EnumerationConfig& config, const BooleanizedDataset& data,
                               std::size_t top_k, std::size_t workers) {
  const bool has_pos = std::find(data.labels.begin(), data.labels.end(), Label::kPositive) !=
                       data.labels.end();
  const bool has_neg = std::find(data.labels.begin(), data.labels.end(), Label::kNegative) !=
                       data.labels.end();
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kDegenerateDataset,
                "mining needs at least one positive and one negative row");
  }

  EnumerationConfig effective = config;
  if (effective.variables.empty()) {
    for (std::size_t v = 0; v < data.variables.size(); ++v) {
      const bool present = std::any_of(data.rows.begin(), data.rows.end(),
                                       [&](const auto& row) { return row[v] != Cell::kMissing; });
      if (present) effective.variables.push_back(data.variables[v]);
    }
  }
  const BitData bits(data);
  for (const auto& v : effective.variables) bits.lookup(v);

  const auto formulas = enumerate_formulas(effective, workers);
  std::vector<FormulaScore> scores(formulas.size());
  workers = std::max<std::size_t>(1, std::min(workers, formulas.size()));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < formulas.size(); i += workers) scores[i] = bits.score(formulas[i]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  std::sort(scores.begin(), scores.end(), ranks_before);
  if (scores.size() > top_k) scores.resize(top_k);
  return scores;
}

}  // namespace flminer
