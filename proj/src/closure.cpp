#include "spatial/closure.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "spatial/errors.hpp"

namespace spatial {

// Build-side access to Closure internals, scoped to this translation unit.
struct ClosureAccess {
  static void add_base(Closure& c, Fact f) {
    c.index_.emplace(f, 0);
    c.facts_.push_back(std::move(f));
  }
  static void add_derived(Closure& c, Fact f, Derivation d) {
    c.index_.emplace(f, d.round);
    c.provenance_.emplace(f, std::move(d));
    c.facts_.push_back(std::move(f));
  }
};

namespace {

// Interned fact: rel << 20 | subj << 10 | obj. Entity count is bounded by
// the 15 * n^2 closure guard long before the 1024-id limit matters.
using CFact = uint32_t;

constexpr uint32_t kIdBits = 10;
constexpr uint32_t kIdMask = (1u << kIdBits) - 1;

CFact make_cfact(int rel, int subj, int obj) {
  return (static_cast<uint32_t>(rel) << (2 * kIdBits)) |
         (static_cast<uint32_t>(subj) << kIdBits) | static_cast<uint32_t>(obj);
}

int cfact_rel(CFact f) { return static_cast<int>(f >> (2 * kIdBits)); }
int cfact_subj(CFact f) { return static_cast<int>((f >> kIdBits) & kIdMask); }
int cfact_obj(CFact f) { return static_cast<int>(f & kIdMask); }

// Rank of each relation when ordered by token, so canonical comparisons can
// stay in integer space.
std::array<int, kRelCount> rel_token_ranks() {
  std::array<int, kRelCount> rank{};
  std::vector<std::pair<std::string_view, int>> toks;
  for (int i = 0; i < kRelCount; ++i) toks.emplace_back(rel_token(static_cast<Rel>(i)), i);
  std::sort(toks.begin(), toks.end());
  for (int r = 0; r < kRelCount; ++r) rank[toks[r].second] = r;
  return rank;
}

struct Cand {
  size_t premise_count = 0;
  const std::string* rule_id = nullptr;
  std::vector<CFact> premises;
};

struct Engine {
  const Scene& scene;
  const RuleKB& kb;

  std::vector<std::string> ids;                   // index -> id, scene order
  std::unordered_map<std::string, int> id_index;  // id -> index
  std::vector<int> lex_rank;                      // index -> lexicographic rank
  std::array<int, kRelCount> rel_rank = rel_token_ranks();

  std::unordered_map<CFact, int> round_of;
  std::vector<std::vector<CFact>> by_rel;  // rel -> facts
  std::unordered_map<uint32_t, std::vector<CFact>> by_rel_subj;
  std::unordered_map<uint32_t, std::vector<CFact>> by_rel_obj;

  std::unordered_map<CFact, Cand> pending;  // this round's new facts

  Engine(const Scene& s, const RuleKB& k) : scene(s), kb(k) {}

  bool cfact_less(CFact a, CFact b) const {
    int ra = rel_rank[cfact_rel(a)], rb = rel_rank[cfact_rel(b)];
    if (ra != rb) return ra < rb;
    int sa = lex_rank[cfact_subj(a)], sb = lex_rank[cfact_subj(b)];
    if (sa != sb) return sa < sb;
    return lex_rank[cfact_obj(a)] < lex_rank[cfact_obj(b)];
  }

  bool premises_less(const std::vector<CFact>& a, const std::vector<CFact>& b) const {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
      if (a[i] != b[i]) return cfact_less(a[i], b[i]);
    }
    return a.size() < b.size();
  }

  // Smaller = preferred: multi-premise derivations first, then rule id,
  // then premise facts.
  bool cand_less(const Cand& a, const Cand& b) const {
    if (a.premise_count != b.premise_count) return a.premise_count > b.premise_count;
    if (*a.rule_id != *b.rule_id) return *a.rule_id < *b.rule_id;
    return premises_less(a.premises, b.premises);
  }

  void add_fact(CFact f, int round) {
    round_of.emplace(f, round);
    by_rel[cfact_rel(f)].push_back(f);
    by_rel_subj[(static_cast<uint32_t>(cfact_rel(f)) << kIdBits) | cfact_subj(f)].push_back(f);
    by_rel_obj[(static_cast<uint32_t>(cfact_rel(f)) << kIdBits) | cfact_obj(f)].push_back(f);
  }

  // Semi-naive availability: the delta premise must come from the previous
  // round, earlier positions from strictly older rounds, later positions
  // from anything already derived. This partitions the match space so no
  // derivation is found twice.
  bool available(CFact f, int pos, int delta_pos, int round) const {
    int r = round_of.at(f);
    if (pos == delta_pos) return r == round - 1;
    if (pos < delta_pos) return r <= round - 2;
    return r <= round - 1;
  }

  void premise_candidates(const Pattern& p, const std::array<int, 4>& binding,
                          std::vector<CFact>& out) const {
    out.clear();
    int va = binding[static_cast<int>(p.a)];
    int vb = binding[static_cast<int>(p.b)];
    int rel = static_cast<int>(p.rel);
    if (va >= 0) {
      auto it = by_rel_subj.find((static_cast<uint32_t>(rel) << kIdBits) | va);
      if (it == by_rel_subj.end()) return;
      for (CFact f : it->second) {
        if (vb < 0 || cfact_obj(f) == vb) out.push_back(f);
      }
    } else if (vb >= 0) {
      auto it = by_rel_obj.find((static_cast<uint32_t>(rel) << kIdBits) | vb);
      if (it == by_rel_obj.end()) return;
      out = it->second;
    } else {
      out = by_rel[rel];
    }
  }

  void match_rule(const Rule& rule, int delta_pos, int round) {
    int np = static_cast<int>(rule.premises.size());

    // Join order: the delta premise first, then premises sharing a bound
    // variable, so unconstrained cross products never appear.
    std::vector<int> order{delta_pos};
    std::vector<bool> used(np, false);
    used[delta_pos] = true;
    std::array<bool, 4> bound{};
    auto mark = [&](const Pattern& p) {
      bound[static_cast<int>(p.a)] = true;
      bound[static_cast<int>(p.b)] = true;
    };
    mark(rule.premises[delta_pos]);
    for (int step = 1; step < np; ++step) {
      int best = -1;
      for (int i = 0; i < np; ++i) {
        if (used[i]) continue;
        const Pattern& p = rule.premises[i];
        if (bound[static_cast<int>(p.a)] || bound[static_cast<int>(p.b)]) {
          best = i;
          break;
        }
        if (best < 0) best = i;
      }
      used[best] = true;
      order.push_back(best);
      mark(rule.premises[best]);
    }

    std::array<int, 4> binding{-1, -1, -1, -1};
    std::vector<CFact> chosen(np);

    std::function<void(size_t)> extend = [&](size_t depth) {
      if (depth == order.size()) {
        int cs = binding[static_cast<int>(rule.conclusion.a)];
        int co = binding[static_cast<int>(rule.conclusion.b)];
        if (cs == co) return;  // reflexive conclusion, outside the vocabulary
        CFact c = make_cfact(static_cast<int>(rule.conclusion.rel), cs, co);
        if (round_of.count(c)) return;
        Cand cand;
        cand.premise_count = rule.premises.size();
        cand.rule_id = &rule.id;
        cand.premises.assign(chosen.begin(), chosen.end());
        auto it = pending.find(c);
        if (it == pending.end()) {
          pending.emplace(c, std::move(cand));
        } else if (cand_less(cand, it->second)) {
          it->second = std::move(cand);
        }
        return;
      }
      int pos = order[depth];
      const Pattern& p = rule.premises[pos];
      std::vector<CFact> local;
      premise_candidates(p, binding, local);
      for (CFact f : local) {
        if (!available(f, pos, delta_pos, round)) continue;
        int sa = static_cast<int>(p.a), sb = static_cast<int>(p.b);
        int prev_a = binding[sa], prev_b = binding[sb];
        int fs = cfact_subj(f), fo = cfact_obj(f);
        if (prev_a >= 0 && prev_a != fs) continue;
        if (prev_b >= 0 && prev_b != fo) continue;
        binding[sa] = fs;
        binding[sb] = fo;
        chosen[pos] = f;
        extend(depth + 1);
        binding[sa] = prev_a;
        binding[sb] = prev_b;
      }
    };
    extend(0);
  }

  Fact to_fact(CFact f) const {
    Fact out;
    out.rel = static_cast<Rel>(cfact_rel(f));
    out.subj = ids[cfact_subj(f)];
    out.obj = ids[cfact_obj(f)];
    return out;
  }

  Closure run() {
    by_rel.assign(kRelCount, {});
    for (const Entity& e : scene.entities()) {
      id_index.emplace(e.id, static_cast<int>(ids.size()));
      ids.push_back(e.id);
    }
    if (ids.size() >= kIdMask) {
      throw ResourceLimitError("scene exceeds the entity interning limit");
    }
    {
      std::vector<int> order(ids.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return ids[a] < ids[b]; });
      lex_rank.assign(ids.size(), 0);
      for (size_t r = 0; r < order.size(); ++r) lex_rank[order[r]] = static_cast<int>(r);
    }

    Closure result;
    for (const Fact& f : scene.facts()) {
      CFact cf = make_cfact(static_cast<int>(f.rel), id_index.at(f.subj), id_index.at(f.obj));
      add_fact(cf, 0);
      ClosureAccess::add_base(result, f);
    }

    const size_t n = ids.size();
    const size_t limit = 15 * n * n;

    for (int round = 1;; ++round) {
      pending.clear();
      for (const Rule& rule : kb.rules()) {
        int np = static_cast<int>(rule.premises.size());
        for (int delta_pos = 0; delta_pos < np; ++delta_pos) {
          match_rule(rule, delta_pos, round);
        }
      }
      if (pending.empty()) break;

      std::vector<CFact> fresh;
      fresh.reserve(pending.size());
      for (const auto& [cf, cand] : pending) fresh.push_back(cf);
      std::sort(fresh.begin(), fresh.end(), [this](CFact a, CFact b) { return cfact_less(a, b); });

      for (CFact cf : fresh) {
        const Cand& cand = pending.at(cf);
        add_fact(cf, round);
        Derivation d;
        d.rule_id = *cand.rule_id;
        d.round = round;
        for (CFact p : cand.premises) d.premises.push_back(to_fact(p));
        ClosureAccess::add_derived(result, to_fact(cf), std::move(d));
      }
      if (round_of.size() > limit) {
        throw ResourceLimitError("closure exceeded the 15*n^2 fact bound");
      }
    }
    return result;
  }
};

}  // namespace

size_t Closure::FactHash::operator()(const Fact& f) const {
  size_t h = std::hash<std::string>{}(f.subj);
  h = h * 1315423911u ^ std::hash<std::string>{}(f.obj);
  return h * 31 + static_cast<size_t>(f.rel);
}

bool Closure::is_base(const Fact& f) const {
  auto it = index_.find(f);
  return it != index_.end() && it->second == 0;
}

const Derivation* Closure::derivation_of(const Fact& f) const {
  auto it = provenance_.find(f);
  return it == provenance_.end() ? nullptr : &it->second;
}

Closure close(const Scene& scene, const RuleKB& kb) {
  Engine engine(scene, kb);
  return engine.run();
}

bool closure_consistent(const Closure& closure) {
  for (const Fact& f : closure.facts()) {
    auto opp = opposite_of(f.rel);
    if (!opp) continue;
    Fact mirror;
    mirror.rel = *opp;
    mirror.subj = f.subj;
    mirror.obj = f.obj;
    if (closure.contains(mirror)) return false;
  }
  return true;
}

}  // namespace spatial
