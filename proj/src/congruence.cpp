#include "opal/congruence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace opal {

namespace {

// p ↦ pop(p, x) applied to every state of e.
std::vector<StateSet> pop_after(const Opa& a, const std::vector<StateSet>& e, State x) {
  std::vector<StateSet> out(e.size(), 0);
  for (std::size_t p = 0; p < e.size(); ++p)
    for (StateSet cur = e[p]; cur; cur &= cur - 1) out[p] |= a.pop(static_cast<State>(std::countr_zero(cur)), x);
  return out;
}

std::vector<StateSet> identity(std::size_t n) {
  std::vector<StateSet> r(n);
  for (State p = 0; p < n; ++p) r[p] = state_bit(p);
  return r;
}

// For each state stored at the top level, the set of drain relations of the stacks
// beneath it: p ↦ states reached from p by popping every stored symbol.
std::vector<std::vector<std::vector<StateSet>>> drains(const Opa& a, const RunGraph& r) {
  std::size_t n = a.num_states(), h = r.height();
  std::vector<std::vector<std::vector<StateSet>>> out(n);
  for (State top = 0; top < n; ++top) {
    if (!(r.stored_at(h) & state_bit(top))) continue;
    std::set<std::pair<State, std::vector<StateSet>>> layer{{top, pop_after(a, identity(n), top)}};
    for (std::size_t i = h - 1; i >= 1; --i) {
      std::set<std::pair<State, std::vector<StateSet>>> below;
      for (const auto& [s, e] : layer)
        for (State x = 0; x < n; ++x)
          if (r.rel(i)[x] & state_bit(s)) below.insert({x, pop_after(a, e, x)});
      layer = std::move(below);
    }
    for (const auto& [s, e] : layer) out[top].push_back(e);
    std::sort(out[top].begin(), out[top].end());
    out[top].erase(std::unique(out[top].begin(), out[top].end()), out[top].end());
  }
  return out;
}

RunGraph run_from(const Opa& a, State q, const std::optional<StackSymbol>& top, const Word& w) {
  RunGraph r = RunGraph::start(a, q, top);
  for (Letter x : w)
    if (!r.step(a, x)) break;
  return r;
}

template <typename T>
void hash_mix(std::size_t& h, const T& v) {
  h ^= std::hash<T>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

}  // namespace

Signature signature(const Opa& a, const Word& w) {
  const auto& m = a.matrix();
  TopIndex tops(m.size(), a.num_states());
  Signature s;
  s.profile = profile(m, w);
  s.states = a.num_states();
  s.tops = tops.size();
  s.top_words = (s.tops + 63) / 64;
  s.f.assign(s.states * s.tops, 0);
  s.g.assign(s.states * s.states * s.tops, 0);
  s.phi.assign(s.states * s.tops * s.top_words, 0);
  for (State q = 0; q < s.states; ++q) {
    for (std::size_t t = 0; t < s.tops; ++t) {
      RunGraph r = run_from(a, q, tops.symbol(t), w);
      std::size_t row = q * s.tops + t;
      s.f[row] = r.current();
      if (r.empty()) continue;
      auto set_phi = [&](std::size_t top) { s.phi[row * s.top_words + top / 64] |= std::uint64_t{1} << (top % 64); };
      std::size_t h = r.height();
      if (h == 0) {
        set_phi(0);
        for (State q2 = 0; q2 < s.states; ++q2) s.g[(q * s.states + q2) * s.tops + t] = state_bit(q2);
        continue;
      }
      StateSet stored = r.stored_at(h);
      for (State x = 0; x < s.states; ++x)
        if (stored & state_bit(x)) set_phi(tops.of(StackSymbol{r.letters().back(), x}));
      // d[x][q2]: states reached from q2 after popping the levels from the top down to one storing x.
      std::vector<std::vector<StateSet>> d(s.states);
      for (State x = 0; x < s.states; ++x)
        if (stored & state_bit(x)) d[x] = pop_after(a, identity(s.states), x);
      for (std::size_t i = h - 1; i >= 1; --i) {
        std::vector<std::vector<StateSet>> below(s.states);
        for (State x = 0; x < s.states; ++x) {
          if (!r.rel(i)[x]) continue;
          std::vector<StateSet> acc(s.states, 0);
          for (State y = 0; y < s.states; ++y) {
            if (!(r.rel(i)[x] & state_bit(y))) continue;
            auto e = pop_after(a, d[y], x);
            for (State p = 0; p < s.states; ++p) acc[p] |= e[p];
          }
          below[x] = std::move(acc);
        }
        d = std::move(below);
      }
      for (State x = 0; x < s.states; ++x)
        if (r.rel(0)[0] & state_bit(x))
          for (State q2 = 0; q2 < s.states; ++q2) s.g[(q * s.states + q2) * s.tops + t] |= d[x][q2];
    }
  }
  return s;
}

std::size_t SignatureHash::operator()(const Signature& s) const noexcept {
  std::size_t h = ProfileHash{}(s.profile);
  for (auto v : s.f) hash_mix(h, v);
  for (auto v : s.g) hash_mix(h, v);
  for (auto v : s.phi) hash_mix(h, v);
  return h;
}

bool leq_struct(const Signature& x, const Signature& y) {
  if (!(x.profile == y.profile)) return false;
  auto sub = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] & ~b[i]) return false;
    return true;
  };
  return sub(x.f, y.f) && sub(x.g, y.g) && sub(x.phi, y.phi);
}

bool equiv_struct(const Signature& x, const Signature& y) { return x == y; }

RunSummary run_summary(const Opa& a, const Word& w) {
  const auto& m = a.matrix();
  TopIndex tops(m.size(), a.num_states());
  RunSummary s;
  s.profile = profile(m, w);
  s.items.resize(a.num_states() * tops.size());
  for (State q = 0; q < a.num_states(); ++q) {
    for (std::size_t t = 0; t < tops.size(); ++t) {
      RunGraph r = run_from(a, q, tops.symbol(t), w);
      auto& items = s.items[q * tops.size() + t];
      std::size_t h = r.height();
      if (h == 0) {
        for (State p = 0; p < a.num_states(); ++p)
          if (r.current() & state_bit(p)) items.push_back({p, 0, identity(a.num_states())});
        continue;
      }
      auto below = drains(a, r);
      for (State x = 0; x < a.num_states(); ++x) {
        auto top = static_cast<std::uint32_t>(tops.of(StackSymbol{r.letters().back(), x}));
        for (State p = 0; p < a.num_states(); ++p)
          if (r.rel(h)[x] & state_bit(p))
            for (const auto& e : below[x]) items.push_back({p, top, e});
      }
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
    }
  }
  return s;
}

bool leq_summary(const RunSummary& x, const RunSummary& y) {
  if (!(x.profile == y.profile) || x.items.size() != y.items.size()) return false;
  for (std::size_t i = 0; i < x.items.size(); ++i)
    if (!std::includes(y.items[i].begin(), y.items[i].end(), x.items[i].begin(), x.items[i].end())) return false;
  return true;
}

std::string format_signature(const Opa& a, const Signature& s, bool machine) {
  const auto& m = a.matrix();
  TopIndex tops(m.size(), a.num_states());
  auto top_name = [&](std::size_t t) {
    auto sym = tops.symbol(t);
    if (!sym) return std::string("⊥");
    return "⟨" + a.state_name(sym->state) + "," + m.format_letter(sym->letter) + "⟩";
  };
  auto states = [&](StateSet set) {
    std::string out;
    for (State q = 0; q < a.num_states(); ++q)
      if (set & state_bit(q)) out += (out.empty() ? "" : ",") + a.state_name(q);
    return machine ? out : "{" + out + "}";
  };
  std::ostringstream out;
  auto row = [&](std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      out << (first ? "" : machine ? "\t" : " ") << c;
      first = false;
    }
    out << "\n";
  };
  row({"profile", format_profile(m, s.profile)});
  for (State q = 0; q < s.states; ++q)
    for (std::size_t t = 0; t < s.tops; ++t)
      if (s.f_at(q, t)) row({"f", a.state_name(q), top_name(t), states(s.f_at(q, t))});
  for (State q = 0; q < s.states; ++q)
    for (std::size_t t = 0; t < s.tops; ++t) {
      std::string tops_reached;
      for (std::size_t u = 0; u < s.tops; ++u)
        if (s.phi_has(q, t, u)) tops_reached += (tops_reached.empty() ? "" : ",") + top_name(u);
      if (!tops_reached.empty()) row({"phi", a.state_name(q), top_name(t), machine ? tops_reached : "{" + tops_reached + "}"});
    }
  for (State q1 = 0; q1 < s.states; ++q1)
    for (State q2 = 0; q2 < s.states; ++q2)
      for (std::size_t t = 0; t < s.tops; ++t)
        if (s.g_at(q1, q2, t)) row({"g", a.state_name(q1), a.state_name(q2), top_name(t), states(s.g_at(q1, q2, t))});
  return out.str();
}

namespace {

struct ClassIndex {
  std::unordered_map<Signature, std::size_t, SignatureHash> by_sig;
  std::unordered_set<Profile, ProfileHash> profiles;
  ClassEnumeration out;

  void add(const Word& w, Signature&& s) {
    ++out.words;
    profiles.insert(s.profile);
    auto it = by_sig.find(s);
    if (it != by_sig.end()) {
      ++out.classes[it->second].members;
      return;
    }
    by_sig.emplace(s, out.classes.size());
    out.classes.push_back({w, std::move(s), 1});
  }
  ClassEnumeration finish() {
    out.profiles = profiles.size();
    return std::move(out);
  }
};

}  // namespace

ClassEnumeration enumerate_classes(const Opa& a, std::size_t max_len) {
  ClassIndex index;
  for (std::size_t n = 0; n <= max_len; ++n) {
    auto words = words_of_length(a.matrix().size(), n);
    std::vector<Signature> sigs(words.size());
    long count = static_cast<long>(words.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < count; ++i) sigs[i] = signature(a, words[i]);
    for (std::size_t i = 0; i < words.size(); ++i) index.add(words[i], std::move(sigs[i]));
  }
  return index.finish();
}

namespace reference {
ClassEnumeration enumerate_classes_serial(const Opa& a, std::size_t max_len) {
  ClassIndex index;
  for (std::size_t n = 0; n <= max_len; ++n)
    for (const auto& w : words_of_length(a.matrix().size(), n)) index.add(w, signature(a, w));
  return index.finish();
}
}  // namespace reference

double log2_class_bound(std::size_t sigma, std::size_t states) {
  double s = static_cast<double>(sigma), q = static_cast<double>(states);
  double g1 = s * q + 1;
  double profiles = (sigma ? 2 * std::log2(s) : 0) + 2 * s;
  return profiles + q * q * g1 + q * q * q * g1 + g1 * q * g1;
}

bool context_qualifies(const PrecedenceMatrix& m, const Context& c, const Word& x) {
  Word left = c.u0;
  if (!x.empty()) left.push_back(x.front());
  Word right;
  if (!x.empty()) right.push_back(x.back());
  right.insert(right.end(), c.v0.begin(), c.v0.end());
  return in_popeq(m, left) && in_pusheq(m, right) && chain_context(m, c.u, concat({c.u0, x, c.v0}), c.v);
}

std::vector<Context> enumerate_contexts(const PrecedenceMatrix& m, std::size_t max_total) {
  std::vector<Context> out;
  for (std::size_t total = 0; total <= max_total; ++total) {
    auto words = words_of_length(m.size(), total);
    for (std::size_t l1 = 0; l1 <= total; ++l1)
      for (std::size_t l2 = 0; l1 + l2 <= total; ++l2)
        for (std::size_t l3 = 0; l1 + l2 + l3 <= total; ++l3) {
          for (const auto& w : words) {
            auto at = [&](std::size_t from, std::size_t len) { return Word(w.begin() + from, w.begin() + from + len); };
            out.push_back({at(0, l1), at(l1, l2), at(l1 + l2, l3), at(l1 + l2 + l3, total - l1 - l2 - l3)});
          }
        }
  }
  return out;
}

Refutation refute_syntactic_equiv(const std::function<bool(const Word&)>& member, const PrecedenceMatrix& m,
                                  const Word& x, const Word& y, const std::vector<Context>& contexts) {
  Refutation r;
  if (!profiles_equal(m, x, y)) {
    r.kind = Refutation::Kind::Refuted;
    r.reason = Refutation::Reason::ProfileMismatch;
    return r;
  }
  for (const auto& c : contexts) {
    if (!context_qualifies(m, c, x) || !context_qualifies(m, c, y)) continue;
    ++r.tried;
    if (member(concat({c.u, c.u0, x, c.v0, c.v})) != member(concat({c.u, c.u0, y, c.v0, c.v}))) {
      r.kind = Refutation::Kind::Refuted;
      r.reason = Refutation::Reason::Membership;
      r.context = c;
      return r;
    }
  }
  return r;
}

}  // namespace opal
