#include "enrlog/vbase.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace enrlog {

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

std::string object_key(const VObject& v) {
  std::ostringstream os;
  switch (v.base) {
    case Base::FinSet:
      os << "S" << v.n;
      break;
    case Base::FinPos:
      os << "P" << v.n << ":";
      for (auto& row : v.leq)
        for (char c : row) os << (c ? '1' : '0');
      break;
    case Base::FinMet:
      os << "M" << v.n << ":";
      for (int i = 0; i < v.n; ++i)
        for (int j = i + 1; j < v.n; ++j) os << v.dist[i][j].str() << ",";
      break;
    case Base::FinAb:
      if (v.ab_unit) {
        os << "AI";
      } else {
        os << "A" << v.n << ":";
        for (auto& row : v.add)
          for (int x : row) os << x << ",";
      }
      break;
  }
  return os.str();
}

}  // namespace

std::string base_name(Base b) {
  switch (b) {
    case Base::FinSet: return "finset";
    case Base::FinPos: return "finpos";
    case Base::FinMet: return "finmet";
    case Base::FinAb: return "finab";
  }
  return "?";
}

Obj finish_object(VObject v) {
  if ((int)v.labels.size() != v.n) v.labels = default_labels(v.n);
  v.key_ = object_key(v);
  return std::make_shared<const VObject>(std::move(v));
}

int VObject::neg(int i) const {
  for (int j = 0; j < n; ++j)
    if (add[i][j] == zero) return j;
  throw std::logic_error("element without inverse");
}

int VObject::order_of(int i) const {
  int x = i, ord = 1;
  while (x != zero) {
    x = add[x][i];
    ++ord;
  }
  return ord;
}

// ---------------------------------------------------------------------------
// Factories

Obj make_finset(int n, std::vector<std::string> labels) {
  require(n >= 0, "finset: negative size");
  VObject v;
  v.base = Base::FinSet;
  v.n = n;
  v.labels = std::move(labels);
  return finish_object(std::move(v));
}

Obj make_finpos(int n, std::vector<std::vector<char>> leq, std::vector<std::string> labels) {
  require((int)leq.size() == n, "finpos: order table size mismatch");
  for (auto& row : leq) require((int)row.size() == n, "finpos: order table size mismatch");
  for (int i = 0; i < n; ++i) require(leq[i][i], "finpos: order not reflexive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && leq[i][j] && leq[j][i]) fail("finpos: order not antisymmetric");
      for (int k = 0; k < n; ++k)
        if (leq[i][j] && leq[j][k] && !leq[i][k]) fail("finpos: order not transitive");
    }
  VObject v;
  v.base = Base::FinPos;
  v.n = n;
  v.leq = std::move(leq);
  v.labels = std::move(labels);
  return finish_object(std::move(v));
}

Obj make_finmet(int n, std::vector<std::vector<Dist>> dist, std::vector<std::string> labels) {
  require((int)dist.size() == n, "finmet: distance table size mismatch");
  for (auto& row : dist) require((int)row.size() == n, "finmet: distance table size mismatch");
  for (int i = 0; i < n; ++i) {
    require(dist[i][i] == Dist(0), "finmet: d(x,x) must be 0");
    for (int j = 0; j < n; ++j) {
      require(dist[i][j] == dist[j][i], "finmet: distance not symmetric");
      if (i != j) {
        require(!(dist[i][j] == Dist(0)), "finmet: distinct points at distance 0");
        require(dist[i][j].inf || dist[i][j].q >= Rat(0), "finmet: negative distance");
      }
      for (int k = 0; k < n; ++k)
        require(dist[i][k] <= dist[i][j] + dist[j][k], "finmet: triangle inequality violated");
    }
  }
  VObject v;
  v.base = Base::FinMet;
  v.n = n;
  v.dist = std::move(dist);
  v.labels = std::move(labels);
  return finish_object(std::move(v));
}

Obj make_finab_table(std::vector<std::vector<int>> add, std::vector<std::string> labels) {
  int n = (int)add.size();
  require(n >= 1, "finab: group must be nonempty");
  for (auto& row : add) require((int)row.size() == n, "finab: operation table size mismatch");
  for (auto& row : add)
    for (int x : row) require(x >= 0 && x < n, "finab: table entry out of range");
  // find identity
  int zero = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = add[e][x] == x && add[x][e] == x;
    if (ok) {
      zero = e;
      break;
    }
  }
  require(zero >= 0, "finab: no identity element");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      require(add[i][j] == add[j][i], "finab: operation not commutative");
      for (int k = 0; k < n; ++k)
        require(add[add[i][j]][k] == add[i][add[j][k]], "finab: operation not associative");
    }
  for (int i = 0; i < n; ++i) {
    bool has_inv = false;
    for (int j = 0; j < n; ++j) has_inv = has_inv || add[i][j] == zero;
    require(has_inv, "finab: element without inverse");
  }
  VObject v;
  v.base = Base::FinAb;
  v.n = n;
  v.add = std::move(add);
  v.zero = zero;
  v.labels = std::move(labels);
  return finish_object(std::move(v));
}

Obj make_finab_cyclic(const std::vector<int>& factors) {
  std::vector<int> fs;
  for (int d : factors) {
    require(d >= 1, "finab: cyclic factor must be positive");
    if (d > 1) fs.push_back(d);
  }
  int n = 1;
  for (int d : fs) n *= d;
  int k = (int)fs.size();
  auto coords = [&](int x) {
    std::vector<int> c(k);
    for (int i = k - 1; i >= 0; --i) {
      c[i] = x % fs[i];
      x /= fs[i];
    }
    return c;
  };
  auto index = [&](const std::vector<int>& c) {
    int x = 0;
    for (int i = 0; i < k; ++i) x = x * fs[i] + c[i];
    return x;
  };
  std::vector<std::vector<int>> add(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    auto cx = coords(x);
    if (k <= 1) {
      labels[x] = std::to_string(x);
    } else {
      std::string s = "(";
      for (int i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(cx[i]);
      labels[x] = s + ")";
    }
    for (int y = 0; y < n; ++y) {
      auto cy = coords(y);
      std::vector<int> cz(k);
      for (int i = 0; i < k; ++i) cz[i] = (cx[i] + cy[i]) % fs[i];
      add[x][y] = index(cz);
    }
  }
  return make_finab_table(std::move(add), std::move(labels));
}

Obj make_ab_unit() {
  VObject v;
  v.base = Base::FinAb;
  v.n = 1;
  v.add = {{0}};
  v.zero = 0;
  v.ab_unit = true;
  v.labels = {"1"};
  return finish_object(std::move(v));
}

Obj unit_object(Base b) {
  static const Obj set1 = make_finset(1, {"*"});
  static const Obj pos1 = make_finpos(1, {{1}}, {"*"});
  static const Obj met1 = make_finmet(1, {{Dist(0)}}, {"*"});
  static const Obj ab = make_ab_unit();
  switch (b) {
    case Base::FinSet: return set1;
    case Base::FinPos: return pos1;
    case Base::FinMet: return met1;
    case Base::FinAb: return ab;
  }
  throw std::logic_error("bad base");
}

Obj initial_object(Base b) {
  switch (b) {
    case Base::FinSet: return make_finset(0);
    case Base::FinPos: return make_finpos(0, {});
    case Base::FinMet: return make_finmet(0, {});
    case Base::FinAb: return make_finab_cyclic({});
  }
  throw std::logic_error("bad base");
}

Obj terminal_object(Base b) {
  if (b == Base::FinAb) return make_finab_cyclic({});
  Obj u = unit_object(b);
  return u;
}

Obj discrete_object(Base b, int n) {
  switch (b) {
    case Base::FinSet: return make_finset(n);
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
      for (int i = 0; i < n; ++i) leq[i][i] = 1;
      return make_finpos(n, std::move(leq));
    }
    case Base::FinMet: {
      std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n, Dist::infinity()));
      for (int i = 0; i < n; ++i) d[i][i] = Dist(0);
      return make_finmet(n, std::move(d));
    }
    case Base::FinAb:
      fail("discrete objects over finab are not defined");
  }
  throw std::logic_error("bad base");
}

bool same_object(const Obj& a, const Obj& b) {
  return a == b || (a && b && a->key() == b->key());
}

// ---------------------------------------------------------------------------
// Morphisms

Morph identity(const Obj& a) {
  Morph f;
  f.dom = a;
  f.cod = a;
  f.map.resize(a->n);
  std::iota(f.map.begin(), f.map.end(), 0);
  return f;
}

// Composites through the symbolic FinAb unit collapse to the zero morphism:
// the only homomorphism from a finite group into Z is zero.
Morph compose(const Morph& g, const Morph& f) {
  require(same_object(f.cod, g.dom), "compose: middle objects differ");
  Morph h;
  h.dom = f.dom;
  h.cod = g.cod;
  if (f.cod->ab_unit && !f.dom->ab_unit) {
    require(!g.cod->ab_unit, "compose: unsupported composite through the finab unit");
    h.map.assign(f.dom->n, g.cod->zero);
    return h;
  }
  h.map.resize(f.map.size());
  for (size_t i = 0; i < f.map.size(); ++i) h.map[i] = g.map[f.map[i]];
  return h;
}

bool morphisms_equal(const Morph& f, const Morph& g) {
  return same_object(f.dom, g.dom) && same_object(f.cod, g.cod) && f.map == g.map;
}

bool is_valid_morphism(const Morph& f) {
  const VObject& a = *f.dom;
  const VObject& b = *f.cod;
  if (a.base != b.base) return false;
  if ((int)f.map.size() != a.n) return false;
  for (int x : f.map)
    if (x < 0 || x >= b.n) return false;
  switch (a.base) {
    case Base::FinSet:
      return true;
    case Base::FinPos:
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          if (a.leq[i][j] && !b.leq[f.map[i]][f.map[j]]) return false;
      return true;
    case Base::FinMet:
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          if (!(b.dist[f.map[i]][f.map[j]] <= a.dist[i][j])) return false;
      return true;
    case Base::FinAb:
      if (a.ab_unit) return true;  // Z -> B: the generator may go anywhere
      if (b.ab_unit) {
        // only the zero map exists; the unit has a single point
        return true;
      }
      if (f.map[a.zero] != b.zero) return false;
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          if (f.map[a.add[i][j]] != b.add[f.map[i]][f.map[j]]) return false;
      return true;
  }
  return false;
}

void check_morphism(const Morph& f) {
  require(is_valid_morphism(f), "invalid morphism for base " + base_name(f.dom->base));
}

bool in_e(const Morph& f) {
  if (f.dom->base == Base::FinAb && f.dom->ab_unit && !f.cod->ab_unit) {
    // Z -> A is a surjection iff the image of the generator generates A
    return (int)ab_generated_subgroup(f.cod, {f.map[0]}).size() == f.cod->n;
  }
  std::vector<char> hit(f.cod->n, 0);
  for (int x : f.map) hit[x] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool in_m(const Morph& f) {
  const VObject& a = *f.dom;
  const VObject& b = *f.cod;
  if (a.base == Base::FinAb && a.ab_unit && !b.ab_unit) return false;  // Z is infinite
  std::vector<char> seen(b.n, 0);
  for (int x : f.map) {
    if (seen[x]) return false;
    seen[x] = 1;
  }
  switch (a.base) {
    case Base::FinSet:
    case Base::FinAb:
      return true;
    case Base::FinPos:  // fullness
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          if (b.leq[f.map[i]][f.map[j]] && !a.leq[i][j]) return false;
      return true;
    case Base::FinMet:  // isometry
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          if (!(b.dist[f.map[i]][f.map[j]] == a.dist[i][j])) return false;
      return true;
  }
  return false;
}

bool is_iso(const Morph& f) {
  if (f.dom->ab_unit != f.cod->ab_unit) return false;
  if (f.dom->n != f.cod->n) return false;
  return in_e(f) && in_m(f);
}

Morph inverse(const Morph& f) {
  require(is_iso(f), "inverse: morphism is not invertible");
  Morph g;
  g.dom = f.cod;
  g.cod = f.dom;
  g.map.resize(f.cod->n);
  for (int i = 0; i < f.dom->n; ++i) g.map[f.map[i]] = i;
  return g;
}

// ---------------------------------------------------------------------------
// Hom-set enumeration

namespace {

// Backtracking enumeration for FinPos / FinMet (prunes on the payload).
void hom_backtrack(const VObject& x, const VObject& a, std::vector<int>& cur, int next,
                   std::vector<std::vector<int>>& out) {
  if (next == x.n) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c < a.n; ++c) {
    bool ok = true;
    for (int p = 0; p < next && ok; ++p) {
      if (x.base == Base::FinPos) {
        if (x.leq[p][next] && !a.leq[cur[p]][c]) ok = false;
        if (x.leq[next][p] && !a.leq[c][cur[p]]) ok = false;
      } else {
        if (!(a.dist[cur[p]][c] <= x.dist[p][next])) ok = false;
      }
    }
    if (!ok) continue;
    cur[next] = c;
    hom_backtrack(x, a, cur, next + 1, out);
  }
}

// Greedy generating sequence for a finite abelian group (not necessarily a
// direct-sum basis) together with word representations of every element.
struct AbGenerators {
  std::vector<int> gens;
  std::vector<std::vector<int>> rep;  // rep[x][i] = coefficient of gens[i]
};

AbGenerators ab_generators(const VObject& g) {
  AbGenerators r;
  std::vector<int> reach(g.n, -1);
  std::vector<std::vector<int>> rep(g.n);
  reach[g.zero] = 0;
  rep[g.zero] = {};
  int covered = 1;
  while (covered < g.n) {
    int pick = -1;
    for (int x = 0; x < g.n && pick < 0; ++x)
      if (reach[x] < 0) pick = x;
    int gi = (int)r.gens.size();
    r.gens.push_back(pick);
    // extend every representable element by multiples of the new generator
    std::vector<int> ord_gen = {g.zero};
    int acc = pick;
    while (acc != g.zero) {
      ord_gen.push_back(acc);
      acc = g.add[acc][pick];
    }
    for (int x = 0; x < g.n; ++x) {
      if (reach[x] < 0) continue;
      rep[x].resize(gi + 1, 0);
    }
    std::vector<int> base_elems;
    for (int x = 0; x < g.n; ++x)
      if (reach[x] >= 0) base_elems.push_back(x);
    for (int x : base_elems) {
      int cur = x;
      for (int k = 1; k < (int)ord_gen.size(); ++k) {
        cur = g.add[cur][pick];
        if (reach[cur] < 0) {
          reach[cur] = 0;
          rep[cur] = rep[x];
          rep[cur].resize(gi + 1, 0);
          rep[cur][gi] = k;
          ++covered;
        }
      }
    }
  }
  for (auto& w : rep) w.resize(r.gens.size(), 0);
  r.rep = std::move(rep);
  return r;
}

std::vector<std::vector<int>> hom_set_finab(const VObject& x, const VObject& a) {
  std::vector<std::vector<int>> out;
  if (x.ab_unit) {
    for (int i = 0; i < a.n; ++i) out.push_back({i});
    return out;
  }
  if (a.ab_unit) {
    // hom(X, Z) = 0 for finite X
    out.push_back(std::vector<int>(x.n, 0));
    return out;
  }
  AbGenerators gen = ab_generators(x);
  int k = (int)gen.gens.size();
  std::vector<int> choice(k, 0);
  std::vector<int> mult(a.n);
  while (true) {
    // candidate map: f(sum c_i g_i) = sum c_i y_i
    std::vector<int> f(x.n);
    for (int e = 0; e < x.n; ++e) {
      int val = a.zero;
      for (int i = 0; i < k; ++i) {
        int y = choice[i];
        for (int c = 0; c < gen.rep[e][i]; ++c) val = a.add[val][y];
      }
      f[e] = val;
    }
    bool ok = true;
    for (int i = 0; i < x.n && ok; ++i)
      for (int j = 0; j < x.n && ok; ++j)
        if (f[x.add[i][j]] != a.add[f[i]][f[j]]) ok = false;
    if (ok) out.push_back(std::move(f));
    int i = 0;
    for (; i < k; ++i) {
      if (++choice[i] < a.n) break;
      choice[i] = 0;
    }
    if (i == k) break;
    if (k == 0) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<std::vector<int>> hom_set(const Obj& x, const Obj& a) {
  require(x->base == a->base, "hom_set: base mismatch");
  if (x->base == Base::FinAb) return hom_set_finab(*x, *a);
  std::vector<std::vector<int>> out;
  if (x->n == 0) {
    out.push_back({});
    return out;
  }
  if (a->n == 0) return out;
  if (x->base == Base::FinSet) {
    std::vector<int> cur(x->n, 0);
    while (true) {
      out.push_back(cur);
      int i = x->n - 1;
      for (; i >= 0; --i) {
        if (++cur[i] < a->n) break;
        cur[i] = 0;
      }
      if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<int> cur(x->n, 0);
  hom_backtrack(*x, *a, cur, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Tensor

namespace {

// Direct-sum basis of a finite abelian group, found by backtracking.
struct AbBasis {
  std::vector<int> gens;
  std::vector<int> orders;
  std::vector<std::vector<int>> coords;  // coords[x][i]
};

bool ab_basis_search(const VObject& g, std::vector<int>& gens, std::vector<int>& subgroup) {
  if ((int)subgroup.size() == g.n) return true;
  std::set<int> in(subgroup.begin(), subgroup.end());
  for (int cand = 0; cand < g.n; ++cand) {
    if (in.count(cand)) continue;
    // candidate must intersect the current subgroup trivially
    bool direct = true;
    int acc = cand;
    int ord = 1;
    while (acc != g.zero) {
      if (in.count(acc)) {
        direct = false;
        break;
      }
      acc = g.add[acc][cand];
      ++ord;
    }
    if (!direct) continue;
    std::vector<int> bigger;
    for (int s : subgroup) {
      int cur = s;
      for (int k = 0; k < ord; ++k) {
        bigger.push_back(cur);
        cur = g.add[cur][cand];
      }
    }
    std::sort(bigger.begin(), bigger.end());
    gens.push_back(cand);
    if (ab_basis_search(g, gens, bigger)) return true;
    gens.pop_back();
  }
  return false;
}

AbBasis ab_basis(const VObject& g) {
  AbBasis b;
  std::vector<int> subgroup = {g.zero};
  if (!ab_basis_search(g, b.gens, subgroup)) throw std::logic_error("finab: no direct-sum basis found");
  for (int gen : b.gens) {
    int ord = 1, acc = gen;
    while (acc != g.zero) {
      acc = g.add[acc][gen];
      ++ord;
    }
    b.orders.push_back(ord);
  }
  // coordinates of every element
  int k = (int)b.gens.size();
  b.coords.assign(g.n, {});
  std::vector<int> c(k, 0);
  while (true) {
    int x = g.zero;
    for (int i = 0; i < k; ++i) {
      for (int t = 0; t < c[i]; ++t) x = g.add[x][b.gens[i]];
    }
    b.coords[x] = c;
    int i = 0;
    for (; i < k; ++i) {
      if (++c[i] < b.orders[i]) break;
      c[i] = 0;
    }
    if (i == k) break;
    if (k == 0) break;
  }
  return b;
}

}  // namespace

TensorResult tensor(const Obj& x, const Obj& y) {
  require(x->base == y->base, "tensor: base mismatch");
  TensorResult r;
  r.lhs_n = x->n;
  r.rhs_n = y->n;
  Base b = x->base;
  if (b == Base::FinAb) {
    if (x->ab_unit) {
      r.obj = y;
      r.pair_index.assign(1, std::vector<int>(y->n));
      for (int j = 0; j < y->n; ++j) r.pair_index[0][j] = j;
      return r;
    }
    if (y->ab_unit) {
      r.obj = x;
      r.pair_index.assign(x->n, std::vector<int>(1));
      for (int i = 0; i < x->n; ++i) r.pair_index[i][0] = i;
      return r;
    }
    AbBasis bx = ab_basis(*x), by = ab_basis(*y);
    std::vector<int> factors;
    for (int p : bx.orders)
      for (int q : by.orders) factors.push_back(std::gcd(p, q));
    Obj t = make_finab_cyclic(factors);
    // index arithmetic of make_finab_cyclic over factors > 1, in order
    std::vector<int> fs;
    for (int d : factors)
      if (d > 1) fs.push_back(d);
    auto index = [&](const std::vector<int>& c) {
      int v = 0;
      for (size_t i = 0; i < fs.size(); ++i) v = v * fs[i] + c[i];
      return v;
    };
    r.obj = t;
    r.pair_index.assign(x->n, std::vector<int>(y->n));
    for (int i = 0; i < x->n; ++i)
      for (int j = 0; j < y->n; ++j) {
        std::vector<int> c;
        for (size_t a = 0; a < bx.orders.size(); ++a)
          for (size_t bq = 0; bq < by.orders.size(); ++bq) {
            int g = std::gcd(bx.orders[a], by.orders[bq]);
            if (g > 1) c.push_back((bx.coords[i][a] * by.coords[j][bq]) % g);
          }
        r.pair_index[i][j] = index(c);
      }
    return r;
  }
  int n = x->n * y->n;
  std::vector<std::string> labels(n);
  for (int i = 0; i < x->n; ++i)
    for (int j = 0; j < y->n; ++j) labels[i * y->n + j] = "(" + x->label(i) + "," + y->label(j) + ")";
  switch (b) {
    case Base::FinSet:
      r.obj = make_finset(n, std::move(labels));
      break;
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
      for (int i = 0; i < x->n; ++i)
        for (int j = 0; j < y->n; ++j)
          for (int i2 = 0; i2 < x->n; ++i2)
            for (int j2 = 0; j2 < y->n; ++j2)
              leq[i * y->n + j][i2 * y->n + j2] = x->leq[i][i2] && y->leq[j][j2];
      r.obj = make_finpos(n, std::move(leq), std::move(labels));
      break;
    }
    case Base::FinMet: {
      // sum (l1) metric: makes the sup-metric power right adjoint
      std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n));
      for (int i = 0; i < x->n; ++i)
        for (int j = 0; j < y->n; ++j)
          for (int i2 = 0; i2 < x->n; ++i2)
            for (int j2 = 0; j2 < y->n; ++j2)
              d[i * y->n + j][i2 * y->n + j2] = x->dist[i][i2] + y->dist[j][j2];
      r.obj = make_finmet(n, std::move(d), std::move(labels));
      break;
    }
    default:
      throw std::logic_error("unreachable");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coproduct / product

CoproductResult coproduct(Base b, const std::vector<Obj>& parts) {
  for (auto& p : parts) require(p->base == b, "coproduct: base mismatch");
  CoproductResult r;
  if (b == Base::FinAb) {
    for (auto& p : parts) require(!p->ab_unit, "coproduct: the finab unit is not finitely representable here");
    ProductResult pr = product(b, parts);
    r.obj = pr.obj;
    // injections: extend by zero
    for (size_t i = 0; i < parts.size(); ++i) {
      Morph in;
      in.dom = parts[i];
      in.cod = r.obj;
      in.map.resize(parts[i]->n);
      for (int x = 0; x < parts[i]->n; ++x) {
        std::vector<int> tup(parts.size());
        for (size_t j = 0; j < parts.size(); ++j) tup[j] = (i == j) ? x : parts[j]->zero;
        in.map[x] = pr.index_of(tup);
      }
      r.in.push_back(std::move(in));
    }
    return r;
  }
  int total = 0;
  for (auto& p : parts) {
    r.offset.push_back(total);
    total += p->n;
  }
  std::vector<std::string> labels(total);
  std::set<std::string> seen;
  bool clash = false;
  for (auto& p : parts)
    for (auto& l : p->labels) clash = clash || !seen.insert(l).second;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int x = 0; x < parts[i]->n; ++x)
      labels[r.offset[i] + x] = clash ? "b" + std::to_string(i) + "." + parts[i]->label(x) : parts[i]->label(x);
  switch (b) {
    case Base::FinSet:
      r.obj = make_finset(total, std::move(labels));
      break;
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(total, std::vector<char>(total, 0));
      for (size_t i = 0; i < parts.size(); ++i)
        for (int x = 0; x < parts[i]->n; ++x)
          for (int y = 0; y < parts[i]->n; ++y) leq[r.offset[i] + x][r.offset[i] + y] = parts[i]->leq[x][y];
      for (int x = 0; x < total; ++x) leq[x][x] = 1;
      r.obj = make_finpos(total, std::move(leq), std::move(labels));
      break;
    }
    case Base::FinMet: {
      std::vector<std::vector<Dist>> d(total, std::vector<Dist>(total, Dist::infinity()));
      for (size_t i = 0; i < parts.size(); ++i)
        for (int x = 0; x < parts[i]->n; ++x)
          for (int y = 0; y < parts[i]->n; ++y) d[r.offset[i] + x][r.offset[i] + y] = parts[i]->dist[x][y];
      for (int x = 0; x < total; ++x) d[x][x] = Dist(0);
      r.obj = make_finmet(total, std::move(d), std::move(labels));
      break;
    }
    default:
      throw std::logic_error("unreachable");
  }
  for (size_t i = 0; i < parts.size(); ++i) {
    Morph in;
    in.dom = parts[i];
    in.cod = r.obj;
    in.map.resize(parts[i]->n);
    std::iota(in.map.begin(), in.map.end(), r.offset[i]);
    r.in.push_back(std::move(in));
  }
  return r;
}

Morph CoproductResult::induced(const std::vector<Morph>& legs) const {
  require(legs.size() == in.size(), "coproduct induced: wrong number of legs");
  Morph h;
  h.dom = obj;
  require(!legs.empty() || obj->n == 0 || obj->base == Base::FinAb,
          "coproduct induced: empty legs with nonempty object");
  h.cod = legs.empty() ? obj : legs[0].cod;
  if (obj->base == Base::FinAb) {
    if (legs.empty()) {
      h.cod = obj;  // initial object: identity on the trivial group
      h.map = {obj->zero};
      return h;
    }
    const VObject& c = *h.cod;
    h.map.assign(obj->n, c.zero);
    // decode tuples through the injections: every point is a sum of images
    // of the injections, so evaluate by summing leg values of components
    ProductResult pr = product(Base::FinAb, [&] {
      std::vector<Obj> parts;
      for (auto& i : in) parts.push_back(i.dom);
      return parts;
    }());
    for (int x = 0; x < obj->n; ++x) {
      int val = c.zero;
      for (size_t i = 0; i < legs.size(); ++i) val = c.add[val][legs[i].map[pr.tuples[x][i]]];
      h.map[x] = val;
    }
    return h;
  }
  h.map.resize(obj->n);
  for (size_t i = 0; i < legs.size(); ++i) {
    require(same_object(legs[i].dom, in[i].dom), "coproduct induced: leg domain mismatch");
    for (int x = 0; x < in[i].dom->n; ++x) h.map[offset[i] + x] = legs[i].map[x];
  }
  return h;
}

ProductResult product(Base b, const std::vector<Obj>& parts) {
  for (auto& p : parts) require(p->base == b, "product: base mismatch");
  if (b == Base::FinAb)
    for (auto& p : parts) require(!p->ab_unit, "product: the finab unit is not finitely representable here");
  ProductResult r;
  long long total = 1;
  for (auto& p : parts) total *= p->n;
  require(total <= 2000000, "product: object too large");
  int n = (int)total;
  r.tuples.assign(n, std::vector<int>(parts.size()));
  for (int x = 0; x < n; ++x) {
    int rest = x;
    for (int i = (int)parts.size() - 1; i >= 0; --i) {
      r.tuples[x][i] = rest % parts[i]->n;
      rest /= parts[i]->n;
    }
  }
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    if (parts.size() == 1) {
      labels[x] = parts[0]->label(x);
      continue;
    }
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i]->label(r.tuples[x][i]);
    labels[x] = s + ")";
  }
  switch (b) {
    case Base::FinSet:
      r.obj = make_finset(n, std::move(labels));
      break;
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(n, std::vector<char>(n, 1));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (size_t i = 0; i < parts.size(); ++i)
            if (!parts[i]->leq[r.tuples[x][i]][r.tuples[y][i]]) {
              leq[x][y] = 0;
              break;
            }
      r.obj = make_finpos(n, std::move(leq), std::move(labels));
      break;
    }
    case Base::FinMet: {
      // categorical product carries the sup metric
      std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n, Dist(0)));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (size_t i = 0; i < parts.size(); ++i)
            d[x][y] = dist_max(d[x][y], parts[i]->dist[r.tuples[x][i]][r.tuples[y][i]]);
      r.obj = make_finmet(n, std::move(d), std::move(labels));
      break;
    }
    case Base::FinAb: {
      std::vector<std::vector<int>> add(n, std::vector<int>(n));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          std::vector<int> t(parts.size());
          for (size_t i = 0; i < parts.size(); ++i) t[i] = parts[i]->add[r.tuples[x][i]][r.tuples[y][i]];
          int v = 0;
          for (size_t i = 0; i < parts.size(); ++i) v = v * parts[i]->n + t[i];
          add[x][y] = v;
        }
      r.obj = make_finab_table(std::move(add), std::move(labels));
      break;
    }
  }
  for (size_t i = 0; i < parts.size(); ++i) {
    Morph p;
    p.dom = r.obj;
    p.cod = parts[i];
    p.map.resize(n);
    for (int x = 0; x < n; ++x) p.map[x] = r.tuples[x][i];
    r.proj.push_back(std::move(p));
  }
  return r;
}

int ProductResult::index_of(const std::vector<int>& tuple) const {
  int v = 0;
  for (size_t i = 0; i < proj.size(); ++i) v = v * proj[i].cod->n + tuple[i];
  return v;
}

Morph ProductResult::induced(const std::vector<Morph>& legs) const {
  require(legs.size() == proj.size(), "product induced: wrong number of legs");
  Morph h;
  require(!legs.empty(), "product induced: no legs");
  h.dom = legs[0].dom;
  h.cod = obj;
  h.map.resize(h.dom->n);
  for (int x = 0; x < h.dom->n; ++x) {
    std::vector<int> t(legs.size());
    for (size_t i = 0; i < legs.size(); ++i) t[i] = legs[i].map[x];
    h.map[x] = index_of(t);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Power

PowerResult power(const Obj& a, const Obj& x) {
  require(a->base == x->base, "power: base mismatch");
  PowerResult r;
  r.base_obj = a;
  r.exponent = x;
  r.maps = hom_set(x, a);
  int n = (int)r.maps.size();
  for (int i = 0; i < n; ++i) r.index_[r.maps[i]] = i;
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    std::string s = "(";
    for (size_t j = 0; j < r.maps[i].size(); ++j) s += (j ? "," : "") + a->label(r.maps[i][j]);
    labels[i] = s + ")";
  }
  switch (a->base) {
    case Base::FinSet:
      r.obj = make_finset(n, std::move(labels));
      break;
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(n, std::vector<char>(n, 1));
      for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
          for (int p = 0; p < x->n; ++p)
            if (!a->leq[r.maps[f][p]][r.maps[g][p]]) {
              leq[f][g] = 0;
              break;
            }
      r.obj = make_finpos(n, std::move(leq), std::move(labels));
      break;
    }
    case Base::FinMet: {
      std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n, Dist(0)));
      for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
          for (int p = 0; p < x->n; ++p) d[f][g] = dist_max(d[f][g], a->dist[r.maps[f][p]][r.maps[g][p]]);
      r.obj = make_finmet(n, std::move(d), std::move(labels));
      break;
    }
    case Base::FinAb: {
      std::vector<std::vector<int>> add(n, std::vector<int>(n));
      for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g) {
          std::vector<int> h(r.maps[f].size());
          for (size_t p = 0; p < h.size(); ++p) h[p] = a->add[r.maps[f][p]][r.maps[g][p]];
          auto it = r.index_.find(h);
          require(it != r.index_.end(), "power: hom set not closed under addition");
          add[f][g] = it->second;
        }
      r.obj = make_finab_table(std::move(add), std::move(labels));
      break;
    }
  }
  return r;
}

int PowerResult::index_of(const std::vector<int>& m) const {
  auto it = index_.find(m);
  require(it != index_.end(), "power: point is not a morphism of the base");
  return it->second;
}

Morph power_of_reindex(const PowerResult& ax, const PowerResult& ay, const Morph& u) {
  require(same_object(u.cod, ax.exponent) && same_object(u.dom, ay.exponent),
          "power_of_reindex: exponent mismatch");
  Morph h;
  h.dom = ax.obj;
  h.cod = ay.obj;
  h.map.resize(ax.obj->n);
  const Obj& x = ax.exponent;
  const Obj& y = ay.exponent;
  bool unit_collapse = x->base == Base::FinAb && x->ab_unit && !y->ab_unit;
  for (int f = 0; f < ax.obj->n; ++f) {
    std::vector<int> m(y->n);
    if (unit_collapse) {
      // precomposing Z -> A with the zero map Y -> Z gives the zero map
      m.assign(y->n, ax.base_obj->zero);
    } else {
      for (int p = 0; p < y->n; ++p) m[p] = ax.maps[f][u.map[p]];
    }
    h.map[f] = ay.index_of(m);
  }
  return h;
}

Morph power_of_map(const PowerResult& ax, const PowerResult& bx, const Morph& f) {
  require(same_object(f.dom, ax.base_obj) && same_object(f.cod, bx.base_obj),
          "power_of_map: object mismatch");
  require(same_object(ax.exponent, bx.exponent), "power_of_map: exponent mismatch");
  Morph h;
  h.dom = ax.obj;
  h.cod = bx.obj;
  h.map.resize(ax.obj->n);
  for (int g = 0; g < ax.obj->n; ++g) {
    std::vector<int> m(ax.maps[g].size());
    for (size_t p = 0; p < m.size(); ++p) m[p] = f.map[ax.maps[g][p]];
    h.map[g] = bx.index_of(m);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Limits

Morph equalizer(const Morph& f, const Morph& g) {
  require(same_object(f.dom, g.dom) && same_object(f.cod, g.cod), "equalizer: not a parallel pair");
  std::vector<int> pts;
  for (int i = 0; i < f.dom->n; ++i)
    if (f.map[i] == g.map[i]) pts.push_back(i);
  return subobject_inclusion(f.dom, pts);
}

PullbackResult pullback(const Morph& f, const Morph& g) {
  require(same_object(f.cod, g.cod), "pullback: codomain mismatch");
  WidePullbackResult w = wide_pullback({f, g});
  return PullbackResult{w.obj, w.legs[0], w.legs[1]};
}

Morph PullbackResult::induced(const Morph& u, const Morph& v) const {
  Morph h;
  h.dom = u.dom;
  h.cod = obj;
  h.map.resize(u.dom->n);
  for (int t = 0; t < u.dom->n; ++t) {
    int found = -1;
    for (int i = 0; i < obj->n && found < 0; ++i)
      if (p1.map[i] == u.map[t] && p2.map[i] == v.map[t]) found = i;
    require(found >= 0, "pullback induced: square does not commute");
    h.map[t] = found;
  }
  return h;
}

WidePullbackResult wide_pullback(const std::vector<Morph>& cospan) {
  require(!cospan.empty(), "wide_pullback: empty cospan");
  for (auto& f : cospan) require(same_object(f.cod, cospan[0].cod), "wide_pullback: codomain mismatch");
  std::vector<Obj> parts;
  for (auto& f : cospan) parts.push_back(f.dom);
  ProductResult pr = product(cospan[0].dom->base, parts);
  std::vector<int> pts;
  for (int x = 0; x < pr.obj->n; ++x) {
    int c = cospan[0].map[pr.tuples[x][0]];
    bool ok = true;
    for (size_t i = 1; i < cospan.size() && ok; ++i) ok = cospan[i].map[pr.tuples[x][i]] == c;
    if (ok) pts.push_back(x);
  }
  WidePullbackResult r;
  Morph incl = subobject_inclusion(pr.obj, pts);
  r.obj = incl.dom;
  for (size_t i = 0; i < cospan.size(); ++i) r.legs.push_back(compose(pr.proj[i], incl));
  return r;
}

// ---------------------------------------------------------------------------
// Pushout

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

PushoutResult pushout(const Morph& f, const Morph& g) {
  require(same_object(f.dom, g.dom), "pushout: domain mismatch");
  Base b = f.dom->base;
  const Obj& a = f.cod;
  const Obj& c = g.cod;
  PushoutResult r;

  if (b == Base::FinAb) {
    require(!a->ab_unit && !c->ab_unit && !f.dom->ab_unit, "pushout: finab unit not supported");
    ProductResult pr = product(b, {a, c});
    const VObject& d = *pr.obj;
    // N = subgroup generated by (f x, -g x)
    std::vector<int> gens;
    for (int x = 0; x < f.dom->n; ++x) gens.push_back(pr.index_of({f.map[x], c->neg(g.map[x])}));
    std::vector<int> nsub = ab_generated_subgroup(pr.obj, gens);
    std::set<int> nset(nsub.begin(), nsub.end());
    // cosets
    std::vector<int> coset(d.n, -1);
    std::vector<int> reps;
    for (int x = 0; x < d.n; ++x) {
      if (coset[x] >= 0) continue;
      int id = (int)reps.size();
      reps.push_back(x);
      for (int y = 0; y < d.n; ++y) {
        // x - y in N ?
        int diff = d.add[x][d.neg(y)];
        if (nset.count(diff)) coset[y] = id;
      }
    }
    int qn = (int)reps.size();
    std::vector<std::vector<int>> add(qn, std::vector<int>(qn));
    for (int i = 0; i < qn; ++i)
      for (int j = 0; j < qn; ++j) add[i][j] = coset[d.add[reps[i]][reps[j]]];
    std::vector<std::string> labels(qn);
    for (int i = 0; i < qn; ++i) labels[i] = "[" + d.label(reps[i]) + "]";
    r.obj = make_finab_table(std::move(add), std::move(labels));
    r.q1.dom = a;
    r.q1.cod = r.obj;
    r.q1.map.resize(a->n);
    for (int x = 0; x < a->n; ++x) r.q1.map[x] = coset[pr.index_of({x, c->zero})];
    r.q2.dom = c;
    r.q2.cod = r.obj;
    r.q2.map.resize(c->n);
    for (int x = 0; x < c->n; ++x) r.q2.map[x] = coset[pr.index_of({a->zero, x})];
    r.ab_rep.resize(qn);
    for (int i = 0; i < qn; ++i)
      r.ab_rep[i] = {pr.tuples[reps[i]][0], pr.tuples[reps[i]][1]};
    return r;
  }

  int total = a->n + c->n;
  auto ia = [&](int x) { return x; };
  auto ic = [&](int x) { return a->n + x; };

  if (b == Base::FinSet) {
    UnionFind uf(total);
    for (int x = 0; x < f.dom->n; ++x) uf.unite(ia(f.map[x]), ic(g.map[x]));
    std::vector<int> cls(total, -1);
    std::vector<std::string> labels;
    for (int x = 0; x < total; ++x) {
      int root = uf.find(x);
      if (cls[root] < 0) {
        cls[root] = (int)labels.size();
        labels.push_back(x < a->n ? a->label(x) : c->label(x - a->n));
      }
      cls[x] = cls[root];
    }
    int qn = (int)labels.size();
    r.obj = make_finset(qn, std::move(labels));
    r.q1 = Morph{a, r.obj, {}};
    r.q2 = Morph{c, r.obj, {}};
    for (int x = 0; x < a->n; ++x) r.q1.map.push_back(cls[ia(x)]);
    for (int x = 0; x < c->n; ++x) r.q2.map.push_back(cls[ic(x)]);
    return r;
  }

  if (b == Base::FinPos) {
    // preorder on the disjoint union, glue, transitive closure, collapse SCCs
    std::vector<std::vector<char>> pre(total, std::vector<char>(total, 0));
    for (int x = 0; x < a->n; ++x)
      for (int y = 0; y < a->n; ++y) pre[ia(x)][ia(y)] = a->leq[x][y];
    for (int x = 0; x < c->n; ++x)
      for (int y = 0; y < c->n; ++y) pre[ic(x)][ic(y)] = c->leq[x][y];
    for (int x = 0; x < f.dom->n; ++x) {
      pre[ia(f.map[x])][ic(g.map[x])] = 1;
      pre[ic(g.map[x])][ia(f.map[x])] = 1;
    }
    for (int k = 0; k < total; ++k)
      for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j)
          if (pre[i][k] && pre[k][j]) pre[i][j] = 1;
    std::vector<int> cls(total, -1);
    std::vector<int> reps;
    for (int x = 0; x < total; ++x) {
      if (cls[x] >= 0) continue;
      int id = (int)reps.size();
      reps.push_back(x);
      for (int y = x; y < total; ++y)
        if (pre[x][y] && pre[y][x]) cls[y] = id;
    }
    int qn = (int)reps.size();
    std::vector<std::vector<char>> leq(qn, std::vector<char>(qn, 0));
    for (int i = 0; i < qn; ++i)
      for (int j = 0; j < qn; ++j) leq[i][j] = pre[reps[i]][reps[j]];
    std::vector<std::string> labels(qn);
    for (int i = 0; i < qn; ++i)
      labels[i] = reps[i] < a->n ? a->label(reps[i]) : c->label(reps[i] - a->n);
    r.obj = make_finpos(qn, std::move(leq), std::move(labels));
    r.q1 = Morph{a, r.obj, {}};
    r.q2 = Morph{c, r.obj, {}};
    for (int x = 0; x < a->n; ++x) r.q1.map.push_back(cls[ia(x)]);
    for (int x = 0; x < c->n; ++x) r.q2.map.push_back(cls[ic(x)]);
    return r;
  }

  // FinMet: amalgam with the shortest-path (infimal zig-zag) metric, then
  // collapse the zero-distance pairs that gluing creates.
  std::vector<std::vector<Dist>> d(total, std::vector<Dist>(total, Dist::infinity()));
  for (int x = 0; x < total; ++x) d[x][x] = Dist(0);
  for (int x = 0; x < a->n; ++x)
    for (int y = 0; y < a->n; ++y) d[ia(x)][ia(y)] = a->dist[x][y];
  for (int x = 0; x < c->n; ++x)
    for (int y = 0; y < c->n; ++y) d[ic(x)][ic(y)] = c->dist[x][y];
  for (int x = 0; x < f.dom->n; ++x) {
    d[ia(f.map[x])][ic(g.map[x])] = Dist(0);
    d[ic(g.map[x])][ia(f.map[x])] = Dist(0);
  }
  for (int k = 0; k < total; ++k)
    for (int i = 0; i < total; ++i)
      for (int j = 0; j < total; ++j) d[i][j] = dist_min(d[i][j], d[i][k] + d[k][j]);
  std::vector<int> cls(total, -1);
  std::vector<int> reps;
  for (int x = 0; x < total; ++x) {
    if (cls[x] >= 0) continue;
    int id = (int)reps.size();
    reps.push_back(x);
    for (int y = x; y < total; ++y)
      if (d[x][y] == Dist(0)) cls[y] = id;
  }
  int qn = (int)reps.size();
  std::vector<std::vector<Dist>> qd(qn, std::vector<Dist>(qn));
  for (int i = 0; i < qn; ++i)
    for (int j = 0; j < qn; ++j) qd[i][j] = d[reps[i]][reps[j]];
  std::vector<std::string> labels(qn);
  for (int i = 0; i < qn; ++i) labels[i] = reps[i] < a->n ? a->label(reps[i]) : c->label(reps[i] - a->n);
  r.obj = make_finmet(qn, std::move(qd), std::move(labels));
  r.q1 = Morph{a, r.obj, {}};
  r.q2 = Morph{c, r.obj, {}};
  for (int x = 0; x < a->n; ++x) r.q1.map.push_back(cls[ia(x)]);
  for (int x = 0; x < c->n; ++x) r.q2.map.push_back(cls[ic(x)]);
  return r;
}

Morph PushoutResult::induced(const Morph& u, const Morph& v) const {
  require(same_object(u.cod, v.cod), "pushout induced: codomain mismatch");
  Morph h;
  h.dom = obj;
  h.cod = u.cod;
  if (obj->base == Base::FinAb) {
    const VObject& t = *u.cod;
    h.map.resize(obj->n);
    for (int q = 0; q < obj->n; ++q) h.map[q] = t.add[u.map[ab_rep[q].first]][v.map[ab_rep[q].second]];
    require(is_valid_morphism(h), "pushout induced: cocone does not commute");
    require(morphisms_equal(compose(h, q1), u) && morphisms_equal(compose(h, q2), v),
            "pushout induced: cocone does not commute");
    return h;
  }
  h.map.assign(obj->n, -1);
  for (int x = 0; x < u.dom->n; ++x) {
    int q = q1.map[x];
    require(h.map[q] < 0 || h.map[q] == u.map[x], "pushout induced: cocone does not commute");
    h.map[q] = u.map[x];
  }
  for (int x = 0; x < v.dom->n; ++x) {
    int q = q2.map[x];
    require(h.map[q] < 0 || h.map[q] == v.map[x], "pushout induced: cocone does not commute");
    h.map[q] = v.map[x];
  }
  for (int q = 0; q < obj->n; ++q) require(h.map[q] >= 0, "pushout induced: unreached class");
  return h;
}

// ---------------------------------------------------------------------------
// Factorization system

FactorizationSystem factorization_system(Base b) {
  switch (b) {
    case Base::FinSet: return {b, "surjections", "injections"};
    case Base::FinPos: return {b, "surjections", "full embeddings"};
    case Base::FinMet: return {b, "surjections", "isometries"};
    case Base::FinAb: return {b, "surjections", "injective homomorphisms"};
  }
  throw std::logic_error("bad base");
}

Factorization factorize(const Morph& f) {
  std::vector<int> img;
  {
    std::set<int> s(f.map.begin(), f.map.end());
    img.assign(s.begin(), s.end());
  }
  if (f.dom->base == Base::FinAb && !f.cod->ab_unit) {
    require(!f.dom->ab_unit, "factorize: finab unit domain not supported");
    img = ab_generated_subgroup(f.cod, img);
  }
  Morph m = subobject_inclusion(f.cod, img);
  Morph e;
  e.dom = f.dom;
  e.cod = m.dom;
  e.map.resize(f.dom->n);
  std::vector<int> pos(f.cod->n, -1);
  for (int i = 0; i < (int)img.size(); ++i) pos[img[i]] = i;
  for (int i = 0; i < f.dom->n; ++i) e.map[i] = pos[f.map[i]];
  return {e, m};
}

std::optional<Morph> diagonal_fill(const Morph& e, const Morph& m, const Morph& u, const Morph& v) {
  if (!in_e(e) || !in_m(m)) return std::nullopt;
  if (!morphisms_equal(compose(v, e), compose(m, u))) return std::nullopt;
  Morph d;
  d.dom = e.cod;
  d.cod = m.dom;
  d.map.assign(e.cod->n, -1);
  for (int x = 0; x < e.dom->n; ++x) {
    int b = e.map[x];
    if (d.map[b] >= 0 && d.map[b] != u.map[x]) return std::nullopt;
    d.map[b] = u.map[x];
  }
  for (int b = 0; b < e.cod->n; ++b)
    if (d.map[b] < 0) return std::nullopt;
  if (!is_valid_morphism(d)) return std::nullopt;
  if (!morphisms_equal(compose(m, d), v)) return std::nullopt;
  return d;
}

// ---------------------------------------------------------------------------
// Canonical subobjects

bool is_ab_subgroup(const Obj& a, const std::vector<int>& points) {
  std::set<int> s(points.begin(), points.end());
  if (!s.count(a->zero)) return false;
  for (int x : s)
    for (int y : s)
      if (!s.count(a->add[x][y])) return false;
  return true;
}

std::vector<int> ab_generated_subgroup(const Obj& a, std::vector<int> gens) {
  std::set<int> s = {a->zero};
  std::vector<int> frontier = {a->zero};
  for (int g : gens)
    if (s.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        int y = a->add[x][g];
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return std::vector<int>(s.begin(), s.end());
}

Obj induced_subobject(const Obj& a, const std::vector<int>& points) {
  std::vector<int> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  int k = (int)pts.size();
  std::vector<std::string> labels(k);
  for (int i = 0; i < k; ++i) labels[i] = a->label(pts[i]);
  switch (a->base) {
    case Base::FinSet:
      return make_finset(k, std::move(labels));
    case Base::FinPos: {
      std::vector<std::vector<char>> leq(k, std::vector<char>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) leq[i][j] = a->leq[pts[i]][pts[j]];
      return make_finpos(k, std::move(leq), std::move(labels));
    }
    case Base::FinMet: {
      std::vector<std::vector<Dist>> d(k, std::vector<Dist>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) d[i][j] = a->dist[pts[i]][pts[j]];
      return make_finmet(k, std::move(d), std::move(labels));
    }
    case Base::FinAb: {
      require(is_ab_subgroup(a, pts), "induced_subobject: not a subgroup");
      std::vector<int> pos(a->n, -1);
      for (int i = 0; i < k; ++i) pos[pts[i]] = i;
      std::vector<std::vector<int>> add(k, std::vector<int>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) add[i][j] = pos[a->add[pts[i]][pts[j]]];
      return make_finab_table(std::move(add), std::move(labels));
    }
  }
  throw std::logic_error("bad base");
}

Morph subobject_inclusion(const Obj& a, const std::vector<int>& points) {
  Obj sub = induced_subobject(a, points);
  std::vector<int> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Morph m;
  m.dom = sub;
  m.cod = a;
  m.map = pts;
  return m;
}

// ---------------------------------------------------------------------------
// Transpose

Morph transpose(const Morph& a, const PowerResult& ax) {
  require(same_object(a.dom, ax.exponent) && same_object(a.cod, ax.base_obj),
          "transpose: power mismatch");
  Morph t;
  t.dom = unit_object(a.dom->base);
  t.cod = ax.obj;
  t.map = {ax.index_of(a.map)};
  return t;
}

Morph untranspose(const Morph& point, const PowerResult& ax) {
  require(same_object(point.cod, ax.obj), "untranspose: power mismatch");
  Morph a;
  a.dom = ax.exponent;
  a.cod = ax.base_obj;
  a.map = ax.maps[point.map[0]];
  return a;
}

// ---------------------------------------------------------------------------
// Connectedness / E-stability

bool is_connected(const Obj& x) {
  switch (x->base) {
    case Base::FinSet:
      return x->n == 1;
    case Base::FinPos:
    case Base::FinMet: {
      if (x->n == 0) return false;
      // connectivity of the comparability / finite-distance graph
      std::vector<char> seen(x->n, 0);
      std::vector<int> stack = {0};
      seen[0] = 1;
      int count = 1;
      while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (int q = 0; q < x->n; ++q) {
          if (seen[q]) continue;
          bool adj = x->base == Base::FinPos ? (x->leq[p][q] || x->leq[q][p]) : !x->dist[p][q].inf;
          if (adj) {
            seen[q] = 1;
            ++count;
            stack.push_back(q);
          }
        }
      }
      return count == x->n;
    }
    case Base::FinAb:
      // [X,-] is additive, so it preserves finite direct sums
      return true;
  }
  return false;
}

StabilityVerdict is_e_stable(const Obj& x, const std::vector<Morph>& witnesses) {
  for (auto& e : witnesses) require(in_e(e), "is_e_stable: witness not in E");
  bool classified = false;
  switch (x->base) {
    case Base::FinSet:
      classified = true;  // finite choice: surjections are power-stable
      break;
    case Base::FinPos: {
      classified = true;
      for (int i = 0; i < x->n && classified; ++i)
        for (int j = 0; j < x->n && classified; ++j)
          if (i != j && (x->leq[i][j] || x->leq[j][i])) classified = false;
      break;
    }
    case Base::FinMet: {
      classified = true;
      for (int i = 0; i < x->n && classified; ++i)
        for (int j = 0; j < x->n && classified; ++j)
          if (i != j && !x->dist[i][j].inf) classified = false;
      break;
    }
    case Base::FinAb:
      classified = x->ab_unit || x->n == 1;
      break;
  }
  if (classified) return {StabilityKind::Stable, std::nullopt};
  for (auto& e : witnesses) {
    PowerResult ax = power(e.dom, x), bx = power(e.cod, x);
    Morph ex = power_of_map(ax, bx, e);
    if (!in_e(ex)) return {StabilityKind::UnstableWitness, e};
  }
  return {StabilityKind::UnknownUpToWitnesses, std::nullopt};
}

// ---------------------------------------------------------------------------
// Isomorphism search

namespace {

bool iso_backtrack(const VObject& a, const VObject& b, std::vector<int>& img, std::vector<char>& used,
                   int next) {
  if (next == a.n) return true;
  for (int c = 0; c < b.n; ++c) {
    if (used[c]) continue;
    bool ok = true;
    for (int p = 0; p <= next && ok; ++p) {
      int pc = p == next ? c : img[p];
      switch (a.base) {
        case Base::FinSet:
          break;
        case Base::FinPos:
          ok = a.leq[p][next] == b.leq[pc][c] && a.leq[next][p] == b.leq[c][pc];
          break;
        case Base::FinMet:
          ok = a.dist[p][next] == b.dist[pc][c];
          break;
        case Base::FinAb:
          break;
      }
    }
    if (ok && a.base == Base::FinAb) {
      // partial homomorphism check on assigned elements
      for (int p = 0; p <= next && ok; ++p)
        for (int q = 0; q <= next && ok; ++q) {
          int s = a.add[p][q];
          if (s <= next) {
            int ip = p == next ? c : img[p];
            int iq = q == next ? c : img[q];
            int is = s == next ? c : img[s];
            ok = b.add[ip][iq] == is;
          }
        }
    }
    if (!ok) continue;
    img[next] = c;
    used[c] = 1;
    if (iso_backtrack(a, b, img, used, next + 1)) return true;
    used[c] = 0;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const Obj& a, const Obj& b) {
  if (a->base != b->base || a->n != b->n) return std::nullopt;
  if (a->ab_unit != b->ab_unit) return std::nullopt;
  std::vector<int> img(a->n, -1);
  std::vector<char> used(a->n, 0);
  if (!iso_backtrack(*a, *b, img, used, 0)) return std::nullopt;
  return img;
}

}  // namespace enrlog
