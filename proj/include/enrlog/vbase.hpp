#pragma once

// The four bases of enrichment: finite sets, finite posets, finite rational
// metric spaces, and finite abelian groups. Each is an exact combinatorial
// category with tensor, internal powers, finite limits and colimits, and one
// orthogonal factorization system (surjections, embeddings).
//
// Objects and morphisms are immutable values; every operation is a pure
// function, so everything here is safe to share across threads.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "enrlog/rational.hpp"

namespace enrlog {

enum class Base { FinSet, FinPos, FinMet, FinAb };

std::string base_name(Base b);

class VObject;
using Obj = std::shared_ptr<const VObject>;

// A finite object of one of the four bases. The carrier is a list of points
// (indices 0..n-1 with printable labels); the per-base payload is a partial
// order, a distance table, or an abelian group operation table.
class VObject {
 public:
  Base base;
  int n = 0;
  std::vector<std::string> labels;

  std::vector<std::vector<char>> leq;   // FinPos: leq[i][j] iff i <= j
  std::vector<std::vector<Dist>> dist;  // FinMet
  std::vector<std::vector<int>> add;    // FinAb operation table
  int zero = 0;                         // FinAb identity element
  bool ab_unit = false;                 // FinAb symbolic tensor unit

  // Structural key, label-free; equal keys iff literally the same object
  // (same point order, not just isomorphic).
  const std::string& key() const { return key_; }
  const std::string& label(int i) const { return labels[i]; }
  int neg(int i) const;                // FinAb inverse
  int order_of(int i) const;           // FinAb element order
  bool is_empty() const { return n == 0; }

 private:
  friend Obj finish_object(VObject v);
  std::string key_;
};

// Factories; each validates the payload and throws std::invalid_argument on
// violations (non-poset order, non-metric table, non-abelian-group table).
Obj make_finset(int n, std::vector<std::string> labels = {});
Obj make_finpos(int n, std::vector<std::vector<char>> leq, std::vector<std::string> labels = {});
Obj make_finmet(int n, std::vector<std::vector<Dist>> dist, std::vector<std::string> labels = {});
Obj make_finab_table(std::vector<std::vector<int>> add, std::vector<std::string> labels = {});
Obj make_finab_cyclic(const std::vector<int>& factors);  // direct sum of Z/d
Obj make_ab_unit();                                      // symbolic unit over FinAb

Obj unit_object(Base b);      // tensor unit I
Obj initial_object(Base b);   // empty set/poset/space; trivial group
Obj terminal_object(Base b);  // singleton; trivial group

// Discrete n-point object: no order, all distances infinite.
Obj discrete_object(Base b, int n);

bool same_object(const Obj& a, const Obj& b);

// A morphism of the base, stored as a point function. For FinAb it must be a
// group homomorphism; a morphism out of the symbolic unit picks one element
// (the image of the generator).
struct Morph {
  Obj dom, cod;
  std::vector<int> map;

  int operator()(int i) const { return map[i]; }
};

Morph identity(const Obj& a);
Morph compose(const Morph& g, const Morph& f);  // g after f
bool morphisms_equal(const Morph& f, const Morph& g);
bool is_valid_morphism(const Morph& f);
void check_morphism(const Morph& f);  // throws on violation
bool is_iso(const Morph& f);
Morph inverse(const Morph& f);  // pre: is_iso

// All base morphisms X -> A in a deterministic order.
std::vector<std::vector<int>> hom_set(const Obj& x, const Obj& a);

// ---------------------------------------------------------------------------
// Monoidal structure and (co)limits

struct TensorResult {
  Obj obj;
  int lhs_n = 0, rhs_n = 0;
  // FinAb keeps explicit pairing data; elsewhere pairing is positional.
  std::vector<std::vector<int>> pair_index;  // [i][j] -> point of obj
  int pair(int i, int j) const { return pair_index.empty() ? i * rhs_n + j : pair_index[i][j]; }
};
TensorResult tensor(const Obj& x, const Obj& y);

struct CoproductResult {
  Obj obj;
  std::vector<Morph> in;
  std::vector<int> offset;  // set-like bases: block offsets
  // Induced map out of the coproduct given components X_i -> C.
  Morph induced(const std::vector<Morph>& legs) const;
};
CoproductResult coproduct(Base b, const std::vector<Obj>& parts);

struct ProductResult {
  Obj obj;
  std::vector<Morph> proj;
  std::vector<std::vector<int>> tuples;  // point of obj -> component points
  int index_of(const std::vector<int>& tuple) const;
  Morph induced(const std::vector<Morph>& legs) const;
};
ProductResult product(Base b, const std::vector<Obj>& parts);

// Internal hom A^X = [X, A]; carrier points are the maps X -> A listed in
// `maps` (deterministic order).
struct PowerResult {
  Obj obj;
  Obj base_obj, exponent;
  std::vector<std::vector<int>> maps;
  int index_of(const std::vector<int>& m) const;

 private:
  friend PowerResult power(const Obj& a, const Obj& x);
  std::map<std::vector<int>, int> index_;
};
PowerResult power(const Obj& a, const Obj& x);

// A^u : A^X -> A^Y for u : Y -> X (precomposition).
Morph power_of_reindex(const PowerResult& ax, const PowerResult& ay, const Morph& u);
// f^X : A^X -> B^X for f : A -> B (postcomposition).
Morph power_of_map(const PowerResult& ax, const PowerResult& bx, const Morph& f);

Morph equalizer(const Morph& f, const Morph& g);  // inclusion of {x | f x = g x}

struct PullbackResult {
  Obj obj;
  Morph p1, p2;
  Morph induced(const Morph& u, const Morph& v) const;  // with f u = g v
};
PullbackResult pullback(const Morph& f, const Morph& g);

struct WidePullbackResult {
  Obj obj;
  std::vector<Morph> legs;
};
WidePullbackResult wide_pullback(const std::vector<Morph>& cospan);

struct PushoutResult {
  Obj obj;
  Morph q1, q2;
  std::vector<std::pair<int, int>> ab_rep;               // FinAb: class -> (a, c) representative
  Morph induced(const Morph& u, const Morph& v) const;  // with u f = v g
};
PushoutResult pushout(const Morph& f, const Morph& g);

// ---------------------------------------------------------------------------
// Factorization system

struct FactorizationSystem {
  Base base;
  std::string e_name, m_name;
};
FactorizationSystem factorization_system(Base b);

struct Factorization {
  Morph e, m;  // m . e == f
};
Factorization factorize(const Morph& f);

bool in_e(const Morph& f);  // surjective point map
bool in_m(const Morph& f);  // injective; full for FinPos; isometric for FinMet

// Unique diagonal for a commuting square v.e == m.u with e in E, m in M.
std::optional<Morph> diagonal_fill(const Morph& e, const Morph& m, const Morph& u, const Morph& v);

// ---------------------------------------------------------------------------
// Subobjects of the carrier (canonical form: a point subset with the induced
// structure). For FinAb the subset must be a subgroup.

Obj induced_subobject(const Obj& a, const std::vector<int>& points);
Morph subobject_inclusion(const Obj& a, const std::vector<int>& points);
bool is_ab_subgroup(const Obj& a, const std::vector<int>& points);
std::vector<int> ab_generated_subgroup(const Obj& a, std::vector<int> gens);

// ---------------------------------------------------------------------------
// Transpose along the tensor-hom adjunction

// a : X -> A  gives  I -> A^X picking the corresponding point.
Morph transpose(const Morph& a, const PowerResult& ax);
Morph untranspose(const Morph& point, const PowerResult& ax);

// ---------------------------------------------------------------------------
// Connectedness and E-stability

// X is connected iff [X,-] preserves binary coproducts; decided
// combinatorially per base.
bool is_connected(const Obj& x);

enum class StabilityKind { Stable, UnstableWitness, UnknownUpToWitnesses };
struct StabilityVerdict {
  StabilityKind kind;
  std::optional<Morph> witness;  // the e with e^X not in E
};
// Checks e^X in E for each witness e (each must be in E). Returns Stable
// only for classified cases where the universal claim is known.
StabilityVerdict is_e_stable(const Obj& x, const std::vector<Morph>& witnesses);

// Structure-preserving bijection A -> B if one exists (backtracking).
std::optional<std::vector<int>> find_isomorphism(const Obj& a, const Obj& b);

}  // namespace enrlog
