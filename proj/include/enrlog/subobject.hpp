#pragma once

// The lattice of M-subobjects of a fixed object. Subobjects are canonicalized
// by their point image inside the codomain (M-maps in all four bases are
// determined up to iso by their image), which makes lattice equality
// decidable. Over FinAb the point sets are subgroups.

#include <vector>

#include "enrlog/vbase.hpp"

namespace enrlog {

class Subobject {
 public:
  Subobject() = default;
  // `points` need not be sorted; duplicates are removed.
  Subobject(Obj codomain, std::vector<int> points);

  const Obj& codomain() const { return cod_; }
  const std::vector<int>& points() const { return pts_; }
  bool contains(int point) const;
  int size() const { return (int)pts_.size(); }

  // The canonical M-morphism into the codomain (domain = induced structure).
  Morph inclusion() const;
  Obj domain_object() const;

  bool operator==(const Subobject& o) const;

 private:
  Obj cod_;
  std::vector<int> pts_;
};

Subobject top_subobject(const Obj& a);
Subobject bottom_subobject(const Obj& a);  // image of the initial object

// s <= t: a factorization of s through t exists. For canonical subobjects
// this is point-set inclusion; the witness morphism is returned on request.
bool sub_leq(const Subobject& s, const Subobject& t);
std::optional<Morph> sub_leq_witness(const Subobject& s, const Subobject& t);

// Wide-pullback meet of a nonempty family over a shared codomain.
Subobject sub_intersect(const std::vector<Subobject>& subs);

// The M-part of the (E,M)-factorization of f, as a subobject of cod f.
Subobject sub_image(const Morph& f);

// Image of the induced map out of the coproduct of the domains; the empty
// join is the bottom subobject.
Subobject sub_join(const Obj& codomain, const std::vector<Subobject>& subs);

// Pullback of s along f (preimage with induced structure); cod f must be the
// codomain of s.
Subobject sub_pull_back(const Subobject& s, const Morph& f);

// (s.m)^Y transported along (A^X)^Y = A^(X tensor Y): membership of a point
// of `ptensor` (the power by the tensor arity) is slice-wise membership in s.
// `paw` is the power A^W where s lives: s.codomain() == paw.obj.
Subobject sub_power(const Subobject& s, const PowerResult& paw, const Obj& y,
                    const PowerResult& ptensor, const TensorResult& wy);

bool sub_is_iso(const Subobject& s);

}  // namespace enrlog
