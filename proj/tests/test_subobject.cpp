#include <functional>

#include "doctest.h"
#include "enrlog/subobject.hpp"
#include "test_util.hpp"

using namespace enrlog;
using test_util::two_point_metric;

namespace {

// All canonical M-subobjects of a fixed codomain.
std::vector<Subobject> all_subobjects(const Obj& a) {
  std::vector<Subobject> out;
  if (a->base == Base::FinAb) {
    for (unsigned mask = 0; mask < (1u << a->n); ++mask) {
      std::vector<int> pts;
      for (int i = 0; i < a->n; ++i)
        if (mask & (1u << i)) pts.push_back(i);
      if (is_ab_subgroup(a, pts)) out.emplace_back(a, pts);
    }
    return out;
  }
  for (unsigned mask = 0; mask < (1u << a->n); ++mask) {
    std::vector<int> pts;
    for (int i = 0; i < a->n; ++i)
      if (mask & (1u << i)) pts.push_back(i);
    out.emplace_back(a, pts);
  }
  return out;
}

std::vector<Obj> lattice_codomains() {
  return {
      make_finset(3),
      make_finpos(3, {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}}),
      make_finmet(3,
                  {{Dist(0), Dist(1), Dist(3)},
                   {Dist(1), Dist(0), Dist(2)},
                   {Dist(3), Dist(2), Dist(0)}}),
      make_finab_cyclic({4}),
      make_finab_cyclic({2, 2}),
      make_finab_cyclic({6}),
  };
}

}  // namespace

TEST_CASE("leq basics") {
  Obj a = make_finset(2, {"1", "2"});
  Subobject s1(a, {0}), s2(a, {1});
  CHECK(sub_leq(s1, top_subobject(a)));
  CHECK(sub_leq(bottom_subobject(a), s1));
  CHECK_FALSE(sub_leq(s1, s2));
  CHECK_FALSE(sub_leq(s2, s1));
  CHECK(sub_leq_witness(s1, top_subobject(a)).has_value());
  CHECK_THROWS(sub_leq(s1, top_subobject(make_finset(3))));

  // the witness composes back to the inclusion and is unique (M is mono)
  Subobject big(a, {0, 1});
  auto k = sub_leq_witness(s1, big);
  REQUIRE(k.has_value());
  CHECK(morphisms_equal(compose(big.inclusion(), *k), s1.inclusion()));
}

TEST_CASE("intersect") {
  Obj a = make_finset(3, {"1", "2", "3"});
  Subobject s12(a, {0, 1}), s23(a, {1, 2});
  CHECK(sub_intersect({s12}) == s12);
  CHECK(sub_intersect({s12, top_subobject(a)}) == s12);
  CHECK(sub_intersect({s12, s23}) == Subobject(a, {1}));

  // meet is the greatest lower bound (checked against leq on all subobjects)
  for (auto& cod : lattice_codomains()) {
    auto subs = all_subobjects(cod);
    for (auto& s : subs)
      for (auto& t : subs) {
        Subobject m = sub_intersect({s, t});
        CHECK(sub_leq(m, s));
        CHECK(sub_leq(m, t));
        for (auto& l : subs)
          if (sub_leq(l, s) && sub_leq(l, t)) CHECK(sub_leq(l, m));
      }
  }
}

TEST_CASE("intersect agrees with the wide pullback") {
  for (auto& cod : lattice_codomains()) {
    auto subs = all_subobjects(cod);
    for (size_t i = 0; i < subs.size(); i += 3)
      for (size_t j = 0; j < subs.size(); j += 3) {
        WidePullbackResult w = wide_pullback({subs[i].inclusion(), subs[j].inclusion()});
        Subobject via_pb(cod, [&] {
          std::vector<int> pts;
          Morph composite = compose(subs[i].inclusion(), w.legs[0]);
          for (int p : composite.map) pts.push_back(p);
          return pts;
        }());
        CHECK(via_pb == sub_intersect({subs[i], subs[j]}));
      }
  }
}

TEST_CASE("image") {
  Obj a = make_finset(3);
  CHECK(sub_image(identity(a)) == top_subobject(a));
  Morph from_empty{make_finset(0), a, {}};
  CHECK(sub_image(from_empty) == bottom_subobject(a));

  Obj m5 = two_point_metric(Dist(5));
  Obj m3 = two_point_metric(Dist(3));
  Morph cst{m3, m5, {1, 1}};
  CHECK(sub_image(cst) == Subobject(m5, {1}));

  // FinAb: image of the zero object inclusion is the bottom {0}
  Obj z4 = make_finab_cyclic({4});
  Morph z{make_finab_cyclic({}), z4, {0}};
  CHECK(sub_image(z) == bottom_subobject(z4));
}

TEST_CASE("join") {
  Obj a = make_finset(3, {"1", "2", "3"});
  CHECK(sub_join(a, {}) == bottom_subobject(a));
  Subobject s1(a, {0});
  CHECK(sub_join(a, {s1}) == s1);
  CHECK(sub_join(a, {s1, Subobject(a, {1})}) == Subobject(a, {0, 1}));

  // bounded lattice laws on small codomains per base
  for (auto& cod : lattice_codomains()) {
    auto subs = all_subobjects(cod);
    for (auto& s : subs) {
      CHECK(sub_join(cod, {s, bottom_subobject(cod)}) == s);
      CHECK(sub_intersect({s, top_subobject(cod)}) == s);
      for (auto& t : subs) {
        Subobject j = sub_join(cod, {s, t});
        CHECK(sub_leq(s, j));
        CHECK(sub_leq(t, j));
        for (auto& u : subs)
          if (sub_leq(s, u) && sub_leq(t, u)) CHECK(sub_leq(j, u));
      }
    }
  }
}

TEST_CASE("join is the image of the coproduct-induced map") {
  for (auto& cod : lattice_codomains()) {
    if (cod->base == Base::FinAb) {
      // subgroup sum: {0,2} v {0,1,2,3} in Z/4, and diagonals in Z/2 x Z/2
      Obj z4 = make_finab_cyclic({4});
      CHECK(sub_join(z4, {Subobject(z4, {0, 2}), Subobject(z4, {0, 2})}) == Subobject(z4, {0, 2}));
      continue;
    }
    auto subs = all_subobjects(cod);
    for (size_t i = 0; i < subs.size(); i += 2)
      for (size_t j = 0; j < subs.size(); j += 2) {
        CoproductResult cp = coproduct(cod->base, {subs[i].domain_object(), subs[j].domain_object()});
        Morph ind = cp.induced({subs[i].inclusion(), subs[j].inclusion()});
        CHECK(sub_image(ind) == sub_join(cod, {subs[i], subs[j]}));
      }
  }
  // FinAb instance where the join strictly exceeds the union
  Obj v4 = make_finab_cyclic({2, 2});
  Subobject h1(v4, {0, 1}), h2(v4, {0, 2});
  Subobject j = sub_join(v4, {h1, h2});
  CHECK(j == top_subobject(v4));
}

TEST_CASE("pull_back") {
  Obj a = make_finset(3, {"1", "2", "3"});
  Obj b = make_finset(2);
  Morph f{b, a, {1, 1}};
  CHECK(sub_pull_back(top_subobject(a), f) == top_subobject(b));
  Subobject s2(a, {1});
  CHECK(sub_pull_back(s2, identity(a)) == s2);
  CHECK(sub_pull_back(s2, f) == top_subobject(b));
  CHECK(sub_pull_back(Subobject(a, {0}), f) == bottom_subobject(b));

  // preimage oracle on a named map
  Morph g{a, a, {2, 2, 0}};
  CHECK(sub_pull_back(Subobject(a, {2}), g) == Subobject(a, {0, 1}));

  // pulled-back subobjects stay in M, and pull_back preserves top/binary meets
  test_util::Rng rng(41);
  for (Base base : {Base::FinSet, Base::FinPos, Base::FinMet, Base::FinAb}) {
    for (int it = 0; it < 8; ++it) {
      Obj dom = test_util::random_object(rng, base, 3);
      Obj cod = test_util::random_object(rng, base, 3);
      auto fo = test_util::random_morphism(rng, dom, cod);
      if (!fo) continue;
      auto subs = all_subobjects(cod);
      for (auto& s : subs) {
        Subobject pb = sub_pull_back(s, *fo);
        CHECK(in_m(pb.inclusion()));
        for (auto& t : subs) {
          CHECK(sub_pull_back(sub_intersect({s, t}), *fo) ==
                sub_intersect({sub_pull_back(s, *fo), sub_pull_back(t, *fo)}));
        }
      }
      CHECK(sub_pull_back(top_subobject(cod), *fo) == top_subobject(dom));
      if (base != Base::FinAb)
        CHECK(sub_pull_back(bottom_subobject(cod), *fo) == bottom_subobject(dom));
    }
  }
}

TEST_CASE("power of a subobject") {
  // Y = I: the subobject itself (up to the canonical iso A^W = A^(W x I))
  Obj a = make_finset(2, {"a", "b"});
  Obj w = make_finset(1);
  PowerResult paw = power(a, w);
  Subobject s(paw.obj, {0});
  Obj i = unit_object(Base::FinSet);
  TensorResult wi = tensor(w, i);
  PowerResult pawi = power(a, wi.obj);
  Subobject p = sub_power(s, paw, i, pawi, wi);
  CHECK(p.points() == s.points());

  // top powers to top
  Obj y = make_finset(2);
  TensorResult wy = tensor(w, y);
  PowerResult pawy = power(a, wy.obj);
  CHECK(sub_power(top_subobject(paw.obj), paw, y, pawy, wy) == top_subobject(pawy.obj));

  // FinSet 2-point case: membership is slice-wise
  Subobject sp = sub_power(s, paw, y, pawy, wy);
  // maps W (x) Y -> A landing in {a} on every slice: exactly one
  CHECK(sp.size() == 1);
  CHECK(in_m(sp.inclusion()));
}

TEST_CASE("is_iso") {
  Obj a = make_finset(2);
  CHECK(sub_is_iso(top_subobject(a)));
  CHECK_FALSE(sub_is_iso(bottom_subobject(a)));
  Obj m = two_point_metric(Dist(2));
  CHECK_FALSE(sub_is_iso(Subobject(m, {0})));
  // empty codomain: the bottom is an iso
  Obj e = make_finset(0);
  CHECK(sub_is_iso(bottom_subobject(e)));
}

TEST_CASE("image distributes over coproduct components") {
  test_util::Rng rng(43);
  for (Base base : {Base::FinSet, Base::FinPos, Base::FinMet, Base::FinAb}) {
    for (int it = 0; it < 10; ++it) {
      Obj x1 = test_util::random_object(rng, base, 3);
      Obj x2 = test_util::random_object(rng, base, 3);
      Obj a = test_util::random_object(rng, base, 4);
      CoproductResult cp = coproduct(base, {x1, x2});
      auto f = test_util::random_morphism(rng, cp.obj, a);
      if (!f) continue;
      Subobject whole = sub_image(*f);
      Subobject j = sub_join(a, {sub_image(compose(*f, cp.in[0])), sub_image(compose(*f, cp.in[1]))});
      CHECK(whole == j);
    }
  }
}
