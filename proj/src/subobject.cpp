#include "enrlog/subobject.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace enrlog {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Subobject::Subobject(Obj codomain, std::vector<int> points) : cod_(std::move(codomain)), pts_(std::move(points)) {
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  for (int p : pts_) require(p >= 0 && p < cod_->n, "subobject: point out of range");
  if (cod_->base == Base::FinAb)
    require(is_ab_subgroup(cod_, pts_), "subobject: point set is not a subgroup");
}

bool Subobject::contains(int point) const {
  return std::binary_search(pts_.begin(), pts_.end(), point);
}

Morph Subobject::inclusion() const { return subobject_inclusion(cod_, pts_); }

Obj Subobject::domain_object() const { return induced_subobject(cod_, pts_); }

bool Subobject::operator==(const Subobject& o) const {
  return same_object(cod_, o.cod_) && pts_ == o.pts_;
}

Subobject top_subobject(const Obj& a) {
  std::vector<int> all(a->n);
  for (int i = 0; i < a->n; ++i) all[i] = i;
  return Subobject(a, std::move(all));
}

Subobject bottom_subobject(const Obj& a) {
  if (a->base == Base::FinAb) return Subobject(a, {a->zero});
  return Subobject(a, {});
}

bool sub_leq(const Subobject& s, const Subobject& t) {
  require(same_object(s.codomain(), t.codomain()), "sub_leq: codomain mismatch");
  return std::includes(t.points().begin(), t.points().end(), s.points().begin(), s.points().end());
}

std::optional<Morph> sub_leq_witness(const Subobject& s, const Subobject& t) {
  if (!sub_leq(s, t)) return std::nullopt;
  Morph ms = s.inclusion(), mt = t.inclusion();
  Morph k;
  k.dom = ms.dom;
  k.cod = mt.dom;
  k.map.resize(ms.dom->n);
  for (int i = 0; i < ms.dom->n; ++i) {
    auto it = std::lower_bound(t.points().begin(), t.points().end(), ms.map[i]);
    k.map[i] = (int)(it - t.points().begin());
  }
  return k;
}

Subobject sub_intersect(const std::vector<Subobject>& subs) {
  require(!subs.empty(), "sub_intersect: empty family (use the top subobject)");
  for (auto& s : subs) require(same_object(s.codomain(), subs[0].codomain()), "sub_intersect: codomain mismatch");
  std::vector<int> acc = subs[0].points();
  for (size_t i = 1; i < subs.size(); ++i) {
    std::vector<int> next;
    std::set_intersection(acc.begin(), acc.end(), subs[i].points().begin(), subs[i].points().end(),
                          std::back_inserter(next));
    acc = std::move(next);
  }
  return Subobject(subs[0].codomain(), std::move(acc));
}

Subobject sub_image(const Morph& f) {
  Factorization fac = factorize(f);
  return Subobject(f.cod, fac.m.map);
}

Subobject sub_join(const Obj& codomain, const std::vector<Subobject>& subs) {
  for (auto& s : subs) require(same_object(s.codomain(), codomain), "sub_join: codomain mismatch");
  if (subs.empty()) return bottom_subobject(codomain);
  if (codomain->base == Base::FinAb) {
    // image of the induced map off the direct sum: the subgroup sum
    std::vector<int> gens;
    for (auto& s : subs)
      for (int p : s.points()) gens.push_back(p);
    return Subobject(codomain, ab_generated_subgroup(codomain, gens));
  }
  std::vector<int> un;
  for (auto& s : subs)
    for (int p : s.points()) un.push_back(p);
  return Subobject(codomain, std::move(un));
}

Subobject sub_pull_back(const Subobject& s, const Morph& f) {
  require(same_object(f.cod, s.codomain()), "sub_pull_back: codomain mismatch");
  std::vector<int> pts;
  for (int x = 0; x < f.dom->n; ++x)
    if (s.contains(f.map[x])) pts.push_back(x);
  return Subobject(f.dom, std::move(pts));
}

Subobject sub_power(const Subobject& s, const PowerResult& paw, const Obj& y,
                    const PowerResult& ptensor, const TensorResult& wy) {
  require(same_object(s.codomain(), paw.obj), "sub_power: subobject does not live in the given power");
  const Obj& w = paw.exponent;
  std::vector<int> pts;
  for (int q = 0; q < ptensor.obj->n; ++q) {
    const std::vector<int>& qmap = ptensor.maps[q];
    bool ok = true;
    for (int yy = 0; yy < y->n && ok; ++yy) {
      std::vector<int> slice(w->n);
      for (int ww = 0; ww < w->n; ++ww) slice[ww] = qmap[wy.pair(ww, yy)];
      ok = s.contains(paw.index_of(slice));
    }
    if (ok) pts.push_back(q);
  }
  return Subobject(ptensor.obj, std::move(pts));
}

bool sub_is_iso(const Subobject& s) { return s.size() == s.codomain()->n; }

}  // namespace enrlog
