#include "enrlog/signature.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace enrlog {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

const FunctionSymbol* Language::function(const std::string& name) const {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const RelationSymbol* Language::relation(const std::string& name) const {
  for (auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

std::string Language::key() const {
  std::ostringstream os;
  os << base_name(base) << "{";
  for (auto& f : functions) os << "fun " << f.name << ":" << f.in_arity->key() << "->" << f.out_arity->key() << ";";
  for (auto& r : relations) os << "rel " << r.name << ":" << r.arity->key() << ";";
  os << "}";
  return os.str();
}

LanguagePtr make_language(Base base, std::vector<FunctionSymbol> functions,
                          std::vector<RelationSymbol> relations) {
  std::set<std::string> names;
  for (auto& f : functions) {
    require(names.insert(f.name).second, "language: duplicate symbol " + f.name);
    require(f.in_arity->base == base && f.out_arity->base == base,
            "language: arity of " + f.name + " is in the wrong base");
  }
  for (auto& r : relations) {
    require(names.insert(r.name).second, "language: duplicate symbol " + r.name);
    require(r.arity->base == base, "language: arity of " + r.name + " is in the wrong base");
  }
  Language l;
  l.base = base;
  l.functions = std::move(functions);
  l.relations = std::move(relations);
  return std::make_shared<const Language>(std::move(l));
}

const PowerResult& PowerCache::of(const Obj& exponent) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(exponent->key());
  if (it != cache_.end()) return *it->second;
  auto p = std::make_shared<const PowerResult>(power(carrier_, exponent));
  auto [pos, inserted] = cache_.emplace(exponent->key(), std::move(p));
  return *pos->second;
}

const Morph& LStructure::fn_interp(const std::string& name) const {
  auto it = fn.find(name);
  require(it != fn.end(), "structure: no interpretation for function " + name);
  return it->second;
}

const Subobject& LStructure::rel_interp(const std::string& name) const {
  auto it = rel.find(name);
  require(it != rel.end(), "structure: no interpretation for relation " + name);
  return it->second;
}

std::string LStructure::encode() const {
  std::ostringstream os;
  os << carrier->key() << "|";
  for (auto& f : lang->functions) {
    os << f.name << ":";
    auto it = fn.find(f.name);
    if (it != fn.end())
      for (int v : it->second.map) os << v << ",";
    os << ";";
  }
  for (auto& r : lang->relations) {
    os << r.name << ":";
    auto it = rel.find(r.name);
    if (it != rel.end())
      for (int v : it->second.points()) os << v << ",";
    os << ";";
  }
  return os.str();
}

std::vector<std::string> validate_structure(const LStructure& a) {
  std::vector<std::string> out;
  if (!a.lang) return {"structure: missing language"};
  if (a.carrier->base != a.lang->base) out.push_back("structure: carrier base differs from language base");
  for (auto& f : a.lang->functions) {
    auto it = a.fn.find(f.name);
    if (it == a.fn.end()) {
      out.push_back("function " + f.name + ": not interpreted");
      continue;
    }
    const PowerResult& px = a.power_of(f.in_arity);
    const PowerResult& py = a.power_of(f.out_arity);
    if (!same_object(it->second.dom, px.obj) || !same_object(it->second.cod, py.obj))
      out.push_back("function " + f.name + ": interpretation has the wrong arity");
    else if (!is_valid_morphism(it->second))
      out.push_back("function " + f.name + ": interpretation is not a base morphism");
  }
  for (auto& r : a.lang->relations) {
    auto it = a.rel.find(r.name);
    if (it == a.rel.end()) {
      out.push_back("relation " + r.name + ": not interpreted");
      continue;
    }
    const PowerResult& px = a.power_of(r.arity);
    if (!same_object(it->second.codomain(), px.obj)) {
      out.push_back("relation " + r.name + ": interpretation lives in the wrong power");
      continue;
    }
    if (!in_m(it->second.inclusion()))
      out.push_back("relation " + r.name + ": interpretation is not an M-subobject");
  }
  for (auto& [name, _] : a.fn)
    if (!a.lang->function(name)) out.push_back("function " + name + ": unknown symbol");
  for (auto& [name, _] : a.rel)
    if (!a.lang->relation(name)) out.push_back("relation " + name + ": unknown symbol");
  return out;
}

StructPtr make_structure(LanguagePtr lang, Obj carrier, std::map<std::string, Morph> fn,
                         std::map<std::string, Subobject> rel) {
  LStructure a;
  a.lang = std::move(lang);
  a.carrier = carrier;
  a.fn = std::move(fn);
  a.rel = std::move(rel);
  a.powers = std::make_shared<PowerCache>(carrier);
  auto violations = validate_structure(a);
  if (!violations.empty()) {
    std::string msg = "invalid structure:";
    for (auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return std::make_shared<const LStructure>(std::move(a));
}

StructPtr make_structure_tables(LanguagePtr lang, Obj carrier,
                                const std::map<std::string, std::vector<int>>& fn_tables,
                                const std::map<std::string, std::vector<int>>& rel_points) {
  auto powers = std::make_shared<PowerCache>(carrier);
  std::map<std::string, Morph> fn;
  std::map<std::string, Subobject> rel;
  for (auto& f : lang->functions) {
    auto it = fn_tables.find(f.name);
    require(it != fn_tables.end(), "structure: no table for function " + f.name);
    const PowerResult& px = powers->of(f.in_arity);
    const PowerResult& py = powers->of(f.out_arity);
    fn.emplace(f.name, Morph{px.obj, py.obj, it->second});
  }
  for (auto& r : lang->relations) {
    auto it = rel_points.find(r.name);
    require(it != rel_points.end(), "structure: no point set for relation " + r.name);
    const PowerResult& px = powers->of(r.arity);
    rel.emplace(r.name, Subobject(px.obj, it->second));
  }
  LStructure a;
  a.lang = std::move(lang);
  a.carrier = carrier;
  a.fn = std::move(fn);
  a.rel = std::move(rel);
  a.powers = powers;
  auto violations = validate_structure(a);
  if (!violations.empty()) {
    std::string msg = "invalid structure:";
    for (auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return std::make_shared<const LStructure>(std::move(a));
}

bool is_structure_morphism(const Morph& h, const LStructure& a, const LStructure& b,
                           std::string* violation) {
  if (a.lang->key() != b.lang->key()) {
    if (violation) *violation = "language mismatch";
    return false;
  }
  if (!same_object(h.dom, a.carrier) || !same_object(h.cod, b.carrier)) {
    if (violation) *violation = "carrier mismatch";
    return false;
  }
  if (!is_valid_morphism(h)) {
    if (violation) *violation = "not a base morphism";
    return false;
  }
  for (auto& f : a.lang->functions) {
    const PowerResult& ax = a.power_of(f.in_arity);
    const PowerResult& ay = a.power_of(f.out_arity);
    const PowerResult& bx = b.power_of(f.in_arity);
    const PowerResult& by = b.power_of(f.out_arity);
    Morph hx = power_of_map(ax, bx, h);
    Morph hy = power_of_map(ay, by, h);
    if (!morphisms_equal(compose(hy, a.fn_interp(f.name)), compose(b.fn_interp(f.name), hx))) {
      if (violation) *violation = "function " + f.name + ": square does not commute";
      return false;
    }
  }
  for (auto& r : a.lang->relations) {
    const PowerResult& ax = a.power_of(r.arity);
    const PowerResult& bx = b.power_of(r.arity);
    Morph hx = power_of_map(ax, bx, h);
    for (int p : a.rel_interp(r.name).points())
      if (!b.rel_interp(r.name).contains(hx.map[p])) {
        if (violation) *violation = "relation " + r.name + ": image not contained in the target relation";
        return false;
      }
  }
  return true;
}

bool is_structure_morphism(const StructureMorphism& m, std::string* violation) {
  return is_structure_morphism(m.h, *m.from, *m.to, violation);
}

StructureMorphism structure_identity(const StructPtr& a) {
  return StructureMorphism{a, a, identity(a->carrier)};
}

StructureMorphism structure_compose(const StructureMorphism& g, const StructureMorphism& f) {
  require(f.to->encode() == g.from->encode(), "structure_compose: middle structures differ");
  return StructureMorphism{f.from, g.to, compose(g.h, f.h)};
}

HomObject hom_object(const LStructure& a, const LStructure& b) {
  require(a.lang->key() == b.lang->key(), "hom_object: language mismatch");
  PowerResult p = power(b.carrier, a.carrier);
  std::vector<int> good;
  for (int i = 0; i < (int)p.maps.size(); ++i) {
    Morph h{a.carrier, b.carrier, p.maps[i]};
    if (is_structure_morphism(h, a, b)) good.push_back(i);
  }
  if (b.carrier->base == Base::FinAb && !is_ab_subgroup(p.obj, good))
    throw std::domain_error("hom_object: structure morphisms do not form a subgroup over finab");
  HomObject h;
  h.obj = induced_subobject(p.obj, good);
  for (int i : good) h.maps.push_back(p.maps[i]);
  return h;
}

StructPtr power_structure(const LStructure& a, const Obj& x) {
  require(x->base == a.carrier->base, "power_structure: base mismatch");
  const PowerResult& pax = a.power_of(x);
  Obj carrier = pax.obj;
  auto powers = std::make_shared<PowerCache>(carrier);
  LStructure out;
  out.lang = a.lang;
  out.carrier = carrier;
  out.powers = powers;

  // point q of (A^X)^W as the swapped family: for each x-point, a W-tuple
  auto swap_point = [&](const PowerResult& pw_of_power, const PowerResult& pa_of_w, int q) {
    const std::vector<int>& qmap = pw_of_power.maps[q];  // W -> A^X
    int wn = (int)qmap.size();
    std::vector<int> per_x(x->n, -1);
    for (int xx = 0; xx < x->n; ++xx) {
      std::vector<int> tuple(wn);
      for (int ww = 0; ww < wn; ++ww) tuple[ww] = pax.maps[qmap[ww]][xx];
      per_x[xx] = pa_of_w.index_of(tuple);
    }
    return per_x;  // for each point of X, a point of A^W
  };

  for (auto& f : a.lang->functions) {
    const PowerResult& pw = powers->of(f.in_arity);   // (A^X)^W
    const PowerResult& py = powers->of(f.out_arity);  // (A^X)^Y
    const PowerResult& paw = a.power_of(f.in_arity);
    const PowerResult& pay = a.power_of(f.out_arity);
    const Morph& fa = a.fn_interp(f.name);
    Morph fx;
    fx.dom = pw.obj;
    fx.cod = py.obj;
    fx.map.resize(pw.obj->n);
    int yn = f.out_arity->n;
    for (int q = 0; q < pw.obj->n; ++q) {
      std::vector<int> per_x = swap_point(pw, paw, q);
      // apply f_A in each x-slice, then swap back
      std::vector<int> res(yn >= 0 ? yn : 0);
      std::vector<std::vector<int>> slices(x->n);
      for (int xx = 0; xx < x->n; ++xx) slices[xx] = pay.maps[fa.map[per_x[xx]]];
      std::vector<int> back(yn);
      for (int yy = 0; yy < yn; ++yy) {
        std::vector<int> tuple(x->n);
        for (int xx = 0; xx < x->n; ++xx) tuple[xx] = slices[xx][yy];
        back[yy] = pax.index_of(tuple);
      }
      fx.map[q] = py.index_of(back);
    }
    out.fn.emplace(f.name, std::move(fx));
  }

  for (auto& r : a.lang->relations) {
    const PowerResult& pw = powers->of(r.arity);  // (A^X)^W
    const PowerResult& paw = a.power_of(r.arity);
    const Subobject& ra = a.rel_interp(r.name);
    std::vector<int> pts;
    for (int q = 0; q < pw.obj->n; ++q) {
      std::vector<int> per_x = swap_point(pw, paw, q);
      bool ok = true;
      for (int xx = 0; xx < x->n && ok; ++xx) ok = ra.contains(per_x[xx]);
      if (ok) pts.push_back(q);
    }
    out.rel.emplace(r.name, Subobject(pw.obj, std::move(pts)));
  }

  auto violations = validate_structure(out);
  if (!violations.empty()) throw std::logic_error("power_structure produced an invalid structure");
  return std::make_shared<const LStructure>(std::move(out));
}

StructurePushout pushout_structures(const StructureMorphism& f, const StructureMorphism& g) {
  require(f.from->encode() == g.from->encode(), "pushout_structures: domain mismatch");
  const Language& lang = *f.from->lang;
  require(lang.is_relational(), "pushout_structures: function symbols are not supported");
  PushoutResult base = pushout(f.h, g.h);

  auto powers = std::make_shared<PowerCache>(base.obj);
  LStructure q;
  q.lang = f.from->lang;
  q.carrier = base.obj;
  q.powers = powers;
  const LStructure& a = *f.to;
  const LStructure& b = *g.to;
  for (auto& r : lang.relations) {
    const PowerResult& pq = powers->of(r.arity);
    const PowerResult& pa = a.power_of(r.arity);
    const PowerResult& pb = b.power_of(r.arity);
    Morph q1w = power_of_map(pa, pq, base.q1);
    Morph q2w = power_of_map(pb, pq, base.q2);
    std::vector<Subobject> images;
    std::vector<int> pts1, pts2;
    for (int p : a.rel_interp(r.name).points()) pts1.push_back(q1w.map[p]);
    for (int p : b.rel_interp(r.name).points()) pts2.push_back(q2w.map[p]);
    if (base.obj->base == Base::FinAb) {
      images.push_back(Subobject(pq.obj, ab_generated_subgroup(pq.obj, pts1)));
      images.push_back(Subobject(pq.obj, ab_generated_subgroup(pq.obj, pts2)));
    } else {
      images.push_back(Subobject(pq.obj, pts1));
      images.push_back(Subobject(pq.obj, pts2));
    }
    q.rel.emplace(r.name, sub_join(pq.obj, images));
  }
  StructPtr qs = std::make_shared<const LStructure>(std::move(q));
  StructurePushout out;
  out.obj = qs;
  out.q1 = StructureMorphism{f.to, qs, base.q1};
  out.q2 = StructureMorphism{g.to, qs, base.q2};
  return out;
}

}  // namespace enrlog
