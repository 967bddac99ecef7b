#pragma once

// Languages, L-structures, structure morphisms, hom-objects between
// structures, powers of structures, and pushouts of relational structures.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "enrlog/subobject.hpp"
#include "enrlog/vbase.hpp"

namespace enrlog {

struct FunctionSymbol {
  std::string name;
  Obj in_arity, out_arity;
};

struct RelationSymbol {
  std::string name;
  Obj arity;
};

struct Language {
  Base base = Base::FinSet;
  std::vector<FunctionSymbol> functions;
  std::vector<RelationSymbol> relations;

  const FunctionSymbol* function(const std::string& name) const;
  const RelationSymbol* relation(const std::string& name) const;
  bool is_relational() const { return functions.empty(); }
  std::string key() const;
};
using LanguagePtr = std::shared_ptr<const Language>;

LanguagePtr make_language(Base base, std::vector<FunctionSymbol> functions,
                          std::vector<RelationSymbol> relations);

// Thread-safe cache of powers of one fixed object.
class PowerCache {
 public:
  explicit PowerCache(Obj carrier) : carrier_(std::move(carrier)) {}
  const PowerResult& of(const Obj& exponent) const;
  const Obj& carrier() const { return carrier_; }

 private:
  Obj carrier_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const PowerResult>> cache_;
};

struct LStructure {
  LanguagePtr lang;
  Obj carrier;
  std::map<std::string, Morph> fn;        // f_A : A^X -> A^Y
  std::map<std::string, Subobject> rel;   // subobject of A^X
  std::shared_ptr<PowerCache> powers;

  const PowerResult& power_of(const Obj& exponent) const { return powers->of(exponent); }
  const Morph& fn_interp(const std::string& name) const;
  const Subobject& rel_interp(const std::string& name) const;
  std::string encode() const;  // deterministic serialization (not canonical)
};
using StructPtr = std::shared_ptr<const LStructure>;

// Validates arities and M-membership; returns the violations (empty = ok).
std::vector<std::string> validate_structure(const LStructure& a);

// Builds and validates; throws std::invalid_argument listing the violations.
StructPtr make_structure(LanguagePtr lang, Obj carrier, std::map<std::string, Morph> fn,
                         std::map<std::string, Subobject> rel);

// Convenience: function interpretations given as tables on power points,
// relations as point sets of the relevant power.
StructPtr make_structure_tables(LanguagePtr lang, Obj carrier,
                                const std::map<std::string, std::vector<int>>& fn_tables,
                                const std::map<std::string, std::vector<int>>& rel_points);

struct StructureMorphism {
  StructPtr from, to;
  Morph h;  // carrier map
};

// Checks the commuting squares for function symbols and the factorization
// condition for relation symbols; the report names the first failing symbol.
bool is_structure_morphism(const Morph& h, const LStructure& a, const LStructure& b,
                           std::string* violation = nullptr);
bool is_structure_morphism(const StructureMorphism& m, std::string* violation = nullptr);

StructureMorphism structure_identity(const StructPtr& a);
StructureMorphism structure_compose(const StructureMorphism& g, const StructureMorphism& f);

struct Cone {
  StructPtr apex;
  std::vector<StructureMorphism> legs;
};

// The hom-object Str(A,B): carrier = structure morphisms A -> B with the
// structure induced from power(carrier B, carrier A).
struct HomObject {
  Obj obj;
  std::vector<std::vector<int>> maps;  // carrier maps, in deterministic order
};
// Throws std::domain_error over FinAb if the morphism set is not a subgroup
// of the power (cannot happen for validly constructed structures; kept as a
// guard for hand-built input).
HomObject hom_object(const LStructure& a, const LStructure& b);

// The structure on A^X: carrier power_of(X), f_{A^X} = (f_A)^X transported
// along the canonical isomorphisms, r_{A^X} = (r_A)^X.
StructPtr power_structure(const LStructure& a, const Obj& x);

// Pushout in structures for relational languages: base pushout of carriers,
// relations = join of the images from both legs.
struct StructurePushout {
  StructPtr obj;
  StructureMorphism q1, q2;
};
StructurePushout pushout_structures(const StructureMorphism& f, const StructureMorphism& g);

}  // namespace enrlog
