#include <algorithm>
#include <cctype>
#include <map>

#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "pattern_util.hpp"

namespace lossless {

using namespace detail;

namespace {

struct EntityInfo {
  std::string name;
  std::string key;
  std::string oid;
  Sort sort;
  bool in_place = false;
  std::string source;  // anchored: table the OIDs are minted from
  std::string ident;   // anchored: identification table
};

struct Retag {
  std::string attr;
  std::string to;
  const EntityInfo* entity;
};

std::string default_oid_attr(const std::string& tag) {
  std::string out;
  for (unsigned char c : tag) out += static_cast<char>(std::tolower(c));
  return out + "oid";
}

// rho[k1->o:T, k2->k](sigma[k1 = k2](rho[k->k1](pi[k](F)) x rho[k->k2](pi[k](F))))
Expr identification_view(const std::string& table, const std::string& key, const std::string& oid, const Sort& sort,
                         const std::string& key_name) {
  const std::string k1 = key + "1", k2 = key + "2";
  Expr keys = Expr::project({key}, Expr::relation(table));
  Expr pairs = Expr::product(Expr::rename({{key, k1, std::nullopt}}, keys), Expr::rename({{key, k2, std::nullopt}}, keys));
  return Expr::rename({{k1, oid, sort}, {k2, key_name, std::nullopt}},
                      Expr::select(Predicate::eq_attr(k1, k2), std::move(pairs)));
}

class OidBuilder {
 public:
  OidBuilder(const Schema& s, const OidIntroduction& st) : s_(s), st_(st) {}

  CompiledTransform run() {
    collect_entities();
    collect_retags();
    build_relations();
    build_views();
    build_constraints();
    t_.source = s_;
    t_.provenance = {st_};
    return std::move(t_);
  }

 private:
  void collect_entities() {
    for (const auto& e : st_.entities) {
      if (e.key.size() != 1) {
        throw Error(e.key.empty() ? Errc::MissingKey : Errc::UnsupportedConstraint,
                    e.name + ": entity keys must be a single attribute");
      }
      if (e.tag.empty()) throw Error(Errc::InvalidSchema, e.name + ": missing OID tag");
      if (entities_.count(e.name)) throw Error(Errc::NameClash, "entity " + e.name + " declared twice");
      EntityInfo info;
      info.name = e.name;
      info.key = e.key[0];
      info.oid = e.oid_attr.empty() ? default_oid_attr(e.tag) : e.oid_attr;
      info.sort = Sort::oid(e.tag);
      if (e.source) {
        const auto& src = require_relation(s_, *e.source);
        require_attrs(src, e.key);
        require_value_sort(src, info.key);
        if (e.ident.empty()) throw Error(Errc::InvalidSchema, e.name + ": anchored entity needs an ident table");
        fresh(e.name);
        fresh(e.ident);
        info.source = *e.source;
        info.ident = e.ident;
      } else {
        const auto& rel = require_relation(s_, e.name);
        require_attrs(rel, e.key);
        require_value_sort(rel, info.key);
        if (!subset_of(rel.attribute_names(), closure(e.key, implied_fds(s_, rel.name)))) {
          throw Error(Errc::MissingKey, e.name + "(" + info.key + ") is not a declared key");
        }
        if (rel.find(info.oid)) throw Error(Errc::NameClash, e.name + " already has an attribute " + info.oid);
        info.in_place = true;
      }
      entities_.emplace(e.name, info);
      entity_order_.push_back(e.name);
    }
    for (const auto& sub : st_.subtypes) {
      auto it = entities_.find(sub.supertype);
      if (it == entities_.end()) throw Error(Errc::DanglingForeignKey, sub.name + ": unknown supertype " + sub.supertype);
      const auto& src = require_relation(s_, sub.source);
      require_attrs(src, {it->second.key});
      fresh(sub.name);
      EntityInfo info = it->second;
      info.name = sub.name;
      subtypes_.emplace(sub.name, info);
    }
  }

  void collect_retags() {
    auto add = [&](const std::string& table, const std::string& attr, const EntityInfo* e) {
      const auto& rel = require_relation(s_, table);
      require_attrs(rel, {attr});
      require_value_sort(rel, attr);
      auto& list = retags_[table];
      for (const auto& r : list) {
        if (r.attr == attr) {
          if (r.entity->oid == e->oid && r.entity->sort == e->sort) return;
          throw Error(Errc::NameClash, table + "." + attr + " references two entities");
        }
      }
      list.push_back({attr, attr == e->key ? e->oid : attr + "oid", e});
    };
    for (const auto& name : entity_order_) {
      const auto& e = entities_.at(name);
      if (!e.in_place) add(e.source, e.key, &e);
    }
    for (const auto& rel : st_.relationships) {
      for (const auto& fk : rel.fks) {
        const EntityInfo* e = find_entity(fk.entity);
        if (!e) throw Error(Errc::DanglingForeignKey, rel.relation + "." + fk.attr + " -> unknown entity " + fk.entity);
        if (e->in_place && e->name == rel.relation && fk.attr == e->key) {
          throw Error(Errc::DanglingForeignKey, rel.relation + "." + fk.attr + " references its own key");
        }
        add(rel.relation, fk.attr, e);
      }
    }
    for (const auto& sub : st_.subtypes) add(sub.source, subtypes_.at(sub.name).key, &subtypes_.at(sub.name));
    for (const auto& [table, list] : retags_) {
      const auto& rel = s_.at(table);
      Names names = rel.attribute_names();
      for (const auto& r : list) std::replace(names.begin(), names.end(), r.attr, r.to);
      if (const auto* e = in_place(table)) names.push_back(e->oid);
      std::sort(names.begin(), names.end());
      if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
        throw Error(Errc::NameClash, table + ": OID attributes clash with existing attributes");
      }
    }
  }

  void build_relations() {
    auto& out = t_.target.relations;
    for (const auto& rel : s_.relations) {
      for (const auto& name : entity_order_) {
        const auto& e = entities_.at(name);
        if (e.in_place || e.source != rel.name) continue;
        out.push_back({e.name, {{e.oid, e.sort, false, std::nullopt}}});
        AttributeSpec key = *rel.find(e.key);
        key.nullable = false;
        out.push_back({e.ident, {{e.oid, e.sort, false, std::nullopt}, key}});
      }
      for (const auto& sub : st_.subtypes) {
        if (sub.source != rel.name) continue;
        const auto& e = subtypes_.at(sub.name);
        out.push_back({e.name, {{e.oid, e.sort, false, std::nullopt}}});
      }
      RelationSignature r = rel;
      for (auto& a : r.attributes) {
        if (const auto* rt = retag_of(rel.name, a.name)) a = {rt->to, rt->entity->sort, a.nullable, std::nullopt};
      }
      if (const auto* e = in_place(rel.name)) r.attributes.insert(r.attributes.begin(), {e->oid, e->sort, false, std::nullopt});
      out.push_back(std::move(r));
    }
  }

  std::vector<RenameItem> renames_for(const std::string& table) const {
    std::vector<RenameItem> out;
    if (auto it = retags_.find(table); it != retags_.end()) {
      for (const auto& r : it->second) out.push_back({r.attr, r.to, r.entity->sort});
    }
    return out;
  }

  // Relation of the target holding (oid, key) pairs of an entity, as an expression.
  Expr ident_expr(const EntityInfo& e) const {
    if (e.in_place) return Expr::project({e.oid, e.key}, Expr::relation(e.name));
    return Expr::relation(e.ident);
  }

  void build_views() {
    Mapping fwd, bwd;
    for (const auto& rel : s_.relations) {
      for (const auto& name : entity_order_) {
        const auto& e = entities_.at(name);
        if (e.in_place || e.source != rel.name) continue;
        fwd.views.push_back({e.name, Expr::rename({{e.key, e.oid, e.sort}}, Expr::project({e.key}, Expr::relation(rel.name)))});
        fwd.views.push_back({e.ident, identification_view(rel.name, e.key, e.oid, e.sort, e.key)});
      }
      for (const auto& sub : st_.subtypes) {
        if (sub.source != rel.name) continue;
        const auto& e = subtypes_.at(sub.name);
        fwd.views.push_back({e.name, Expr::rename({{e.key, e.oid, e.sort}}, Expr::project({e.key}, Expr::relation(rel.name)))});
      }
      const auto renames = renames_for(rel.name);
      Expr view = Expr::relation(rel.name);
      if (!renames.empty()) view = Expr::rename(renames, view);
      Names header = rel.attribute_names();
      for (const auto& r : renames) std::replace(header.begin(), header.end(), r.from, r.to);
      if (const auto* e = in_place(rel.name)) {
        Expr ident = identification_view(rel.name, e->key, e->oid, e->sort, e->key);
        Names target = header;
        target.insert(target.begin(), e->oid);
        Names join_header{e->oid, e->key};
        for (const auto& a : header) {
          if (a != e->key) join_header.push_back(a);
        }
        view = project_if_needed(target, join_header, Expr::join(ident, view));
      }
      fwd.views.push_back({rel.name, view});

      // Back: join every OID column with its identification to recover the key.
      Names back_header = t_.target.at(rel.name).attribute_names();
      Expr back = Expr::relation(rel.name);
      if (auto it = retags_.find(rel.name); it != retags_.end()) {
        for (const auto& r : it->second) {
          std::vector<RenameItem> items;
          if (r.entity->oid != r.to) items.push_back({r.entity->oid, r.to, std::nullopt});
          if (r.entity->key != r.attr) items.push_back({r.entity->key, r.attr, std::nullopt});
          Expr ident = ident_expr(*r.entity);
          if (!items.empty()) ident = Expr::rename(items, ident);
          back = Expr::join(back, ident);
          back_header.push_back(r.attr);
        }
      }
      bwd.views.push_back({rel.name, project_if_needed(rel.attribute_names(), back_header, back)});
    }
    t_.fwd = ordered(fwd, t_.target);
    t_.bwd = ordered(bwd, s_);
  }

  AttrList endpoint(const AttrList& a, bool want_oid) const {
    for (const auto& name : entity_order_) {
      const auto& e = entities_.at(name);
      if (!e.in_place && e.source == a.relation && a.attrs == Names{e.key}) return {e.name, {e.oid}};
      if (e.in_place && e.name == a.relation && a.attrs == Names{e.key} && want_oid) return {e.name, {e.oid}};
    }
    AttrList out = a;
    for (auto& attr : out.attrs) {
      if (const auto* r = retag_of(a.relation, attr)) attr = r->to;
    }
    return out;
  }

  bool any_oid(const AttrList& a) const {
    return std::any_of(a.attrs.begin(), a.attrs.end(), [&](const std::string& x) { return retag_of(a.relation, x); }) ||
           std::any_of(entity_order_.begin(), entity_order_.end(), [&](const std::string& n) {
             const auto& e = entities_.at(n);
             return !e.in_place && e.source == a.relation && a.attrs == Names{e.key};
           });
  }

  Names renamed(const std::string& table, Names attrs) const {
    for (auto& a : attrs) {
      if (const auto* r = retag_of(table, a)) a = r->to;
    }
    return attrs;
  }

  void build_constraints() {
    std::vector<Constraint> out;
    for (const auto& name : entity_order_) {
      const auto& e = entities_.at(name);
      if (e.in_place) continue;
      push_unique(out, Inclusion{{e.ident, {e.oid}}, {e.ident, {e.key}}, true});
      push_unique(out, Inclusion{{e.name, {e.oid}}, {e.ident, {e.oid}}, true});
      push_unique(out, Inclusion{{e.source, {retag_of(e.source, e.key)->to}}, {e.name, {e.oid}}, true});
    }
    for (const auto& sub : st_.subtypes) {
      const auto& e = subtypes_.at(sub.name);
      const auto& super = entities_.at(sub.supertype);
      push_unique(out, Inclusion{{e.name, {e.oid}}, {super.name, {super.oid}}, false});
      push_unique(out, Inclusion{{e.name, {e.oid}}, {sub.source, {retag_of(sub.source, e.key)->to}}, true});
    }

    std::vector<std::string> pending;
    for (const auto& name : entity_order_) {
      if (entities_.at(name).in_place) pending.push_back(name);
    }
    auto flush = [&](const std::string& owner) {
      auto it = std::find(pending.begin(), pending.end(), owner);
      if (it == pending.end()) return;
      const auto& e = entities_.at(owner);
      push_unique(out, Inclusion{{e.name, {e.oid}}, {e.name, {e.key}}, true});
      pending.erase(it);
    };

    Mapping changed;
    for (const auto& v : t_.bwd.views) {
      if (!(v.expr.kind() == Expr::Kind::RelationRef && v.expr.relation_name() == v.relation)) changed.views.push_back(v);
    }
    for (const auto& c : s_.constraints) {
      auto rels = constraint_relations(c);
      if (!rels.empty()) flush(rels.front());
      std::visit(
          [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, FunctionalDep> || std::is_same_v<T, MultivaluedDep>) {
              push_unique(out, T{k.relation, renamed(k.relation, k.lhs), renamed(k.relation, k.rhs)});
            } else if constexpr (std::is_same_v<T, Inclusion>) {
              if (is_key_correspondence(k, s_)) {
                push_unique(out, Inclusion{endpoint(k.from, false), endpoint(k.to, false), true});
                return;
              }
              const bool oid = any_oid(k.from) || any_oid(k.to);
              Inclusion img{endpoint(k.from, oid), endpoint(k.to, oid), k.bidirectional};
              if (img.from == img.to) return;
              check_sorts(k, img);
              push_unique(out, img);
            } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn>) {
              if (retag_of(k.relation, k.attr)) {
                throw Error(Errc::UnsupportedConstraint, to_string(Constraint{k}) + " on an attribute replaced by OIDs");
              }
              push_unique(out, k);
            } else if constexpr (std::is_same_v<T, NotNull>) {
              push_unique(out, NotNull{k.relation, renamed(k.relation, {k.attr})[0]});
            } else {
              push_unique(out, substitute(Constraint{k}, changed));
            }
          },
          c);
    }
    for (const auto& name : std::vector<std::string>(pending)) flush(name);
    t_.target.constraints = std::move(out);
  }

  void check_sorts(const Inclusion& original, const Inclusion& img) const {
    const auto& fr = t_.target.at(img.from.relation);
    const auto& tr = t_.target.at(img.to.relation);
    for (std::size_t i = 0; i < img.from.attrs.size(); ++i) {
      if (fr.find(img.from.attrs[i])->sort != tr.find(img.to.attrs[i])->sort) {
        throw Error(Errc::DanglingForeignKey,
                    to_string(Constraint{original}) + " links an OID to a plain value; declare the foreign key");
      }
    }
  }

  const EntityInfo* find_entity(const std::string& name) const {
    if (auto it = entities_.find(name); it != entities_.end()) return &it->second;
    if (auto it = subtypes_.find(name); it != subtypes_.end()) return &it->second;
    return nullptr;
  }

  const EntityInfo* in_place(const std::string& table) const {
    auto it = entities_.find(table);
    return it != entities_.end() && it->second.in_place ? &it->second : nullptr;
  }

  const Retag* retag_of(const std::string& table, const std::string& attr) const {
    auto it = retags_.find(table);
    if (it == retags_.end()) return nullptr;
    for (const auto& r : it->second) {
      if (r.attr == attr) return &r;
    }
    return nullptr;
  }

  void require_value_sort(const RelationSignature& rel, const std::string& attr) const {
    if (rel.find(attr)->sort.is_oid()) throw Error(Errc::SortMismatch, rel.name + "." + attr + " is already an OID");
  }

  void fresh(const std::string& name) {
    if (s_.has(name) || !new_names_.insert(name).second) throw Error(Errc::NameClash, "relation " + name + " already exists");
  }

  const Schema& s_;
  const OidIntroduction& st_;
  std::map<std::string, EntityInfo> entities_;
  std::map<std::string, EntityInfo> subtypes_;
  std::vector<std::string> entity_order_;
  std::map<std::string, std::vector<Retag>> retags_;
  std::set<std::string> new_names_;
  CompiledTransform t_;
};

}  // namespace

CompiledTransform apply_oid_introduction(const Schema& schema, const OidIntroduction& step) {
  return OidBuilder(schema, step).run();
}

}  // namespace lossless
