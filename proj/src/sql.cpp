#include <algorithm>
#include <set>
#include <sstream>

#include "lossless/error.hpp"
#include "lossless/print.hpp"
#include "lossless/transducer.hpp"
#include "pattern_util.hpp"

namespace lossless {

namespace {

constexpr const char* kText = "VARCHAR(255)";
constexpr const char* kSourceSchema = "src";
constexpr const char* kTargetSchema = "tgt";

std::string ident(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string table(const std::string& schema, const std::string& rel) { return schema + "." + ident(rel); }

std::string literal(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

// Every value is stored as text; OIDs as "TAG:payload".
std::string sql_value(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_oid()) return literal(v.as_oid().tag + ":" + token_to_string(v.as_oid().payload));
  return literal(token_to_string(v.as_const().token));
}

std::string comma(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

std::vector<std::string> idents(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(ident(n));
  return out;
}

std::string sql_predicate(const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return "1 = 1";
    case K::False: return "1 = 0";
    case K::EqAttr: return ident(p.attr) + " = " + ident(p.other_attr);
    case K::EqConst: return ident(p.attr) + " = " + sql_value(p.constant);
    case K::NeConst: return ident(p.attr) + " <> " + sql_value(p.constant);
    case K::IsNull: return ident(p.attr) + " IS NULL";
    case K::IsNotNull: return ident(p.attr) + " IS NOT NULL";
    case K::And: {
      std::vector<std::string> parts;
      for (const auto& t : p.terms) parts.push_back("(" + sql_predicate(t) + ")");
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " AND " : "") + parts[i];
      return out;
    }
  }
  return "?";
}

std::string cast_column(const std::string& col, const Sort& from, const Sort& to) {
  std::string base = col;
  if (from.is_oid()) base = "SUBSTRING(" + col + " FROM " + std::to_string(from.tag.size() + 2) + ")";
  if (!to.is_oid()) return base;
  return literal(to.tag + ":") + " || CAST(" + base + " AS " + kText + ")";
}

class SqlWriter {
 public:
  SqlWriter(const Schema& s, std::string schema) : s_(s), schema_(std::move(schema)) {}

  std::string query(const Expr& e) {
    using K = Expr::Kind;
    const Header h = header(e, s_);
    const auto cols = comma(idents(column_names(h)));
    switch (e.kind()) {
      case K::RelationRef: return "SELECT " + cols + " FROM " + table(schema_, e.relation_name());
      case K::Project: return "SELECT DISTINCT " + cols + " FROM " + sub(e.child());
      case K::Select: return "SELECT " + cols + " FROM " + sub(e.child()) + " WHERE " + sql_predicate(e.predicate());
      case K::Rename: {
        const Header in = header(e.child(), s_);
        std::vector<std::string> parts;
        for (const auto& c : in) {
          std::string expr = ident(c.name), name = c.name;
          for (const auto& r : e.renames()) {
            if (r.from != c.name) continue;
            name = r.to;
            if (r.cast) expr = cast_column(expr, c.sort, *r.cast);
          }
          parts.push_back(expr == ident(name) ? expr : expr + " AS " + ident(name));
        }
        return "SELECT " + comma(parts) + " FROM " + sub(e.child());
      }
      case K::Pad: {
        std::vector<std::string> parts = idents(column_names(header(e.child(), s_)));
        for (const auto& p : e.pads()) parts.push_back("CAST(NULL AS " + std::string(kText) + ") AS " + ident(p.name));
        return "SELECT " + comma(parts) + " FROM " + sub(e.child());
      }
      case K::Product: return "SELECT " + cols + " FROM " + sub(e.child(0)) + " CROSS JOIN " + sub(e.child(1));
      case K::NaturalJoin:
        return "SELECT DISTINCT " + cols + " FROM " + sub(e.child(0)) + " NATURAL JOIN " + sub(e.child(1));
      case K::OuterJoin: {
        std::string from = sub(e.child(0));
        for (std::size_t i = 1; i < e.children().size(); ++i) from += " NATURAL FULL OUTER JOIN " + sub(e.child(i));
        return "SELECT DISTINCT " + cols + " FROM " + from;
      }
      case K::Union: return setop(e, "UNION");
      case K::Intersect: return setop(e, "INTERSECT");
      case K::Difference: return setop(e, "EXCEPT");
    }
    return "?";
  }

 private:
  std::string sub(const Expr& e) {
    const std::string alias = " AS t" + std::to_string(++alias_);
    if (e.kind() == Expr::Kind::RelationRef) return table(schema_, e.relation_name()) + alias;
    return "(" + query(e) + ")" + alias;
  }

  std::string setop(const Expr& e, const char* op) {
    return "(" + query(e.child(0)) + ") " + op + " (" + query(e.child(1)) + ")";
  }

  const Schema& s_;
  std::string schema_;
  int alias_ = 0;
};

struct Ddl {
  std::string text;
  std::vector<std::string> unsupported;
};

bool is_key(const Schema& s, const std::string& rel, const std::vector<std::string>& attrs) {
  const auto& r = s.at(rel);
  return detail::subset_of(r.attribute_names(), detail::closure(attrs, detail::implied_fds(s, rel)));
}

Ddl schema_ddl(const Schema& s, const std::string& schema, const EmitOptions& options) {
  std::ostringstream out;
  Ddl ddl;
  auto unsupported = [&](const Constraint& c, const std::string& why) {
    const std::string text = std::string(schema) + ": " + to_string(c) + " (" + why + ")";
    if (options.strict) throw Error(Errc::UnsupportedConstraintForDialect, text);
    ddl.unsupported.push_back(text);
  };

  std::map<std::string, std::vector<std::vector<std::string>>> keys;
  std::map<std::string, std::vector<std::string>> table_lines;  // checks inside CREATE TABLE
  std::map<std::string, std::set<std::string>> not_null;
  std::vector<std::string> foreign_keys, assertions;
  auto unique_line = [&](const std::string& rel, const std::vector<std::string>& attrs) {
    auto& ks = keys[rel];
    if (std::find(ks.begin(), ks.end(), attrs) == ks.end()) ks.push_back(attrs);
  };
  auto foreign_key = [&](const AttrList& from, const AttrList& to) {
    foreign_keys.push_back("ALTER TABLE " + table(schema, from.relation) + " ADD FOREIGN KEY (" +
                           comma(idents(from.attrs)) + ") REFERENCES " + table(schema, to.relation) + " (" +
                           comma(idents(to.attrs)) + ") DEFERRABLE INITIALLY DEFERRED;");
  };

  for (const auto& c : s.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FunctionalDep>) {
            if (is_key(s, k.relation, k.lhs)) {
              unique_line(k.relation, k.lhs);
            } else {
              unsupported(c, "non-key functional dependency");
              assertions.push_back(to_string(c));
            }
          } else if constexpr (std::is_same_v<T, Inclusion>) {
            if (is_key_correspondence(k, s)) {
              const auto& r = s.at(k.from.relation);
              const auto& a = *r.find(k.from.attrs[0]);
              const auto& b = *r.find(k.to.attrs[0]);
              const auto& oid = a.sort.is_oid() ? a : b;
              const auto& key = a.sort.is_oid() ? b : a;
              unique_line(r.name, {oid.name});
              unique_line(r.name, {key.name});
              table_lines[r.name].push_back("CHECK (" + ident(oid.name) + " = " +
                                            cast_column(ident(key.name), key.sort, oid.sort) + ")");
              return;
            }
            bool ok = is_key(s, k.to.relation, k.to.attrs);
            if (ok) {
              unique_line(k.to.relation, k.to.attrs);
              foreign_key(k.from, k.to);
            }
            bool back_ok = !k.bidirectional;
            if (k.bidirectional && is_key(s, k.from.relation, k.from.attrs)) {
              unique_line(k.from.relation, k.from.attrs);
              foreign_key(k.to, k.from);
              back_ok = true;
            }
            if (!ok || !back_ok) {
              unsupported(c, "referenced columns are not a key");
              assertions.push_back(to_string(c));
            }
          } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn>) {
            std::vector<std::string> vs;
            for (const auto& v : k.values) vs.push_back(sql_value(v));
            table_lines[k.relation].push_back("CHECK (" + ident(k.attr) + " IS NULL OR " + ident(k.attr) +
                                              (std::is_same_v<T, DomainIn> ? " IN (" : " NOT IN (") + comma(vs) +
                                              "))");
          } else if constexpr (std::is_same_v<T, NotNull>) {
            not_null[k.relation].insert(k.attr);
          } else {
            unsupported(c, "needs a general assertion");
            assertions.push_back(to_string(c));
          }
        },
        c);
  }

  out << "CREATE SCHEMA " << schema << ";\n\n";
  for (const auto& r : s.relations) {
    std::vector<std::string> lines;
    std::set<std::string> required_cols;
    for (const auto& a : r.attributes) {
      const bool required = !a.nullable || not_null[r.name].count(a.name);
      if (required) required_cols.insert(a.name);
      std::string line = ident(a.name) + " " + kText + (required ? " NOT NULL" : "");
      if (a.enum_domain) {
        std::vector<std::string> vs;
        for (const auto& v : *a.enum_domain) vs.push_back(sql_value(v));
        line += " CHECK (" + ident(a.name) + " IN (" + comma(vs) + "))";
      }
      if (a.sort.is_oid()) line += " CHECK (" + ident(a.name) + " LIKE " + literal(a.sort.tag + ":%") + ")";
      lines.push_back(line);
    }
    // Without a declared key, set semantics make the whole row one.
    auto ks = keys[r.name];
    if (ks.empty()) ks.push_back(r.attribute_names());
    bool have_primary = false;
    for (const auto& k : ks) {
      const bool primary = !have_primary && std::all_of(k.begin(), k.end(), [&](const std::string& a) {
        return required_cols.count(a) > 0;
      });
      have_primary = have_primary || primary;
      lines.push_back((primary ? "PRIMARY KEY (" : "UNIQUE (") + comma(idents(k)) + ")");
    }
    for (const auto& l : table_lines[r.name]) lines.push_back(l);
    out << "CREATE TABLE " << table(schema, r.name) << " (\n";
    for (std::size_t i = 0; i < lines.size(); ++i) out << "  " << lines[i] << (i + 1 < lines.size() ? ",\n" : "\n");
    out << ");\n\n";
  }
  for (const auto& fk : foreign_keys) out << fk << "\n";
  if (!foreign_keys.empty()) out << "\n";
  if (!assertions.empty()) {
    out << "-- Assertions without a portable declaration; enforced by the commit checks in triggers.sql.\n";
    for (const auto& a : assertions) out << "-- ASSERTION " << a << "\n";
  }
  ddl.text = out.str();
  return ddl;
}

std::vector<TriggerSpec> trigger_program(const CompiledTransform& t) {
  std::vector<TriggerSpec> out;
  auto side = [&](Side sd, const Schema& here, const Schema& there, const Mapping& views) {
    for (const auto& r : here.relations) {
      std::vector<TriggerAction> actions;
      for (const auto& o : there.relations) {
        const Expr& v = views.at(o.name);
        const auto refs = v.relations();
        if (std::find(refs.begin(), refs.end(), r.name) != refs.end()) actions.push_back({o.name, v});
      }
      if (actions.empty()) continue;
      for (auto ev : {UpdateKind::Insert, UpdateKind::Delete}) out.push_back({sd, r.name, ev, actions});
    }
  };
  side(Side::Source, t.source, t.target, t.fwd);
  side(Side::Target, t.target, t.source, t.bwd);
  return out;
}

const char* schema_of(Side s) { return s == Side::Source ? kSourceSchema : kTargetSchema; }

}  // namespace

std::string TriggerSpec::name() const {
  return std::string(schema_of(side)) + "_" + table + (event == UpdateKind::Insert ? "_after_insert" : "_after_delete");
}

const std::string& SqlBundle::file(const std::string& name) const {
  for (const auto& [n, text] : files) {
    if (n == name) return text;
  }
  throw Error(Errc::UnknownRelation, "no file " + name + " in bundle");
}

std::string sql_query(const Expr& e, const Schema& schema, const std::string& sql_schema) {
  return SqlWriter(schema, sql_schema).query(e);
}

SqlBundle emit_sql(const CompiledTransform& t, const EmitOptions& options) {
  SqlBundle b;
  auto s_ddl = schema_ddl(t.source, kSourceSchema, options);
  auto t_ddl = schema_ddl(t.target, kTargetSchema, options);
  b.unsupported = s_ddl.unsupported;
  b.unsupported.insert(b.unsupported.end(), t_ddl.unsupported.begin(), t_ddl.unsupported.end());
  b.triggers = trigger_program(t);

  std::ostringstream mat;
  mat << "-- Fills the target tables from the source.\nSTART TRANSACTION;\nCREATE SCHEMA tgt_stage;\n";
  for (const auto& r : t.target.relations) {
    mat << "CREATE TABLE " << table("tgt_stage", r.name) << " AS\n  "
        << sql_query(t.fwd.at(r.name), t.source, kSourceSchema) << "\nWITH DATA;\n";
    mat << "INSERT INTO " << table(kTargetSchema, r.name) << " SELECT * FROM " << table("tgt_stage", r.name) << ";\n";
  }
  mat << "DROP SCHEMA tgt_stage CASCADE;\nCOMMIT;\n";

  std::ostringstream trg;
  trg << "-- Loop guard: triggers fired while depth > 0 do nothing.\n"
      << "CREATE TABLE lossless_guard (depth INTEGER NOT NULL);\nINSERT INTO lossless_guard VALUES (0);\n\n";
  for (const auto& spec : b.triggers) {
    const Schema& here = spec.side == Side::Source ? t.source : t.target;
    const char* other = spec.side == Side::Source ? kTargetSchema : kSourceSchema;
    trg << "CREATE TRIGGER " << ident(spec.name()) << "\nAFTER "
        << (spec.event == UpdateKind::Insert ? "INSERT" : "DELETE") << " ON "
        << table(schema_of(spec.side), spec.table) << "\nFOR EACH STATEMENT\n"
        << "WHEN ((SELECT depth FROM lossless_guard) = 0)\nBEGIN ATOMIC\n"
        << "  UPDATE lossless_guard SET depth = depth + 1;\n";
    for (const auto& a : spec.actions) {
      trg << "  DELETE FROM " << table(other, a.relation) << ";\n";
      trg << "  INSERT INTO " << table(other, a.relation) << "\n    "
          << sql_query(a.view, here, schema_of(spec.side)) << ";\n";
    }
    trg << "  UPDATE lossless_guard SET depth = depth - 1;\nEND;\n\n";
  }
  trg << "-- Commit checks: every view below must be empty before COMMIT.\n";
  trg << "-- A non-empty drift view means the update has no exact counterpart on the other side.\n";
  for (const auto& r : t.target.relations) {
    const std::string v = sql_query(t.fwd.at(r.name), t.source, kSourceSchema);
    const std::string stored = "SELECT * FROM " + table(kTargetSchema, r.name);
    trg << "CREATE VIEW " << table(kTargetSchema, "drift_" + r.name) << " AS\n  ((" << v << ") EXCEPT (" << stored
        << "))\n  UNION\n  ((" << stored << ") EXCEPT (" << v << "));\n";
  }
  for (const auto& r : t.source.relations) {
    const std::string v = sql_query(t.bwd.at(r.name), t.target, kTargetSchema);
    const std::string stored = "SELECT * FROM " + table(kSourceSchema, r.name);
    trg << "CREATE VIEW " << table(kSourceSchema, "drift_" + r.name) << " AS\n  ((" << v << ") EXCEPT (" << stored
        << "))\n  UNION\n  ((" << stored << ") EXCEPT (" << v << "));\n";
  }

  std::ostringstream readme;
  readme << "Generated SQL bundle\n====================\n\n"
         << "schema_s.sql     source tables (SQL schema src)\n"
         << "schema_t.sql     target tables (SQL schema tgt)\n"
         << "materialize.sql  fills tgt from src with CREATE TABLE ... AS SELECT\n"
         << "triggers.sql     AFTER INSERT/DELETE triggers on both sides, loop guard, drift views\n\n"
         << "Apply in the order schema_s.sql, schema_t.sql, materialize.sql, triggers.sql.\n\n"
         << "Reconstructed choices:\n"
         << "- Every column is VARCHAR(255); an OID is stored as TAG:key, derived from the natural key.\n"
         << "- A trigger rebuilds each opposite-side table whose view reads the updated table.\n"
         << "- The guard table lossless_guard holds a depth counter; a trigger entered at depth > 0 does nothing,\n"
         << "  so one update propagates exactly once.\n"
         << "- Updates must run under SERIALIZABLE isolation, one writer at a time.\n"
         << "- UPDATE is expressed as DELETE followed by INSERT in one transaction.\n"
         << "- Before COMMIT every drift_* view must be empty; otherwise roll back.\n\n"
         << "Constraints kept as documented assertions:\n";
  if (b.unsupported.empty()) readme << "(none)\n";
  for (const auto& u : b.unsupported) readme << "- " << u << "\n";

  b.files = {{"schema_s.sql", s_ddl.text},
             {"schema_t.sql", t_ddl.text},
             {"materialize.sql", mat.str()},
             {"triggers.sql", trg.str()},
             {"README", readme.str()}};
  return b;
}

namespace {

struct Replay {
  const SqlBundle& bundle;
  const CompiledTransform& t;
  Instance s, tgt;
  int depth = 0;
  std::size_t suppressed = 0;

  Instance& db(Side sd) { return sd == Side::Source ? s : tgt; }

  void fire(Side sd, const std::string& rel, UpdateKind ev) {
    for (const auto& spec : bundle.triggers) {
      if (spec.side != sd || spec.table != rel || spec.event != ev) continue;
      if (depth > 0) {
        ++suppressed;
        continue;
      }
      ++depth;
      const Side other = sd == Side::Source ? Side::Target : Side::Source;
      const Schema& here = sd == Side::Source ? t.source : t.target;
      for (const auto& a : spec.actions) {
        db(other)[a.relation].clear();
        fire(other, a.relation, UpdateKind::Delete);
        db(other)[a.relation] = evaluate(a.view, db(sd), here).rows;
        fire(other, a.relation, UpdateKind::Insert);
      }
      --depth;
    }
  }

  bool commit_ok(Side sd) {
    if (!conforms(t.source, s) || first_violation(t.source, s) >= 0) return false;
    if (!conforms(t.target, tgt) || first_violation(t.target, tgt) >= 0) return false;
    // Drift views must be empty on the side that was not written.
    return sd == Side::Source ? apply_mapping(t.bwd, tgt, t.target) == s : apply_mapping(t.fwd, s, t.source) == tgt;
  }
};

}  // namespace

ReplayResult replay_bundle(const SqlBundle& bundle, const CompiledTransform& t, const Instance& source,
                           const std::vector<Transaction>& script) {
  Replay r{bundle, t, Instance::empty_for(t.source), Instance::empty_for(t.target)};
  for (const auto& [name, rows] : source.relations) r.s[name] = rows;
  for (const auto& rel : t.target.relations) {
    r.tgt[rel.name] = evaluate(t.fwd.at(rel.name), r.s, t.source).rows;
  }
  ReplayResult out;
  for (const auto& tx : script) {
    const Instance s0 = r.s, t0 = r.tgt;
    for (const auto& op : tx.ops) {
      auto& rows = r.db(tx.side)[op.relation];
      if (op.kind == UpdateKind::Insert) {
        rows.insert(op.tuple);
      } else {
        rows.erase(op.tuple);
      }
      r.fire(tx.side, op.relation, op.kind);
    }
    const bool ok = r.commit_ok(tx.side);
    if (!ok) {
      r.s = s0;
      r.tgt = t0;
    }
    out.accepted.push_back(ok);
  }
  out.s_instance = std::move(r.s);
  out.t_instance = std::move(r.tgt);
  out.suppressed_firings = r.suppressed;
  return out;
}

}  // namespace lossless
