#include "lossless/transducer.hpp"

#include <algorithm>
#include <stdexcept>

#include "lossless/error.hpp"
#include "lossless/parse.hpp"
#include "lossless/print.hpp"
#include "lossless/rewrite.hpp"

namespace lossless {

const char* side_name(Side s) { return s == Side::Source ? "SOURCE" : "TARGET"; }

std::string Rejection::str() const {
  std::string out = std::string(errc_name(code)) + " on " + side_name(side) + ": " + constraint;
  if (!witness.empty()) out += " (witness " + witness + ")";
  return out;
}

namespace {

std::vector<std::size_t> positions(const RelationSignature& r, const std::vector<std::string>& attrs) {
  std::vector<std::size_t> out;
  for (const auto& a : attrs) out.push_back(*r.index_of(a));
  return out;
}

Tuple pick(const Tuple& t, const std::vector<std::size_t>& idx) {
  Tuple out;
  for (auto i : idx) out.push_back(t[i]);
  return out;
}

std::string fd_witness(const std::string& rel, const Rows& rows, const std::vector<std::size_t>& lhs,
                       const std::vector<std::size_t>& rhs) {
  for (auto a = rows.begin(); a != rows.end(); ++a) {
    for (auto b = std::next(a); b != rows.end(); ++b) {
      if (pick(*a, lhs) == pick(*b, lhs) && pick(*a, rhs) != pick(*b, rhs)) {
        return rel + tuple_to_string(*a) + " and " + rel + tuple_to_string(*b);
      }
    }
  }
  return "";
}

std::string first_missing(const Table& l, const Table& r, const std::string& what) {
  for (const auto& t : l.rows) {
    if (!r.rows.count(t)) return what + tuple_to_string(t);
  }
  return "";
}

// A concrete tuple showing why `c` fails on `inst`.
std::string witness(const Schema& s, const Instance& inst, const Constraint& c) {
  return std::visit(
      [&](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDep>) {
          const auto& r = s.at(k.relation);
          return fd_witness(r.name, inst.at(r.name), positions(r, k.lhs), positions(r, k.rhs));
        } else if constexpr (std::is_same_v<T, MultivaluedDep>) {
          return "";
        } else if constexpr (std::is_same_v<T, Inclusion>) {
          const auto& fr = s.at(k.from.relation);
          const auto& tr = s.at(k.to.relation);
          if (is_key_correspondence(k, s)) {
            auto a = positions(fr, k.from.attrs), b = positions(fr, k.to.attrs);
            auto w = fd_witness(fr.name, inst.at(fr.name), a, b);
            return w.empty() ? fd_witness(fr.name, inst.at(fr.name), b, a) : w;
          }
          auto scan = [&](const RelationSignature& x, const std::vector<std::string>& xa, const RelationSignature& y,
                          const std::vector<std::string>& ya) -> std::string {
            Rows target;
            for (const auto& t : inst.at(y.name)) target.insert(pick(t, positions(y, ya)));
            for (const auto& t : inst.at(x.name)) {
              if (!target.count(pick(t, positions(x, xa)))) return x.name + tuple_to_string(t);
            }
            return "";
          };
          auto w = scan(fr, k.from.attrs, tr, k.to.attrs);
          if (w.empty() && k.bidirectional) w = scan(tr, k.to.attrs, fr, k.from.attrs);
          return w;
        } else if constexpr (std::is_same_v<T, DomainIn> || std::is_same_v<T, DomainNotIn>) {
          const auto& r = s.at(k.relation);
          auto i = *r.index_of(k.attr);
          for (const auto& t : inst.at(r.name)) {
            if (t[i].is_null()) continue;
            bool member = std::find(k.values.begin(), k.values.end(), t[i]) != k.values.end();
            if (member != std::is_same_v<T, DomainIn>) return r.name + tuple_to_string(t);
          }
          return "";
        } else if constexpr (std::is_same_v<T, NotNull>) {
          const auto& r = s.at(k.relation);
          auto i = *r.index_of(k.attr);
          for (const auto& t : inst.at(r.name)) {
            if (t[i].is_null()) return r.name + tuple_to_string(t);
          }
          return "";
        } else if constexpr (std::is_same_v<T, AlgebraicEmpty>) {
          auto rows = evaluate(k.expr, inst, s).rows;
          return rows.empty() ? "" : tuple_to_string(*rows.begin());
        } else if constexpr (std::is_same_v<T, AlgebraicDisjoint>) {
          auto l = evaluate(k.lhs, inst, s), r = evaluate(k.rhs, inst, s);
          for (const auto& t : l.rows) {
            if (r.rows.count(t)) return tuple_to_string(t);
          }
          return "";
        } else if constexpr (std::is_same_v<T, AlgebraicSubset>) {
          return first_missing(evaluate(k.lhs, inst, s), evaluate(k.rhs, inst, s), "");
        } else {
          auto l = evaluate(k.lhs, inst, s), r = evaluate(k.rhs, inst, s);
          auto w = first_missing(l, r, "");
          return w.empty() ? first_missing(r, l, "") : w;
        }
      },
      c);
}

std::optional<Rejection> legality(const Schema& s, const Instance& inst, Side side) {
  for (const auto& r : s.relations) {
    for (const auto& t : inst.at(r.name)) {
      for (std::size_t i = 0; i < r.arity(); ++i) {
        const auto& a = r.attributes[i];
        if ((t[i].is_null() && !a.nullable) || !t[i].fits(a.sort)) {
          return Rejection{Errc::ConstraintViolation, side, r.name + "." + a.name + " " + a.sort.str() +
                                                                (a.nullable ? " NULLABLE" : ""),
                           r.name + tuple_to_string(t)};
        }
      }
    }
  }
  int v = first_violation(s, inst);
  if (v < 0) return std::nullopt;
  const auto& c = s.constraints[static_cast<std::size_t>(v)];
  return Rejection{Errc::ConstraintViolation, side, to_string(c), witness(s, inst, c)};
}

std::string first_difference(const Instance& a, const Instance& b, const Schema& s) {
  for (const auto& r : s.relations) {
    for (const auto& t : a.at(r.name)) {
      if (!b.at(r.name).count(t)) return r.name + tuple_to_string(t);
    }
    for (const auto& t : b.at(r.name)) {
      if (!a.at(r.name).count(t)) return r.name + tuple_to_string(t);
    }
  }
  return "";
}

void check_op(const Schema& s, const UpdateOp& op) {
  const auto& r = s.at(op.relation);
  if (op.tuple.size() != r.arity()) {
    throw Error(Errc::HeaderMismatch, op.relation + " expects " + std::to_string(r.arity()) + " values");
  }
  for (std::size_t i = 0; i < r.arity(); ++i) {
    if (!op.tuple[i].fits(r.attributes[i].sort)) {
      throw Error(Errc::SortMismatch, op.relation + "." + r.attributes[i].name + ": " + op.tuple[i].str());
    }
  }
}

// Guards against a propagation starting while another one runs.
thread_local int propagation_depth = 0;

struct PropagationGuard {
  PropagationGuard() {
    if (propagation_depth++ > 0) throw std::logic_error("re-entrant propagation");
  }
  ~PropagationGuard() { --propagation_depth; }
};

}  // namespace

TwinState make_twin(const CompiledTransform& t, const Instance& source) {
  TwinState st;
  st.transform = std::make_shared<const CompiledTransform>(t);
  st.s_instance = Instance::empty_for(t.source);
  for (const auto& [name, rows] : source.relations) {
    if (!t.source.has(name)) throw Error(Errc::UnknownRelation, name);
    st.s_instance[name] = rows;
  }
  if (auto r = legality(t.source, st.s_instance, Side::Source)) throw Error(Errc::ConstraintViolation, r->str());
  st.t_instance = apply_mapping(t.fwd, st.s_instance, t.source);
  if (auto r = legality(t.target, st.t_instance, Side::Target)) throw Error(Errc::ConstraintViolation, r->str());
  return st;
}

TxResult apply_transaction(const TwinState& state, const Transaction& tx) {
  if (tx.ops.empty()) throw Error(Errc::InvalidSchema, "empty transaction");
  const CompiledTransform& t = *state.transform;
  const bool src = tx.side == Side::Source;
  const Schema& here = src ? t.source : t.target;
  const Schema& there = src ? t.target : t.source;
  for (const auto& op : tx.ops) {
    if (op.side != tx.side) throw Error(Errc::InvalidSchema, "transaction mixes SOURCE and TARGET updates");
    check_op(here, op);
  }

  PropagationGuard guard;
  Instance updated = src ? state.s_instance : state.t_instance;
  for (const auto& op : tx.ops) {
    if (op.kind == UpdateKind::Insert) {
      updated[op.relation].insert(op.tuple);
    } else {
      updated[op.relation].erase(op.tuple);
    }
  }
  TxResult out{state, std::nullopt};
  if ((out.rejection = legality(here, updated, tx.side))) return out;

  Instance other = apply_mapping(src ? t.fwd : t.bwd, updated, here);
  const Side other_side = src ? Side::Target : Side::Source;
  if ((out.rejection = legality(there, other, other_side))) return out;

  Instance back = apply_mapping(src ? t.bwd : t.fwd, other, there);
  if (!(back == updated)) {
    out.rejection = Rejection{Errc::NotRepresentable, tx.side, "update has no exact counterpart on the " +
                                                                   std::string(side_name(other_side)) + " side",
                              first_difference(updated, back, here)};
    return out;
  }

  out.state.s_instance = src ? std::move(updated) : std::move(other);
  out.state.t_instance = src ? std::move(other) : std::move(updated);
  out.state.epoch = state.epoch + 1;
  return out;
}

std::vector<Transaction> parse_script(std::string_view text, const Schema& source, const Schema& target) {
  TokenCursor cur(text);
  std::vector<Transaction> out;
  while (cur.skip_separators()) {
    cur.expect_keyword("begin");
    Transaction tx;
    if (cur.accept_keyword("source")) {
      tx.side = Side::Source;
    } else if (cur.accept_keyword("target")) {
      tx.side = Side::Target;
    } else {
      cur.fail("expected SOURCE or TARGET");
    }
    const Schema& s = tx.side == Side::Source ? source : target;
    cur.end_statement();
    while (true) {
      if (!cur.skip_separators()) cur.fail("missing commit");
      if (cur.accept_keyword("commit")) break;
      UpdateOp op;
      op.side = tx.side;
      if (cur.accept_keyword("insert")) {
        op.kind = UpdateKind::Insert;
      } else if (cur.accept_keyword("delete")) {
        op.kind = UpdateKind::Delete;
      } else {
        cur.fail("expected insert, delete or commit");
      }
      const auto head = cur.peek();
      op.relation = cur.expect_ident("relation name");
      const auto* sig = s.find(op.relation);
      if (!sig) cur.fail_at(head, "unknown " + std::string(side_name(tx.side)) + " relation " + op.relation);
      op.tuple = parse_tuple(cur, *sig, head);
      tx.ops.push_back(std::move(op));
      cur.end_statement();
    }
    if (cur.accept_keyword("expect")) {
      if (cur.accept_keyword("accept")) {
        tx.expect_accept = true;
      } else if (cur.accept_keyword("reject")) {
        tx.expect_accept = false;
      } else {
        cur.fail("expected accept or reject");
      }
    }
    if (tx.ops.empty()) cur.fail("empty transaction");
    cur.end_statement();
    out.push_back(std::move(tx));
  }
  return out;
}

std::string to_string(const Transaction& tx) {
  std::string out = std::string("begin ") + side_name(tx.side) + "; ";
  for (const auto& op : tx.ops) {
    out += (op.kind == UpdateKind::Insert ? "insert " : "delete ") + op.relation + tuple_to_string(op.tuple) + "; ";
  }
  return out + "commit";
}

Expr translate_query(const Expr& query, const CompiledTransform& t, Side from) {
  const Schema& here = from == Side::Source ? t.source : t.target;
  for (const auto& r : query.relations()) {
    if (!here.has(r)) throw Error(Errc::UnknownRelation, r + " is not a " + side_name(from) + " relation");
  }
  // A target query reads the target views, which are the fwd mapping.
  return unfold_query(query, from == Side::Source ? t.bwd : t.fwd);
}

}  // namespace lossless
