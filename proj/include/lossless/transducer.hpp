#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lossless/error.hpp"
#include "lossless/eval.hpp"
#include "lossless/patterns.hpp"

namespace lossless {

enum class Side { Source, Target };
enum class UpdateKind { Insert, Delete };

const char* side_name(Side s);

struct UpdateOp {
  Side side = Side::Source;
  UpdateKind kind = UpdateKind::Insert;
  std::string relation;
  Tuple tuple;
};

struct Transaction {
  Side side = Side::Source;
  std::vector<UpdateOp> ops;
  /// From `commit expect accept|reject` in scripts; informational only.
  std::optional<bool> expect_accept;
};

struct TwinState {
  std::shared_ptr<const CompiledTransform> transform;
  Instance s_instance;
  Instance t_instance;
  std::size_t epoch = 0;

  bool operator==(const TwinState& o) const {
    return s_instance == o.s_instance && t_instance == o.t_instance && epoch == o.epoch;
  }
};

/// Starts from a legal source instance; the target side is fwd of it.
/// ConstraintViolation if either side is illegal.
TwinState make_twin(const CompiledTransform& t, const Instance& source);

struct Rejection {
  Errc code = Errc::ConstraintViolation;  // ConstraintViolation or NotRepresentable
  Side side = Side::Source;               // where the problem shows up
  std::string constraint;
  std::string witness;

  std::string str() const;
};

struct TxResult {
  TwinState state;  // unchanged on rejection
  std::optional<Rejection> rejection;

  bool accepted() const { return !rejection; }
};

/// Malformed transactions (empty, mixed sides, unknown relation, bad arity or
/// sort) throw; everything else is accepted or rejected.
TxResult apply_transaction(const TwinState& state, const Transaction& tx);

/// `begin SOURCE|TARGET; insert R(v, ...); delete R(v, ...); commit;`
/// Relations and tuples are checked against the side's schema.
std::vector<Transaction> parse_script(std::string_view text, const Schema& source, const Schema& target);

std::string to_string(const Transaction& tx);

/// Rewrites a query over `from` into one over the other side.
Expr translate_query(const Expr& query, const CompiledTransform& t, Side from);

// SQL generation.

struct TriggerAction {
  std::string relation;  // opposite-side table that is rebuilt
  Expr view;             // its defining view
};

struct TriggerSpec {
  Side side = Side::Source;
  std::string table;
  UpdateKind event = UpdateKind::Insert;
  std::vector<TriggerAction> actions;

  std::string name() const;
};

struct SqlBundle {
  std::vector<std::pair<std::string, std::string>> files;  // file name, contents
  std::vector<TriggerSpec> triggers;
  std::vector<std::string> unsupported;  // constraints kept only as documented assertions

  const std::string& file(const std::string& name) const;
};

struct EmitOptions {
  /// Throw UnsupportedConstraintForDialect instead of listing.
  bool strict = false;
};

SqlBundle emit_sql(const CompiledTransform& t, const EmitOptions& options = {});

std::string sql_query(const Expr& e, const Schema& schema, const std::string& sql_schema);

struct ReplayResult {
  std::vector<bool> accepted;
  Instance s_instance;
  Instance t_instance;
  std::size_t suppressed_firings = 0;  // trigger entries stopped by the guard
};

/// Runs the bundle's trigger program in memory.
ReplayResult replay_bundle(const SqlBundle& bundle, const CompiledTransform& t, const Instance& source,
                           const std::vector<Transaction>& script);

}  // namespace lossless
