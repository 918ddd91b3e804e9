#include "lossless/algebra.hpp"

#include <algorithm>

#include "lossless/error.hpp"

namespace lossless {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::UnknownRelation: return "UnknownRelation";
    case Errc::UnknownAttribute: return "UnknownAttribute";
    case Errc::HeaderClash: return "HeaderClash";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::SortMismatch: return "SortMismatch";
    case Errc::DomainMissing: return "DomainMissing";
    case Errc::MissingView: return "MissingView";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidSchema: return "InvalidSchema";
    case Errc::NoJustifyingDependency: return "NoJustifyingDependency";
    case Errc::AttributePartitionInvalid: return "AttributePartitionInvalid";
    case Errc::UnsupportedCondition: return "UnsupportedCondition";
    case Errc::UnsupportedConstraint: return "UnsupportedConstraint";
    case Errc::AttributeNotNullable: return "AttributeNotNullable";
    case Errc::MissingKey: return "MissingKey";
    case Errc::DanglingForeignKey: return "DanglingForeignKey";
    case Errc::NameClash: return "NameClash";
    case Errc::NotInCarmForm: return "NotInCarmForm";
    case Errc::StepFailed: return "StepFailed";
    case Errc::UnsupportedConstraintForDialect: return "UnsupportedConstraintForDialect";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::NotRepresentable: return "NotRepresentable";
  }
  return "Error";
}

Predicate Predicate::conjunction(std::vector<Predicate> terms) {
  std::vector<Predicate> flat;
  for (auto& t : terms) {
    if (t.kind == Kind::And) {
      flat.insert(flat.end(), t.terms.begin(), t.terms.end());
    } else if (t.kind != Kind::True) {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return always();
  if (flat.size() == 1) return flat.front();
  Predicate p;
  p.kind = Kind::And;
  p.terms = std::move(flat);
  return p;
}

std::vector<std::string> Predicate::attributes() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& a) {
    if (!a.empty() && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  switch (kind) {
    case Kind::True:
    case Kind::False: break;
    case Kind::EqAttr: add(attr); add(other_attr); break;
    case Kind::And:
      for (const auto& t : terms) {
        for (const auto& a : t.attributes()) add(a);
      }
      break;
    default: add(attr);
  }
  return out;
}

std::optional<Predicate> Predicate::negated() const {
  switch (kind) {
    case Kind::True: return never();
    case Kind::False: return always();
    case Kind::EqConst: return ne_const(attr, constant);
    case Kind::NeConst: return eq_const(attr, constant);
    case Kind::IsNull: return is_not_null(attr);
    case Kind::IsNotNull: return is_null(attr);
    default: return std::nullopt;
  }
}

Expr Expr::relation(std::string name) {
  Expr e;
  e.kind_ = Kind::RelationRef;
  e.name_ = std::move(name);
  return e;
}

Expr Expr::project(std::vector<std::string> attrs, Expr input) {
  Expr e;
  e.kind_ = Kind::Project;
  e.attrs_ = std::move(attrs);
  e.children_ = std::make_shared<const std::vector<Expr>>(std::vector<Expr>{std::move(input)});
  return e;
}

Expr Expr::select(Predicate pred, Expr input) {
  Expr e;
  e.kind_ = Kind::Select;
  e.pred_ = std::move(pred);
  e.children_ = std::make_shared<const std::vector<Expr>>(std::vector<Expr>{std::move(input)});
  return e;
}

Expr Expr::rename(std::vector<RenameItem> items, Expr input) {
  Expr e;
  e.kind_ = Kind::Rename;
  e.renames_ = std::move(items);
  e.children_ = std::make_shared<const std::vector<Expr>>(std::vector<Expr>{std::move(input)});
  return e;
}

Expr Expr::pad(std::vector<PadItem> items, Expr input) {
  Expr e;
  e.kind_ = Kind::Pad;
  e.pads_ = std::move(items);
  e.children_ = std::make_shared<const std::vector<Expr>>(std::vector<Expr>{std::move(input)});
  return e;
}

Expr Expr::product(Expr lhs, Expr rhs) { return make(Kind::Product, {std::move(lhs), std::move(rhs)}); }
Expr Expr::join(Expr lhs, Expr rhs) { return make(Kind::NaturalJoin, {std::move(lhs), std::move(rhs)}); }
Expr Expr::outer_join(std::vector<Expr> inputs) { return make(Kind::OuterJoin, std::move(inputs)); }
Expr Expr::set_union(Expr lhs, Expr rhs) { return make(Kind::Union, {std::move(lhs), std::move(rhs)}); }
Expr Expr::intersect(Expr lhs, Expr rhs) { return make(Kind::Intersect, {std::move(lhs), std::move(rhs)}); }
Expr Expr::difference(Expr lhs, Expr rhs) { return make(Kind::Difference, {std::move(lhs), std::move(rhs)}); }

Expr Expr::make(Kind kind, std::vector<Expr> children) {
  Expr e;
  e.kind_ = kind;
  e.children_ = std::make_shared<const std::vector<Expr>>(std::move(children));
  return e;
}

Expr Expr::with_children(std::vector<Expr> children) const {
  Expr e = *this;
  e.children_ = std::make_shared<const std::vector<Expr>>(std::move(children));
  return e;
}

std::vector<std::string> Expr::relations() const {
  std::vector<std::string> out;
  auto visit = [&](auto&& self, const Expr& e) -> void {
    if (e.kind_ == Kind::RelationRef) {
      if (std::find(out.begin(), out.end(), e.name_) == out.end()) out.push_back(e.name_);
      return;
    }
    for (const auto& c : e.children()) self(self, c);
  };
  visit(visit, *this);
  return out;
}

bool Expr::operator==(const Expr& other) const {
  if (kind_ != other.kind_ || name_ != other.name_ || attrs_ != other.attrs_ || !(pred_ == other.pred_) ||
      renames_ != other.renames_ || pads_ != other.pads_)
    return false;
  if (children_ == other.children_) return true;
  return *children_ == *other.children_;
}

}  // namespace lossless
