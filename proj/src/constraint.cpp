#include "sparqlstat/constraint.hpp"

#include <utility>

namespace sparqlstat {

std::set<std::string> AtomicConstraint::variables() const {
    std::set<std::string> out;
    if (kind == AtomKind::Opaque) {
        out.insert(opaque_vars.begin(), opaque_vars.end());
        return out;
    }
    out.insert(var);
    if (kind == AtomKind::EqVar) out.insert(var2);
    return out;
}

std::string AtomicConstraint::key() const {
    std::string k = negated ? "!" : "";
    switch (kind) {
        case AtomKind::Bound: return k + "bound(" + var + ")";
        case AtomKind::EqConst: return k + "eq(" + var + "," + constant.key() + ")";
        case AtomKind::EqVar: {
            // symmetric: ?x = ?y and ?y = ?x are the same atom
            const std::string& a = var <= var2 ? var : var2;
            const std::string& b = var <= var2 ? var2 : var;
            return k + "eqv(" + a + "," + b + ")";
        }
        case AtomKind::LtConst: return k + "lt(" + var + "," + constant.key() + ")";
        case AtomKind::LeqConst: return k + "leq(" + var + "," + constant.key() + ")";
        case AtomKind::GtConst: return k + "gt(" + var + "," + constant.key() + ")";
        case AtomKind::GeqConst: return k + "geq(" + var + "," + constant.key() + ")";
        case AtomKind::IsIri: return k + "isIRI(" + var + ")";
        case AtomKind::IsBlank: return k + "isBlank(" + var + ")";
        case AtomKind::IsLiteral: return k + "isLiteral(" + var + ")";
        case AtomKind::StrEqConst: return k + "streq(" + var + "," + constant.key() + ")";
        case AtomKind::LangEqConst: return k + "langeq(" + var + "," + text + ")";
        case AtomKind::LangMatches: return k + "langMatches(" + var + "," + text + ")";
        case AtomKind::RegexStr: return k + "regexStr(" + var + "," + text + ")";
        case AtomKind::RegexVar: return k + "regexVar(" + var + "," + text + ")";
        case AtomKind::Opaque: return k + "opaque(" + text + ")";
    }
    return k;
}

ConstraintPtr Constraint::atomic(AtomicConstraint a) {
    auto c = std::make_unique<Constraint>();
    c->kind = ConstraintKind::Atomic;
    c->atom = std::move(a);
    return c;
}

ConstraintPtr Constraint::conj(ConstraintPtr l, ConstraintPtr r) {
    auto c = std::make_unique<Constraint>();
    c->kind = ConstraintKind::And;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

ConstraintPtr Constraint::disj(ConstraintPtr l, ConstraintPtr r) {
    auto c = std::make_unique<Constraint>();
    c->kind = ConstraintKind::Or;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

ConstraintPtr Constraint::negate(ConstraintPtr inner) {
    auto c = std::make_unique<Constraint>();
    c->kind = ConstraintKind::Not;
    c->left = std::move(inner);
    return c;
}

ConstraintPtr Constraint::clone() const {
    auto c = std::make_unique<Constraint>();
    c->kind = kind;
    c->atom = atom;
    if (left) c->left = left->clone();
    if (right) c->right = right->clone();
    return c;
}

bool Constraint::equals(const Constraint& o) const {
    if (kind != o.kind) return false;
    if (kind == ConstraintKind::Atomic) return atom == o.atom;
    if (static_cast<bool>(left) != static_cast<bool>(o.left)) return false;
    if (static_cast<bool>(right) != static_cast<bool>(o.right)) return false;
    if (left && !left->equals(*o.left)) return false;
    if (right && !right->equals(*o.right)) return false;
    return true;
}

std::set<std::string> Constraint::variables() const {
    std::set<std::string> out;
    if (kind == ConstraintKind::Atomic) {
        auto vs = atom.variables();
        out.insert(vs.begin(), vs.end());
        return out;
    }
    if (left) {
        auto l = left->variables();
        out.insert(l.begin(), l.end());
    }
    if (right) {
        auto r = right->variables();
        out.insert(r.begin(), r.end());
    }
    return out;
}

bool Constraint::built_in_only() const {
    if (kind == ConstraintKind::Atomic) return atom.kind != AtomKind::Opaque;
    if (left && !left->built_in_only()) return false;
    if (right && !right->built_in_only()) return false;
    return true;
}

namespace {

ConstraintPtr nnf_rec(const Constraint& c, bool flip) {
    switch (c.kind) {
        case ConstraintKind::Atomic: {
            AtomicConstraint a = c.atom;
            if (flip) a.negated = !a.negated;
            return Constraint::atomic(std::move(a));
        }
        case ConstraintKind::Not:
            return nnf_rec(*c.left, !flip);
        case ConstraintKind::And: {
            auto l = nnf_rec(*c.left, flip);
            auto r = nnf_rec(*c.right, flip);
            return flip ? Constraint::disj(std::move(l), std::move(r))
                        : Constraint::conj(std::move(l), std::move(r));
        }
        case ConstraintKind::Or: {
            auto l = nnf_rec(*c.left, flip);
            auto r = nnf_rec(*c.right, flip);
            return flip ? Constraint::conj(std::move(l), std::move(r))
                        : Constraint::disj(std::move(l), std::move(r));
        }
    }
    return nullptr;
}

bool negated_bound_rec(const Constraint& c, bool flip) {
    switch (c.kind) {
        case ConstraintKind::Atomic:
            return c.atom.kind == AtomKind::Bound && (c.atom.negated != flip);
        case ConstraintKind::Not:
            return negated_bound_rec(*c.left, !flip);
        default:
            return (c.left && negated_bound_rec(*c.left, flip)) ||
                   (c.right && negated_bound_rec(*c.right, flip));
    }
}

}  // namespace

ConstraintPtr Constraint::to_nnf() const { return nnf_rec(*this, false); }

bool Constraint::contains_negated_bound() const {
    return negated_bound_rec(*this, false);
}

std::string Constraint::key() const {
    switch (kind) {
        case ConstraintKind::Atomic: return atom.key();
        case ConstraintKind::And: return "(" + left->key() + "&&" + right->key() + ")";
        case ConstraintKind::Or: return "(" + left->key() + "||" + right->key() + ")";
        case ConstraintKind::Not: return "!(" + left->key() + ")";
    }
    return "";
}

}  // namespace sparqlstat
