#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quon/numerics.hpp"
#include "quon/quon_calculus.hpp"
#include "quon/qudit_core.hpp"
#include "quon/spider_engine.hpp"
#include "quon/tensor.hpp"

namespace quon {

/// Diagram expression of the .quon language.
struct Expr {
    enum class Kind { Id, Cap, Cup, BSpider, WSpider, Gate, Ghz, Max, BellPlus, BellMinus, Ref, Seq, Par };
    Kind kind = Kind::Id;
    int a = 0;  // wire count, input legs or party count
    int b = 0;  // output legs
    GateName gate = GateName::X;
    std::string name;
    std::vector<Expr> parts;  // Seq: bottom to top; Par: left to right

    bool operator==(const Expr &) const = default;
};

/// "d^(p/q)" or a complex literal.
struct ScalarSpec {
    bool power = true;
    int num = 0;
    int den = 1;
    cplx value = 0.0;

    cplx eval(int d) const;
    bool operator==(const ScalarSpec &) const = default;
};

struct Statement {
    enum class Kind { Dim, Let, LetBraid, Check, Eval };
    Kind kind = Kind::Eval;
    int line = 0;  // source position, not part of equality
    int dim = 0;
    std::string name;
    Expr lhs;
    Expr rhs;
    std::optional<ScalarSpec> scalar;
    std::vector<StrandGen> word;  // charges kept unreduced

    bool operator==(const Statement &o) const {
        return kind == o.kind && dim == o.dim && name == o.name && lhs == o.lhs && rhs == o.rhs &&
               scalar == o.scalar && word == o.word;
    }
};

struct Document {
    std::vector<Statement> statements;

    /// Declared dimension, if any.
    std::optional<int> dim() const;
    bool operator==(const Document &) const = default;
};

/// One statement per line; '#' starts a comment. Throws ParseError.
Document parse_document(const std::string &text);

std::string render(const Expr &e);
std::string render(const ScalarSpec &s);
std::string render(const Statement &s);
std::string render(const Document &doc);

/// Lowers expressions of a parsed document to spider diagrams.
class DocumentEvaluator {
   public:
    /// Uses the document's dimension, else `fallback_dim`; throws InvalidDimension if neither.
    DocumentEvaluator(const Document &doc, std::optional<int> fallback_dim = std::nullopt);

    int dim() const {
        return d_;
    }
    SpiderDiagram lower(const Expr &e) const;

   private:
    int d_;
    std::map<std::string, const Statement *> defs_;
    mutable std::map<std::string, SpiderDiagram> cache_;
};

struct CheckOutcome {
    std::string name;
    int line;
    bool pass;
    bool error;
    double max_error;
    std::optional<cplx> scalar;
    std::string message;
};

/// Runs every check statement; lhs must equal scalar * rhs entrywise.
std::vector<CheckOutcome> run_document_checks(const Document &doc, Tolerance tol,
                                              std::optional<int> fallback_dim = std::nullopt);

}  // namespace quon
