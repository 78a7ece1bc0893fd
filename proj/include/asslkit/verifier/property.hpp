#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asslkit/runtime/model.hpp"
#include "asslkit/runtime/scenario.hpp"

namespace asslkit::verifier {

using runtime::Value;

struct Atom {
    enum class Kind { Fluent, Event, Metric, Quiescent, True, False };
    Kind kind = Kind::True;
    std::size_t tier = 0;
    std::size_t index = 0;                    // fluent, event or metric
    std::optional<syntax::CompareOp> op;      // Metric; absent means a boolean metric is true
    Value literal{false};
    bool operator==(const Atom&) const = default;
};

/// Propositional formula over one state.
struct StateFormula {
    enum class Kind { Atom, Not, And, Or, Implies };
    Kind kind = Kind::Atom;
    Atom atom;
    std::vector<StateFormula> operands;
    bool operator==(const StateFormula&) const = default;
};

/// One of the supported temporal shapes over state formulas p and q.
struct Property {
    enum class Shape { Always, Eventually, Response, NextResponse, Until };
    Shape shape = Shape::Always;
    StateFormula p;
    StateFormula q;  // Response, NextResponse, Until
    std::string text;
};

class MalformedProperty : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnresolvedAtom : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view shape_name(Property::Shape s);

/// Parses one property. Operators: G F X U (prefix or infix U), `!`/`not`, `&`/`and`,
/// `|`/`or`, `->`/`implies`. Atoms: `fluent N`, `event N`, `metric N [op literal]`,
/// `quiescent`, `true`, `false`. Names may be `tier.name` or unique bare names.
/// Accepted shapes: G p | F p | G(p -> F q) | G(p -> X q) | p U q.
Property parse_property(const runtime::Model& model, std::string_view text);

/// A property file: `env <stimulus>` lines, properties, `#` comments. Without env
/// lines the environment injects every INJECTABLE event.
struct PropertyFile {
    std::vector<runtime::Stimulus> env;
    std::vector<Property> properties;
};

/// Errors are rethrown with a "line N: " prefix, keeping their type.
PropertyFile parse_property_file(const runtime::Model& model, std::string_view text);
PropertyFile load_property_file(const runtime::Model& model, const std::string& path);

std::vector<runtime::Stimulus> default_env(const runtime::Model& model);

/// Literals compared against each numeric metric, for threshold abstraction.
void collect_thresholds(const StateFormula& f, std::vector<std::vector<std::vector<Value>>>& out);

}  // namespace asslkit::verifier
