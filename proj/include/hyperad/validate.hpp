#pragma once

#include <string>
#include <vector>

#include "hyperad/hypernet.hpp"

namespace hyperad {

struct Violation {
    /// One of: parent-consistency, parent-acyclicity, linearity(source),
    /// linearity(target), level-acyclicity, interface-coverage,
    /// box-exclusivity, dangling-reference.
    std::string clause;
    std::string detail;
};

/// Checks every hypernet invariant; an empty report means the net is valid.
std::vector<Violation> validate(const Hypernet& h);

struct TypeIssue {
    EdgeId edge = 0;
    std::string expected;
    std::string actual;
    std::string message;
};

struct Typing {
    TypeList operands;
    TypeList results;
    std::vector<TypeIssue> errors;

    bool ok() const { return errors.empty(); }
};

/// Checks edge typing at every level and returns the outermost interface
/// types. Box edges are checked against their inner interface.
Typing well_typed(const Hypernet& h);

/// Thrown by helpers that require a valid, well-typed net.
class TypeError : public Error {
public:
    using Error::Error;
};

/// Throws TypeError listing all issues unless `h` is valid and well typed.
void require_well_typed(const Hypernet& h, const std::string& context);

}  // namespace hyperad
