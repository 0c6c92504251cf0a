#pragma once

#include <stdexcept>
#include <string>

namespace csrnbrw {

// Malformed input: self-loops, bad headers, mismatched edge sets, conflicting rows.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A metric that has no value on the given input (density of a 1-node graph,
// modularity of a graph with zero total weight).
class UndefinedMetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A statistical procedure refused to run (too few samples, degenerate margins).
class InsufficientDataError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace csrnbrw
