#pragma once

#include <stdexcept>
#include <string>

namespace locattr {

// Bad user input: malformed files, out-of-range ids, inconsistent lengths.
// The CLI maps every input_error to exit code 2.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vector length does not match the graph.
class dimension_error : public input_error {
public:
    using input_error::input_error;
};

// A parameter outside its documented range (delta, norm selector, cooling ratio...).
class config_error : public input_error {
public:
    using input_error::input_error;
};

// A caller violated an operation precondition.
class precondition_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// The background rate 1'y/N is 0 or 1, so the scan objective is undefined.
class degenerate_background_error : public input_error {
public:
    using input_error::input_error;
};

// An iterative solver failed to reach its tolerance. CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace locattr
