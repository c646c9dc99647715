#pragma once

#include <stdexcept>

namespace bmv {

/// A mathematical identity the library relies on failed on concrete data.
/// This signals an engine bug (or a false identity) and must never be swallowed.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bmv
