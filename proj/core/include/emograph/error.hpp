#pragma once

#include <stdexcept>
#include <string>

namespace emograph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape disagreement between tensors/segments.
struct DimensionError : Error {
    using Error::Error;
};

// A caller-supplied value is outside its documented domain.
struct ArgumentError : Error {
    using Error::Error;
};

// Non-finite values, out-of-domain scalars, diverging losses.
struct NumericError : Error {
    using Error::Error;
};

// Bad run configuration (unknown keys, invalid combinations).
struct ConfigError : Error {
    using Error::Error;
};

// Dataset ingestion failures. The kind keeps parse failures, schema
// violations and dimension inconsistencies distinct for callers.
struct DataError : Error {
    enum class Kind { parse, schema, dimension };

    DataError(Kind k, const std::string& message)
        : Error(prefix(k) + message), kind(k) {}

    Kind kind;

private:
    static std::string prefix(Kind k) {
        switch (k) {
            case Kind::parse: return "parse error: ";
            case Kind::schema: return "schema violation: ";
            case Kind::dimension: return "dimension inconsistency: ";
        }
        return "";
    }
};

}  // namespace emograph
