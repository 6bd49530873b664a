#pragma once

#include <stdexcept>
#include <string>

namespace plrtest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PLRTEST_DEFINE_ERROR(Name)          \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

// Ingestion / export
PLRTEST_DEFINE_ERROR(IoError);
PLRTEST_DEFINE_ERROR(FormatError);
PLRTEST_DEFINE_ERROR(GapError);

// Detection
PLRTEST_DEFINE_ERROR(NoCircle);
PLRTEST_DEFINE_ERROR(HintRequired);

// Traces and dissimilarity
PLRTEST_DEFINE_ERROR(EmptyTrace);
PLRTEST_DEFINE_ERROR(NoOverlap);
PLRTEST_DEFINE_ERROR(DegenerateSeries);

// Evaluation
PLRTEST_DEFINE_ERROR(LengthMismatch);
PLRTEST_DEFINE_ERROR(UndefinedRate);
PLRTEST_DEFINE_ERROR(SingleClass);

// Synthesis
PLRTEST_DEFINE_ERROR(GeometryError);

// Invalid configuration values (violated type invariants).
PLRTEST_DEFINE_ERROR(ConfigError);

#undef PLRTEST_DEFINE_ERROR

}  // namespace plrtest
