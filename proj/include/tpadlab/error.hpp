#pragma once

#include <stdexcept>
#include <string>

namespace tpadlab {

/// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input could not be read or violates a record invariant. CLI exit code 2.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input was well formed but the analysis could not produce a result. CLI exit code 3.
class AnalysisError : public Error {
public:
    using Error::Error;
};

class MalformedMaterialFile : public ParseError {
public:
    using ParseError::ParseError;
};

class InvalidProperty : public ParseError {
public:
    using ParseError::ParseError;
};

class MalformedTraceFile : public ParseError {
public:
    using ParseError::ParseError;
};

class MalformedSpectrumFile : public ParseError {
public:
    using ParseError::ParseError;
};

class InsufficientSamples : public ParseError {
public:
    using ParseError::ParseError;
};

class DegenerateAmplitude : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class OutOfContourRange : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class NoResonanceFound : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class EmptyGrid : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class DriveFrequencyNotFound : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class NoLdvChannel : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

}  // namespace tpadlab
