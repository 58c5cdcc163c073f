#ifndef FISRG_ERRORS_HPP
#define FISRG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fisrg {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- file / format errors ---

/// File could not be opened, read, or written.
class FileError : public Error {
public:
    using Error::Error;
};

/// NIfTI header has a bad magic string or sizeof_hdr.
class MalformedHeader : public Error {
public:
    using Error::Error;
};

/// NIfTI datatype code outside the supported set.
class UnsupportedDatatype : public Error {
public:
    using Error::Error;
};

/// Declared extent disagrees with the actual payload (or mask shapes differ).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Image file is a format (or bit depth) outside the declared contract.
class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

/// Image file matched a supported format but its contents are corrupt.
class DecodeError : public Error {
public:
    using Error::Error;
};

// --- computation errors ---

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class ShapeOutOfBounds : public Error {
public:
    using Error::Error;
};

class NonPositiveSigma : public Error {
public:
    using Error::Error;
};

class EmptyRoi : public Error {
public:
    using Error::Error;
};

class InvalidK : public Error {
public:
    using Error::Error;
};

class NoValidSeeds : public Error {
public:
    using Error::Error;
};

class SeedOutOfBounds : public Error {
public:
    using Error::Error;
};

class EmptySeedSet : public Error {
public:
    using Error::Error;
};

class KernelOrderViolation : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

} // namespace fisrg

#endif // FISRG_ERRORS_HPP
