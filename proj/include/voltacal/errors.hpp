#pragma once

#include <stdexcept>
#include <string>

namespace voltacal {

// Common base so callers can catch everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// raw data loading
struct EmptyFile : Error { explicit EmptyFile(const std::string& m) : Error(m) {} };
struct MalformedRow : Error { explicit MalformedRow(const std::string& m) : Error(m) {} };

// peak extraction
struct WindowNotCovered : Error { explicit WindowNotCovered(const std::string& m) : Error(m) {} };
struct NoInteriorMinimum : Error { explicit NoInteriorMinimum(const std::string& m) : Error(m) {} };
struct TooFewReplicates : Error { explicit TooFewReplicates(const std::string& m) : Error(m) {} };

// calibration and regression
struct TooFewPoints : Error { explicit TooFewPoints(const std::string& m) : Error(m) {} };
struct DegenerateDesign : Error { explicit DegenerateDesign(const std::string& m) : Error(m) {} };
struct NonpositiveConcentration : Error { explicit NonpositiveConcentration(const std::string& m) : Error(m) {} };
struct DivisionByZero : Error { explicit DivisionByZero(const std::string& m) : Error(m) {} };
struct SlopeTooFlat : Error { explicit SlopeTooFlat(const std::string& m) : Error(m) {} };

// factorial statistics
struct UnbalancedDesign : Error { explicit UnbalancedDesign(const std::string& m) : Error(m) {} };
struct SingleReplicate : Error { explicit SingleReplicate(const std::string& m) : Error(m) {} };
struct ZeroVariance : Error { explicit ZeroVariance(const std::string& m) : Error(m) {} };
struct NonConvergence : Error { explicit NonConvergence(const std::string& m) : Error(m) {} };
struct NonIntegerMultiple : Error { explicit NonIntegerMultiple(const std::string& m) : Error(m) {} };

// bundled dataset access
struct UnknownTable : Error { explicit UnknownTable(const std::string& m) : Error(m) {} };
struct ChecksumMismatch : Error { explicit ChecksumMismatch(const std::string& m) : Error(m) {} };

}  // namespace voltacal
