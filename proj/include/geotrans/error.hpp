#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geotrans
{

/** @brief Machine-readable failure category carried by every Error. */
enum class ErrorCode {
    InvalidOperand,
    NonInvertible,
    UnsupportedRegime,
    Degenerate,
    NoIdealTriangle,
    UndefinedCrossRatio,
    Chart,
    DegenerateShape,
    NotAnosov,
    InvalidMatrix,
    InvalidWord,
    Evaluation,
    SingularPoint,
    Rank,
    ContinuationBudget,
    NoConvergence,
    InvalidStructure,
    Orientation,
    Io,
    Usage
};

/** @brief Stable snake-case name of an error code, used in CLI output. */
std::string_view to_string(ErrorCode code) noexcept;

/** @brief True for codes that signal a mathematical failure rather than bad input plumbing. */
bool is_math_error(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(detail), code_{code}
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace geotrans
