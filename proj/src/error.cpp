#include "geotrans/error.hpp"

namespace geotrans
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidOperand: return "invalid-operand";
        case ErrorCode::NonInvertible: return "non-invertible";
        case ErrorCode::UnsupportedRegime: return "unsupported-regime";
        case ErrorCode::Degenerate: return "degenerate";
        case ErrorCode::NoIdealTriangle: return "no-ideal-triangle";
        case ErrorCode::UndefinedCrossRatio: return "undefined-cross-ratio";
        case ErrorCode::Chart: return "chart";
        case ErrorCode::DegenerateShape: return "degenerate-shape";
        case ErrorCode::NotAnosov: return "not-anosov";
        case ErrorCode::InvalidMatrix: return "invalid-matrix";
        case ErrorCode::InvalidWord: return "invalid-word";
        case ErrorCode::Evaluation: return "evaluation";
        case ErrorCode::SingularPoint: return "singular-point";
        case ErrorCode::Rank: return "rank";
        case ErrorCode::ContinuationBudget: return "continuation-budget";
        case ErrorCode::NoConvergence: return "no-convergence";
        case ErrorCode::InvalidStructure: return "invalid-structure";
        case ErrorCode::Orientation: return "orientation";
        case ErrorCode::Io: return "io";
        case ErrorCode::Usage: return "usage";
    }
    return "unknown";
}

bool is_math_error(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::Usage:
        case ErrorCode::InvalidWord:
            return false;
        default:
            return true;
    }
}

}  // namespace geotrans
