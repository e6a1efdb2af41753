#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace som_emission {

enum class ErrorKind {
    MissingHeader,
    MalformedRow,
    UnknownPosition,
    NonNumericField,
    NegativeField,
    NonPositiveFrequency,
    EmptyPosition,
    InvalidRange,
    InvalidConfig,
    DimensionMismatch,
    IndexOutOfRange,
    EmptyDataset,
    EmptyInput,
    NonPositiveK,
    NotOneDimensional,
    GridMismatch,
    ModelFormat,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MissingHeader: return "MissingHeader";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnknownPosition: return "UnknownPosition";
    case ErrorKind::NonNumericField: return "NonNumericField";
    case ErrorKind::NegativeField: return "NegativeField";
    case ErrorKind::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorKind::EmptyPosition: return "EmptyPosition";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonPositiveK: return "NonPositiveK";
    case ErrorKind::NotOneDimensional: return "NotOneDimensional";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ModelFormat: return "ModelFormat";
    }
    return "Unknown";
}

/// Every failure raised by the library. Parsing errors carry the 1-based
/// row (the header is row 1) and, where relevant, the column name.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail,
          std::optional<std::size_t> row = std::nullopt,
          std::string column = {})
        : std::runtime_error(format(kind, detail, row, column)),
          kind_(kind), row_(row), column_(std::move(column)) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    static std::string format(ErrorKind kind, const std::string& detail,
                              std::optional<std::size_t> row,
                              const std::string& column) {
        std::string msg = to_string(kind);
        if (row) {
            msg += "(row " + std::to_string(*row);
            if (!column.empty()) msg += ", column " + column;
            msg += ")";
        }
        if (!detail.empty()) msg += ": " + detail;
        return msg;
    }

    ErrorKind kind_;
    std::optional<std::size_t> row_;
    std::string column_;
};

}  // namespace som_emission
