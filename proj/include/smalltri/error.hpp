#pragma once

#include <stdexcept>
#include <string>

namespace smalltri {

// Every failure carries a short machine-readable kind, e.g. "ParallelElements".
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail = "")
        : std::runtime_error(detail.empty() ? kind : kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace smalltri
