#pragma once

#include <string>
#include <vector>

#include "logman/model_manifold.hpp"

namespace logman {

struct CertificateRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::string detail;
};

/// Hypothesis-by-hypothesis outcome of a theorem check. The overall verdict
/// is the conjunction of the rows; notes are informational only.
class CertificateReport {
public:
    explicit CertificateReport(std::string theorem, std::string conclusion = {})
        : theorem_(std::move(theorem)), conclusion_(std::move(conclusion)) {}

    void add(std::string name, double lhs, double rhs, Verdict verdict, std::string detail = {});
    void add(std::string name, double lhs, double rhs, bool holds, std::string detail = {});
    void note(std::string text) { notes_.push_back(std::move(text)); }

    const std::string& theorem() const noexcept { return theorem_; }
    const std::vector<CertificateRow>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }
    const CertificateRow& row(const std::string& name) const;

    /// fails if any row fails, inconclusive if any row is undecided, else holds.
    Verdict overall() const;
    bool certified() const { return overall() == Verdict::holds; }
    /// Conclusion text when certified, otherwise a short explanation.
    std::string conclusion() const;

    /// Aligned plain-text table.
    std::string to_text() const;

private:
    std::string theorem_;
    std::string conclusion_;
    std::vector<CertificateRow> rows_;
    std::vector<std::string> notes_;
};

/// "%.17g"
std::string format_double(double x);

}  // namespace logman
