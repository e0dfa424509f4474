#include "logman/certificate.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "logman/error.hpp"

namespace logman {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CertificateReport::add(std::string name, double lhs, double rhs, Verdict verdict,
                            std::string detail) {
    rows_.push_back({std::move(name), lhs, rhs, verdict, std::move(detail)});
}

void CertificateReport::add(std::string name, double lhs, double rhs, bool holds, std::string detail) {
    add(std::move(name), lhs, rhs, holds ? Verdict::holds : Verdict::fails, std::move(detail));
}

const CertificateRow& CertificateReport::row(const std::string& name) const {
    for (const auto& r : rows_)
        if (r.name == name) return r;
    throw DomainError("no row named '" + name + "' in " + theorem_);
}

Verdict CertificateReport::overall() const {
    if (rows_.empty()) return Verdict::inconclusive;
    bool undecided = false;
    for (const auto& r : rows_) {
        if (r.verdict == Verdict::fails) return Verdict::fails;
        if (r.verdict == Verdict::inconclusive) undecided = true;
    }
    return undecided ? Verdict::inconclusive : Verdict::holds;
}

std::string CertificateReport::conclusion() const {
    switch (overall()) {
        case Verdict::holds: return conclusion_.empty() ? "all hypotheses hold" : conclusion_;
        case Verdict::fails: return "inconclusive: at least one hypothesis fails";
        case Verdict::inconclusive: return "inconclusive: a hypothesis could not be decided";
    }
    return {};
}

std::string CertificateReport::to_text() const {
    std::size_t wname = 10, wl = 3, wr = 3, wv = 7;
    std::vector<std::array<std::string, 3>> cells;
    for (const auto& r : rows_) {
        cells.push_back({format_double(r.lhs), format_double(r.rhs), to_string(r.verdict)});
        wname = std::max(wname, r.name.size());
        wl = std::max(wl, cells.back()[0].size());
        wr = std::max(wr, cells.back()[1].size());
    }
    std::ostringstream out;
    out << "theorem: " << theorem_ << "\n";
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
    out << pad("hypothesis", wname) << "  " << pad("lhs", wl) << "  " << pad("rhs", wr) << "  "
        << pad("verdict", wv) << "  detail\n";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        out << pad(rows_[i].name, wname) << "  " << pad(cells[i][0], wl) << "  " << pad(cells[i][1], wr)
            << "  " << pad(cells[i][2], wv) << "  " << rows_[i].detail << "\n";
    }
    for (const auto& n : notes_) out << "note: " << n << "\n";
    out << "overall: " << to_string(overall()) << "\n";
    out << "conclusion: " << conclusion() << "\n";
    return out.str();
}

}  // namespace logman
