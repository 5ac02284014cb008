#ifndef PCFL_IO_HPP
#define PCFL_IO_HPP

#include <optional>
#include <string>

#include "pcfl/core.hpp"
#include "pcfl/equiv.hpp"

namespace pcfl {

enum class ReportFormat { text, json, csv };

ReportFormat parse_format(const std::string& name);

// Everything a coarsening run reports: the two partitions, and, when the run
// produced them, the coarse CPT and the expected-utility profile.
struct AnalysisReport {
    ValueSpace cause_space;
    ValueSpace effect_space;
    Partition cause_partition;
    Partition effect_partition;
    std::optional<Cpt> coarse_cpt;
    std::optional<ExpectedUtilityProfile> eu_profile;
};

// Sample CSV: header `c,e` or `c,e,u`; vector mode via `c_1..c_d,e_1..e_k`
// headers (optionally followed by `u`). Errors carry 1-based line numbers.
SampleSet parse_samples_csv(const std::string& path);
SampleSet parse_samples_csv_text(const std::string& text, const std::string& name = "<input>");

// Matrix CSV: first row holds the effect labels, first column the cause
// labels. CPT rows are renormalized only when within 1e-6 of 1.
Cpt parse_cpt_csv(const std::string& path, CptKind kind);
Cpt parse_cpt_csv_text(const std::string& text, CptKind kind,
                       const std::string& name = "<input>");
UtilityTable parse_utility_csv(const std::string& path);
UtilityTable parse_utility_csv_text(const std::string& text,
                                    const std::string& name = "<input>");

std::string emit_samples_csv(const SampleSet& data);
std::string emit_matrix_csv(const ValueSpace& cause_space, const ValueSpace& effect_space,
                            const std::vector<std::vector<double>>& values);

std::string emit_report(const AnalysisReport& report, ReportFormat format);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pcfl

#endif
