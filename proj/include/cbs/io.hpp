#pragma once

#include <string>
#include <vector>

#include "cbs/assembler.hpp"
#include "cbs/config.hpp"

namespace cbs {

std::string version();

struct SpectrumRecord {
    RunConfig config;
    SpectrumResult result;
    double s = 0.0;
    std::string mode;  // resolved level mode
};

struct EnhancementRow {
    std::string sweep_value;
    double alpha = 1.0, L_el = 0.0, C_el = 0.0, L_in = 0.0, C_in = 0.0;
};

struct EnhancementRecord {
    RunConfig config;
    std::vector<EnhancementRow> rows;
    QuadDiagnostics diag;
};

// Fixed scientific notation with 12 significant digits, independent of locale.
std::string format_fixed(double x);

std::string spectrum_csv(const SpectrumRecord& r);
std::string spectrum_json(const SpectrumRecord& r);
std::string enhancement_csv(const EnhancementRecord& r);
std::string enhancement_json(const EnhancementRecord& r);

// Writes to path, or stdout when path is empty. Throws ConfigError if the file cannot be written.
void write_output(const std::string& path, const std::string& content);

}  // namespace cbs
