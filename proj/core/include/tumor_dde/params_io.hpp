#pragma once

#include <string>
#include <vector>

#include "tumor_dde/model.hpp"

namespace tumor_dde {

struct FileConfig {
    ModelParams params;
    ChemoForcing forcing;  // constant(b_hat) when the file has no chemo block
    bool has_chemo = false;
};

// Strict schema: flat object with keys r, beta, b_hat, gamma, sigma, eta, p,
// m, g, a, tau1, tau2 and an optional chemo:{b0, eps, q}.  Unknown keys are
// rejected, every listed scalar is required.
FileConfig load_params_file(const std::string& path);
FileConfig parse_params_json(const std::string& text);

// Round-trip-exact decimal formatting (17 significant digits).
std::string format_g17(double v);

// CSV with a header row; every cell formatted by format_g17.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

// Writes through a temp file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

// Applies the output-directory override env var (TUMOR_DDE_OUT_DIR) to
// relative paths; absolute paths pass through.
std::string resolve_out_path(const std::string& path);

}  // namespace tumor_dde
