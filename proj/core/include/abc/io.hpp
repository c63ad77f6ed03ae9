#ifndef ABC_IO_HPP
#define ABC_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "abc/sample.hpp"

namespace abc::io {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Write-temp-then-rename so a crash never leaves a partial artifact.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Fixed header `index,theta_0..theta_{p-1},weight[,x_0..x_{q-1}]`;
/// x columns appear iff x_dim > 0.
std::string samples_csv_header(std::size_t theta_dim, std::size_t x_dim);

/// UTF-8, LF line endings, header row, full-precision floats. The x block
/// is emitted only when every entry carries a simulated output.
void write_samples_csv(const std::filesystem::path& path, const WeightedSample& sample);

/// Two-column table `theta,normalized_density`.
void write_density_table_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                             const std::vector<double>& normalized_density);

} // namespace abc::io

#endif // ABC_IO_HPP
