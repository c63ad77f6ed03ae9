#include "abc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "abc/errors.hpp"

namespace abc::io {

std::string format_double(double v) {
    char buf[40];
    // 17 significant digits always round-trips; prefer the shortest form
    // that does so the files stay readable.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string samples_csv_header(std::size_t theta_dim, std::size_t x_dim) {
    std::string h = "index";
    for (std::size_t i = 0; i < theta_dim; ++i) h += ",theta_" + std::to_string(i);
    h += ",weight";
    for (std::size_t i = 0; i < x_dim; ++i) h += ",x_" + std::to_string(i);
    return h;
}

void write_samples_csv(const std::filesystem::path& path, const WeightedSample& sample) {
    if (sample.entries.empty()) throw Error("refusing to write an empty samples file");
    const std::size_t p = sample.entries.front().theta.dim();
    bool all_have_x = true;
    for (const auto& e : sample.entries) {
        if (!e.x) {
            all_have_x = false;
            break;
        }
    }
    const std::size_t q = all_have_x ? sample.entries.front().x->dim() : 0;

    std::string out = samples_csv_header(p, q);
    out += "\n";
    for (std::size_t i = 0; i < sample.entries.size(); ++i) {
        const auto& e = sample.entries[i];
        out += std::to_string(i);
        for (std::size_t k = 0; k < p; ++k) {
            out += ",";
            out += format_double(e.theta[k]);
        }
        out += ",";
        out += format_double(e.weight);
        for (std::size_t k = 0; k < q; ++k) {
            out += ",";
            out += format_double((*e.x)[k]);
        }
        out += "\n";
    }
    write_text_atomic(path, out);
}

void write_density_table_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                             const std::vector<double>& normalized_density) {
    if (grid.size() != normalized_density.size()) {
        throw Error("density table: grid and density lengths differ");
    }
    std::string out = "theta,normalized_density\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_double(grid[i]);
        out += ",";
        out += format_double(normalized_density[i]);
        out += "\n";
    }
    write_text_atomic(path, out);
}

} // namespace abc::io
