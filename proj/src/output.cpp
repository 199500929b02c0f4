#include "shgal/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace shgal {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& document) {
    write_file_atomic(path, document.dump(2) + "\n");
}

std::string diagnostics_csv(const std::vector<Diagnostics>& rows) {
    std::string out = kDiagnosticsHeader;
    out += '\n';
    for (const Diagnostics& d : rows) {
        for (double value : {d.time, d.l2, d.h10, d.h20, d.v, d.l2n, d.psi, d.manifold_residual}) {
            out += format_double(value);
            out += ',';
        }
        out += format_double(d.dudt_l2);
        out += '\n';
    }
    return out;
}

std::string snapshots_csv(const Trajectory& trajectory, const Collocation& grid, int stride) {
    const int dim = grid.domain().dimension;
    std::string out = dim == 1 ? "time,x,u\n" : "time,x,y,u\n";
    const int m = grid.points();
    for (std::size_t r = 0; r < trajectory.size(); r += static_cast<std::size_t>(stride)) {
        const GridField field = to_grid(trajectory.states[r], grid);
        const std::string t = format_double(trajectory.times[r]) + ",";
        if (dim == 1) {
            for (int i = 0; i < m; ++i)
                out += t + format_double(grid.node(0, i)) + "," + format_double(field.values[i]) + "\n";
        } else {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    out += t + format_double(grid.node(0, i)) + "," + format_double(grid.node(1, j)) +
                           "," + format_double(field.values[static_cast<std::size_t>(i) * m + j]) + "\n";
        }
    }
    return out;
}

std::string table_csv(const std::string& header, const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace shgal
