#include "imhom/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>

namespace imhom {

namespace {

template <typename Grid>
void csv_impl(const std::filesystem::path& path, const Grid& g, const Eigen::VectorXd& v) {
    if (v.size() != g.num_nodes) throw IoError("field export: size mismatch");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << std::setprecision(17);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        Eigen::VectorXd y = g.coords(idx);
        for (int k = 0; k < g.d; ++k) out << y[k] << ",";
        out << v[idx] << "\n";
    }
}

void bin_impl(const std::filesystem::path& path, int d, const std::vector<uint32_t>& sizes,
              const Eigen::VectorXd& v) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    uint32_t du = static_cast<uint32_t>(d);
    out.write(reinterpret_cast<const char*>(&du), sizeof(du));
    out.write(reinterpret_cast<const char*>(sizes.data()),
              static_cast<std::streamsize>(sizes.size() * sizeof(uint32_t)));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(v.size())));
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const TorusGrid& g,
                     const Eigen::VectorXd& v) {
    csv_impl(path, g, v);
}

void write_field_csv(const std::filesystem::path& path, const SlabGrid& g,
                     const Eigen::VectorXd& v) {
    csv_impl(path, g, v);
}

void write_field_bin(const std::filesystem::path& path, const TorusGrid& g,
                     const Eigen::VectorXd& v) {
    if (v.size() != g.num_nodes) throw IoError("field export: size mismatch");
    std::vector<uint32_t> sizes(static_cast<size_t>(g.d), static_cast<uint32_t>(g.n));
    bin_impl(path, g.d, sizes, v);
}

void write_field_bin(const std::filesystem::path& path, const SlabGrid& g,
                     const Eigen::VectorXd& v) {
    if (v.size() != g.num_nodes) throw IoError("field export: size mismatch");
    std::vector<uint32_t> sizes;
    sizes.push_back(static_cast<uint32_t>(g.n1 + 1));
    for (int k = 1; k < g.d; ++k) sizes.push_back(static_cast<uint32_t>(g.nt));
    bin_impl(path, g.d, sizes, v);
}

std::pair<std::vector<uint32_t>, Eigen::VectorXd> read_field_bin(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    uint32_t d = 0;
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    if (!in || d == 0 || d > 8) throw IoError("corrupt field dump header");
    std::vector<uint32_t> sizes(d);
    in.read(reinterpret_cast<char*>(sizes.data()),
            static_cast<std::streamsize>(d * sizeof(uint32_t)));
    long count = 1;
    for (uint32_t s : sizes) count *= s;
    Eigen::VectorXd v(count);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(count)));
    if (!in) throw IoError("corrupt field dump payload");
    return {sizes, v};
}

}  // namespace imhom
